#pragma once

// Player specs on the command line:
//
//   random | pip | linear:PATH          base policy, greedy on the evaluator
//   <base>+noise=X                      Gaussian evaluation noise
//   rollout:<base>                      Monte-Carlo rollouts of <base>
//
// Evaluator specs (leaf evaluators): pip | linear:PATH.

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mcr/bench/player.hpp"
#include "mcr/engine.hpp"
#include "mcr/eval/evaluator.hpp"
#include "mcr/eval/policy.hpp"
#include "mcr/eval/weights_io.hpp"
#include "mcr/text_util.hpp"

namespace mcr::cli {

// Bad flags, missing files, malformed specs: exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(const std::string& key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(key) {}
  [[nodiscard]] const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

[[nodiscard]] inline std::shared_ptr<const eval::Evaluator> make_evaluator(std::string_view spec,
                                                                           const std::string& key) {
  if (spec == "pip") return std::make_shared<eval::PipEvaluator>();
  if (spec.substr(0, 7) == "linear:") {
    const std::string path(spec.substr(7));
    if (path.empty() || !std::filesystem::is_regular_file(path)) {
      throw ValidationError(key, "weights file not found: '" + path + "'");
    }
    try {
      return std::make_shared<eval::LinearEvaluator>(eval::load_weights(path));
    } catch (const std::exception& e) {
      throw ValidationError(key, e.what());
    }
  }
  throw ValidationError(key, "unknown evaluator '" + std::string(spec) + "' (expected pip or linear:PATH)");
}

[[nodiscard]] inline eval::Policy make_policy(std::string_view spec, const std::string& key) {
  double noise = 0.0;
  if (const auto cut = spec.find("+noise="); cut != std::string_view::npos) {
    if (!parse_double(spec.substr(cut + 7), noise) || !(noise >= 0.0)) {
      throw ValidationError(key, "bad noise in '" + std::string(spec) + "'");
    }
    spec = spec.substr(0, cut);
  }
  if (spec == "random") {
    if (noise > 0.0) throw ValidationError(key, "noise needs an evaluator policy");
    return eval::Policy::random();
  }
  return eval::Policy::greedy(make_evaluator(spec, key), noise);
}

// Rollout settings shared by every rollout player of a run.
struct RolloutFlags {
  std::uint64_t trials = 300;
  std::uint64_t batch = 50;
  double z = 3.0;
  double epsilon = 0.0;
  std::string pruning = "on";
  std::uint32_t truncate = 0;  // 0 = play to completion
  std::string leaf;            // default: the base policy's evaluator
  std::uint32_t max_plies = 2000;
};

struct ResolvedRollout {
  DecisionConfig config;
  LeafEvaluator<bg::Board> leaf;
};

[[nodiscard]] inline ResolvedRollout resolve_rollout(const RolloutFlags& f, const eval::Policy& base,
                                                     std::uint64_t seed) {
  if (!f.leaf.empty() && f.truncate == 0) throw ValidationError("leaf", "only meaningful with --truncate");
  ResolvedRollout r;
  r.config.max_trials_per_candidate = f.trials;
  r.config.batch_size = f.batch;
  r.config.z = f.z;
  r.config.epsilon = f.epsilon;
  r.config.pruning = f.pruning == "on";
  r.config.master_seed = seed;
  if (f.truncate == 0) {
    r.config.termination = ToCompletion{f.max_plies};
  } else {
    std::shared_ptr<const eval::Evaluator> leaf;
    if (!f.leaf.empty()) {
      leaf = make_evaluator(f.leaf, "leaf");
    } else if (!base.is_random()) {
      leaf = base.evaluator();
    } else {
      throw ValidationError("leaf", "truncated rollouts of a random base need --leaf");
    }
    r.config.termination = Truncated{f.truncate, leaf->id()};
    r.leaf = eval::make_leaf(leaf);
  }
  validate(r.config, 6.0);
  return r;
}

[[nodiscard]] inline bool is_rollout_spec(std::string_view spec) { return spec.substr(0, 8) == "rollout:"; }

[[nodiscard]] inline std::unique_ptr<bench::Player> make_player(std::string_view spec, const RolloutFlags& flags,
                                                                const std::string& key, WorkerPool* pool) {
  if (is_rollout_spec(spec)) {
    auto base = make_policy(spec.substr(8), key);
    auto r = resolve_rollout(flags, base, 0);
    return std::make_unique<bench::RolloutPlayer>(std::move(base), r.config, std::move(r.leaf), pool);
  }
  return std::make_unique<bench::PolicyPlayer>(make_policy(spec, key));
}

}  // namespace mcr::cli
