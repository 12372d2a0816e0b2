#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include "mcr/backgammon/board.hpp"
#include "mcr/backgammon/movegen.hpp"
#include "mcr/backgammon/task.hpp"
#include "mcr/engine.hpp"
#include "mcr/eval/policy.hpp"
#include "mcr/random.hpp"

namespace mcr::bench {

using bg::Board;
using bg::DiceRoll;

// Anything that can pick a move in a match or on a test position.
// `afterstates` are the legal afterstates in canonical order; the choice must
// be a pure function of the arguments.
class Player {
 public:
  virtual ~Player() = default;
  [[nodiscard]] virtual std::size_t choose(const Board& board, const DiceRoll& roll,
                                           std::span<const Board> afterstates,
                                           std::uint64_t decision_seed) const = 0;
  [[nodiscard]] virtual std::string id() const = 0;
};

class PolicyPlayer final : public Player {
 public:
  explicit PolicyPlayer(eval::Policy policy) : policy_(std::move(policy)) {}

  [[nodiscard]] std::size_t choose(const Board& board, const DiceRoll&, std::span<const Board> afterstates,
                                   std::uint64_t decision_seed) const override {
    Rng rng(decision_seed);
    return policy_.choose(board, afterstates, rng);
  }
  [[nodiscard]] std::string id() const override { return policy_.id(); }
  [[nodiscard]] const eval::Policy& policy() const noexcept { return policy_; }

 private:
  eval::Policy policy_;
};

// Monte-Carlo improvement of a base policy: every decision runs the rollout
// engine over the legal afterstates with master seed = decision seed.
class RolloutPlayer final : public Player {
 public:
  RolloutPlayer(eval::Policy base, DecisionConfig config, LeafEvaluator<Board> leaf = {},
                WorkerPool* pool = nullptr)
      : base_(std::move(base)), config_(std::move(config)), leaf_(std::move(leaf)), pool_(pool) {
    validate(config_, 6.0);
    if (std::holds_alternative<Truncated>(config_.termination) && !leaf_) throw EvaluatorMissing();
  }

  [[nodiscard]] DecisionReport decide(std::span<const Board> afterstates, std::uint64_t decision_seed) const {
    DecisionConfig cfg = config_;
    cfg.master_seed = decision_seed;
    return decide_among(afterstates, task_, base_, cfg, ExecOptions<Board>{pool_, leaf_});
  }

  [[nodiscard]] std::size_t choose(const Board&, const DiceRoll&, std::span<const Board> afterstates,
                                   std::uint64_t decision_seed) const override {
    if (afterstates.size() <= 1) return 0;
    return decide(afterstates, decision_seed).chosen;
  }

  [[nodiscard]] std::string id() const override {
    std::string out = "rollout(" + base_.id();
    if (const auto* t = std::get_if<Truncated>(&config_.termination)) out += ",k=" + std::to_string(t->k_plies);
    return out + ")";
  }

  [[nodiscard]] const DecisionConfig& config() const noexcept { return config_; }

 private:
  bg::BackgammonTask task_;
  eval::Policy base_;
  DecisionConfig config_;
  LeafEvaluator<Board> leaf_;
  WorkerPool* pool_;
};

}  // namespace mcr::bench
