#pragma once

// Monte-Carlo rollout decision engine.
//
// Given a decision state, the engine enumerates candidate afterstates and
// estimates each one's value under a base policy by playing seeded trials
// from it. Trials are scheduled in rounds of `batch_size` per active
// candidate; after each non-final round, candidates that are statistically
// unlikely to be best, or close enough to the leader to be equivalent, are
// pruned and receive no further trials. The decision is the argmax of the
// estimated means among unpruned candidates.
//
// Every trial draws from its own stream seeded by
// schedule_trial_seed(master_seed, candidate, trial), and outcomes are merged
// in (candidate, trial) order, so the report does not depend on the number
// of workers or on scheduling.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mcr/random.hpp"
#include "mcr/stats.hpp"
#include "mcr/text_util.hpp"
#include "mcr/worker_pool.hpp"

namespace mcr {

class ConfigInvalid : public std::invalid_argument {
 public:
  ConfigInvalid(std::string field, const std::string& why)
      : std::invalid_argument("config-invalid: " + field + ": " + why), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class NoCandidates : public std::logic_error {
 public:
  NoCandidates() : std::logic_error("no-candidates: state has no legal continuation") {}
};

class EvaluatorMissing : public std::logic_error {
 public:
  EvaluatorMissing() : std::logic_error("evaluator-missing: truncated trials need a leaf evaluator") {}
};

// Play until the task reports a terminal value. Hitting the ply cap scores 0
// and flags the trial as truncated.
struct ToCompletion {
  std::uint32_t max_plies = 2000;
  friend bool operator==(const ToCompletion&, const ToCompletion&) = default;
};

// Play exactly k plies (fewer if the game ends), then score the reached
// position with the leaf evaluator.
struct Truncated {
  std::uint32_t k_plies = 7;
  std::string evaluator_id;
  friend bool operator==(const Truncated&, const Truncated&) = default;
};

using Termination = std::variant<ToCompletion, Truncated>;

struct DecisionConfig {
  std::uint64_t max_trials_per_candidate = 1000;
  std::uint64_t batch_size = 100;
  double z = 3.0;
  double epsilon = 0.0;
  bool pruning = true;
  Termination termination = ToCompletion{};
  std::uint64_t master_seed = 0;
};

inline void validate(const DecisionConfig& c, double value_range_width) {
  if (c.max_trials_per_candidate == 0) throw ConfigInvalid("max_trials", "must be positive");
  if (c.max_trials_per_candidate > kMaxTrialIndex) throw ConfigInvalid("max_trials", "too large");
  if (c.batch_size == 0) throw ConfigInvalid("batch_size", "must be positive");
  if (c.batch_size > c.max_trials_per_candidate) {
    throw ConfigInvalid("batch_size", "must not exceed max_trials");
  }
  if (!(c.z >= 0.0) || !std::isfinite(c.z)) throw ConfigInvalid("z", "must be a finite non-negative number");
  if (!(c.epsilon >= 0.0)) throw ConfigInvalid("epsilon", "must be non-negative");
  if (!(c.epsilon < value_range_width)) throw ConfigInvalid("epsilon", "must be below the task value range width");
  if (const auto* full = std::get_if<ToCompletion>(&c.termination)) {
    if (full->max_plies == 0) throw ConfigInvalid("max_plies", "must be positive");
  } else if (std::get<Truncated>(c.termination).k_plies == 0) {
    throw ConfigInvalid("k_plies", "must be positive");
  }
}

enum class CandidateStatus { active, pruned_confidence, pruned_equivalent, forced_winner };

[[nodiscard]] constexpr std::string_view to_string(CandidateStatus s) noexcept {
  switch (s) {
    case CandidateStatus::active: return "active";
    case CandidateStatus::pruned_confidence: return "pruned_confidence";
    case CandidateStatus::pruned_equivalent: return "pruned_equivalent";
    case CandidateStatus::forced_winner: return "forced_winner";
  }
  return "?";
}

[[nodiscard]] constexpr bool is_pruned(CandidateStatus s) noexcept {
  return s == CandidateStatus::pruned_confidence || s == CandidateStatus::pruned_equivalent;
}

struct CandidateEstimate {
  std::size_t id = 0;
  RunningStats stats;
  CandidateStatus status = CandidateStatus::active;
  std::optional<std::uint32_t> pruned_at_round;
  std::uint64_t plies = 0;
  std::uint64_t truncated_trials = 0;
};

struct DecisionReport {
  std::size_t chosen = 0;
  std::vector<CandidateEstimate> candidates;
  std::uint32_t rounds = 0;
  std::uint64_t total_trials = 0;
  std::uint64_t total_plies = 0;
  double wall_seconds = 0.0;
  DecisionConfig config;

  // N, B, D of the T ~ N*B*D cost model.
  [[nodiscard]] double mean_trials_per_candidate() const noexcept {
    return candidates.empty() ? 0.0
                              : static_cast<double>(total_trials) / static_cast<double>(candidates.size());
  }
  [[nodiscard]] std::size_t branching() const noexcept { return candidates.size(); }
  [[nodiscard]] double mean_depth() const noexcept {
    return total_trials == 0 ? 0.0 : static_cast<double>(total_plies) / static_cast<double>(total_trials);
  }
};

struct TrialOutcome {
  double value = 0.0;  // deciding player's perspective
  std::uint32_t plies = 0;
  bool truncated = false;
};

// A pluggable task. `State` is an afterstate (a position after some player
// moved); `DecisionState` is what a decision is made from. Values reported by
// terminal_value are in a fixed perspective; perspective_sign(s) is +1 when
// the player who produced afterstate s is that fixed side, -1 otherwise.
template <class M>
concept TaskModel = requires(const M& m, const typename M::DecisionState& d, const typename M::State& s) {
  { m.candidates(d) } -> std::same_as<std::vector<typename M::State>>;
  { m.terminal_value(s) } -> std::same_as<std::optional<double>>;
  { m.perspective_sign(s) } -> std::convertible_to<double>;
  { m.value_range() } -> std::same_as<Interval>;
};

template <class P, class State>
concept BasePolicy = requires(const P& p, const State& s, std::span<const State> options, Rng& rng) {
  { p.choose(s, options, rng) } -> std::convertible_to<std::size_t>;
};

// advance(s, policy, rng): sample the chance event at s and let the player
// to move pick a successor afterstate with the policy.
template <class M, class P>
concept Simulatable = TaskModel<M> && BasePolicy<P, typename M::State> &&
                      requires(const M& m, const typename M::State& s, const P& p, Rng& rng) {
                        { m.advance(s, p, rng) } -> std::same_as<typename M::State>;
                      };

// Leaf value in the task's fixed perspective.
template <class State>
using LeafEvaluator = std::function<double(const State&)>;

template <class State>
struct ExecOptions {
  WorkerPool* pool = nullptr;
  LeafEvaluator<State> leaf;
};

template <class M, class P>
  requires Simulatable<M, P>
TrialOutcome run_trial(const typename M::State& afterstate, const M& model, const P& policy,
                       const Termination& termination, Rng& stream,
                       const LeafEvaluator<typename M::State>& leaf = {}) {
  const auto* truncated = std::get_if<Truncated>(&termination);
  if (truncated && !leaf) throw EvaluatorMissing();
  const std::uint32_t limit =
      truncated ? truncated->k_plies : std::get<ToCompletion>(termination).max_plies;

  const double sign = model.perspective_sign(afterstate);
  typename M::State s = afterstate;
  std::uint32_t plies = 0;
  for (;;) {
    if (auto v = model.terminal_value(s)) return {sign * *v, plies, false};
    if (plies >= limit) {
      if (truncated) return {sign * leaf(s), plies, true};
      return {0.0, plies, true};
    }
    s = model.advance(s, policy, stream);
    ++plies;
  }
}

// Marks active candidates that cannot plausibly beat the current leader.
// With best = highest-mean active candidate and LCB = mean - z*se, candidate
// i is pruned when UCB_i < LCB_best + epsilon: as pruned_confidence when
// UCB_i < LCB_best, otherwise as pruned_equivalent. No-op when fewer than two
// candidates are active or any active candidate has fewer than two trials.
inline std::size_t prune_step(std::span<CandidateEstimate> estimates, double z, double epsilon,
                              std::uint32_t round = 0) {
  std::size_t active = 0;
  const CandidateEstimate* best = nullptr;
  for (const auto& e : estimates) {
    if (e.status != CandidateStatus::active) continue;
    if (e.stats.count < 2) return 0;
    ++active;
    if (!best || e.stats.mean > best->stats.mean) best = &e;
  }
  if (active < 2) return 0;

  const double lcb_best = best->stats.mean - z * best->stats.standard_error();
  std::size_t pruned = 0;
  for (auto& e : estimates) {
    if (&e == best || e.status != CandidateStatus::active) continue;
    const double ucb = e.stats.mean + z * e.stats.standard_error();
    if (ucb < lcb_best + epsilon) {
      e.status = ucb < lcb_best ? CandidateStatus::pruned_confidence : CandidateStatus::pruned_equivalent;
      e.pruned_at_round = round;
      ++pruned;
    }
  }
  return pruned;
}

// Index of the highest-mean candidate that is not pruned; lowest id on ties.
[[nodiscard]] inline std::size_t select_best(std::span<const CandidateEstimate> estimates) {
  std::size_t best = estimates.size();
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (is_pruned(estimates[i].status)) continue;
    if (best == estimates.size() || estimates[i].stats.mean > estimates[best].stats.mean) best = i;
  }
  return best;
}

// Rolls out a precomputed, deterministically ordered candidate list.
template <class M, class P>
  requires Simulatable<M, P>
DecisionReport decide_among(std::span<const typename M::State> candidates, const M& model, const P& policy,
                            const DecisionConfig& config, const ExecOptions<typename M::State>& exec = {}) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();

  validate(config, model.value_range().width());
  if (candidates.empty()) throw NoCandidates();
  if (std::holds_alternative<Truncated>(config.termination) && !exec.leaf) throw EvaluatorMissing();
  if (candidates.size() > kMaxCandidateId) throw ConfigInvalid("candidates", "too many candidates");

  DecisionReport report;
  report.config = config;
  report.candidates.resize(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) report.candidates[i].id = i;

  if (candidates.size() == 1) {
    report.candidates[0].status = CandidateStatus::forced_winner;
    report.chosen = 0;
    report.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return report;
  }

  struct Item {
    std::size_t candidate;
    std::uint64_t trial;
  };
  std::vector<Item> items;
  std::vector<TrialOutcome> outcomes;
  auto& est = report.candidates;
  const std::uint64_t max_trials = config.max_trials_per_candidate;

  for (;;) {
    items.clear();
    for (const auto& e : est) {
      if (e.status != CandidateStatus::active || e.stats.count >= max_trials) continue;
      const std::uint64_t end = std::min(e.stats.count + config.batch_size, max_trials);
      for (std::uint64_t t = e.stats.count; t < end; ++t) items.push_back({e.id, t});
    }
    if (items.empty()) break;
    ++report.rounds;

    outcomes.assign(items.size(), TrialOutcome{});
    auto body = [&](std::size_t i) {
      Rng stream(schedule_trial_seed(config.master_seed, items[i].candidate, items[i].trial));
      outcomes[i] = run_trial(candidates[items[i].candidate], model, policy, config.termination, stream, exec.leaf);
    };
    if (exec.pool) {
      exec.pool->parallel_for(items.size(), body);
    } else {
      for (std::size_t i = 0; i < items.size(); ++i) body(i);
    }

    for (std::size_t i = 0; i < items.size(); ++i) {
      auto& e = est[items[i].candidate];
      e.stats.push(outcomes[i].value);
      e.plies += outcomes[i].plies;
      if (outcomes[i].truncated) ++e.truncated_trials;
      ++report.total_trials;
      report.total_plies += outcomes[i].plies;
    }

    bool all_done = true;
    std::size_t active = 0;
    for (const auto& e : est) {
      if (e.status != CandidateStatus::active) continue;
      ++active;
      if (e.stats.count < max_trials) all_done = false;
    }
    if (all_done) break;
    if (config.pruning) {
      prune_step(est, config.z, config.epsilon, report.rounds);
      active = 0;
      for (const auto& e : est) active += e.status == CandidateStatus::active;
    }
    if (active <= 1) break;
  }

  report.chosen = select_best(est);
  report.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

template <class M, class P>
  requires Simulatable<M, P>
DecisionReport decide(const typename M::DecisionState& state, const M& model, const P& policy,
                      const DecisionConfig& config, const ExecOptions<typename M::State>& exec = {}) {
  const auto candidates = model.candidates(state);
  return decide_among<M, P>(std::span<const typename M::State>(candidates), model, policy, config, exec);
}

// Stable key = value rendering of a report, without wall time.
inline void write_report_body(std::ostream& os, const DecisionReport& r) {
  const auto& c = r.config;
  os << "max_trials = " << c.max_trials_per_candidate << '\n'
     << "batch_size = " << c.batch_size << '\n'
     << "z = " << format_double(c.z) << '\n'
     << "epsilon = " << format_double(c.epsilon) << '\n'
     << "pruning = " << (c.pruning ? "on" : "off") << '\n';
  if (const auto* full = std::get_if<ToCompletion>(&c.termination)) {
    os << "termination = full\n"
       << "max_plies = " << full->max_plies << '\n';
  } else {
    const auto& t = std::get<Truncated>(c.termination);
    os << "termination = truncated\n"
       << "k_plies = " << t.k_plies << '\n'
       << "leaf_evaluator = " << t.evaluator_id << '\n';
  }
  os << "master_seed = " << c.master_seed << '\n'
     << "chosen = " << r.chosen << '\n'
     << "candidates = " << r.candidates.size() << '\n'
     << "rounds = " << r.rounds << '\n'
     << "total_trials = " << r.total_trials << '\n'
     << "total_plies = " << r.total_plies << '\n'
     << "mean_depth = " << format_double(r.mean_depth()) << '\n';
  for (const auto& e : r.candidates) {
    os << "candidate." << e.id << " = " << to_string(e.status) << ' ' << e.stats.count << ' '
       << format_double(e.stats.mean) << ' ' << format_double(e.stats.standard_error()) << ' '
       << (e.pruned_at_round ? std::to_string(*e.pruned_at_round) : std::string("-")) << ' '
       << e.plies << ' ' << e.truncated_trials << '\n';
  }
}

}  // namespace mcr
