#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <sstream>
#include <vector>

#include "mcr/backgammon/position_text.hpp"
#include "mcr/backgammon/task.hpp"
#include "mcr/bench/toy.hpp"
#include "mcr/engine.hpp"
#include "mcr/eval/policy.hpp"
#include "support.hpp"

using namespace mcr;
using bg::Board;
using bg::DiceRoll;

namespace {

CandidateEstimate estimate(std::size_t id, double mean, double se) {
  CandidateEstimate e;
  e.id = id;
  e.stats.count = 100;
  e.stats.mean = mean;
  e.stats.m2 = se * se * 100.0 * 99.0;
  return e;
}

// Candidates are terminal on arrival and carry a fixed value.
struct FixedValueTask {
  struct State {
    double value = 0.0;
  };
  using DecisionState = std::vector<double>;

  [[nodiscard]] std::vector<State> candidates(const DecisionState& d) const {
    std::vector<State> out;
    for (double v : d) out.push_back({v});
    return out;
  }
  [[nodiscard]] std::optional<double> terminal_value(const State& s) const { return s.value; }
  [[nodiscard]] double perspective_sign(const State&) const { return 1.0; }
  [[nodiscard]] Interval value_range() const { return {-10.0, 10.0}; }
  template <class P>
  [[nodiscard]] State advance(const State& s, const P&, Rng&) const {
    return s;
  }
};

struct FirstOption {
  template <class S>
  [[nodiscard]] std::size_t choose(const S&, std::span<const S>, Rng&) const {
    return 0;
  }
};

std::string body(const DecisionReport& r) {
  std::ostringstream os;
  write_report_body(os, r);
  return os.str();
}

toy::ToyDecision random_toy_decision(Rng& rng, std::size_t candidates) {
  toy::ToyDecision d;
  d.distance = 6 + static_cast<int>(rng.uniform_below(20));
  for (std::size_t k = 0; k < candidates; ++k) d.bonuses.push_back(rng.uniform01() * 1.6 - 0.8);
  return d;
}

std::vector<double> toy_exact(const toy::ToyDecision& d, toy::ToyPolicyKind kind) {
  std::vector<double> out;
  for (const auto& c : toy::DiceRaceTask{}.candidates(d)) out.push_back(toy::toy_exact_value(c, kind));
  return out;
}

}  // namespace

TEST(PruneStep, ConfidenceExample) {
  std::vector<CandidateEstimate> est{estimate(0, 0.5, 0.01), estimate(1, 0.4, 0.01)};
  EXPECT_EQ(prune_step(est, 3.0, 0.0, 1), 1u);
  EXPECT_EQ(est[0].status, CandidateStatus::active);
  EXPECT_EQ(est[1].status, CandidateStatus::pruned_confidence);
  EXPECT_EQ(est[1].pruned_at_round, 1u);
}

TEST(PruneStep, IdenticalStatsNeitherPruned) {
  std::vector<CandidateEstimate> est{estimate(0, 0.3, 0.02), estimate(1, 0.3, 0.02)};
  EXPECT_EQ(prune_step(est, 3.0, 0.1), 0u);
  EXPECT_EQ(est[0].status, CandidateStatus::active);
  EXPECT_EQ(est[1].status, CandidateStatus::active);
}

TEST(PruneStep, EpsilonMarginSplitsConfidenceAndEquivalent) {
  // A .50/.002 vs B .48/.002: UCB_B = .486 lies below LCB_A = .494, so the
  // rule classifies B as a confidence prune even with epsilon = .05.
  std::vector<CandidateEstimate> est{estimate(0, 0.50, 0.002), estimate(1, 0.48, 0.002)};
  EXPECT_EQ(prune_step(est, 3.0, 0.05), 1u);
  EXPECT_EQ(est[1].status, CandidateStatus::pruned_confidence);

  // B at .49: UCB .496 is above LCB .494 but below .494 + .05.
  est = {estimate(0, 0.50, 0.002), estimate(1, 0.49, 0.002)};
  EXPECT_EQ(prune_step(est, 3.0, 0.05), 1u);
  EXPECT_EQ(est[1].status, CandidateStatus::pruned_equivalent);

  // Without the margin B survives.
  est = {estimate(0, 0.50, 0.002), estimate(1, 0.49, 0.002)};
  EXPECT_EQ(prune_step(est, 3.0, 0.0), 0u);
}

TEST(PruneStep, NoOpWithFewerThanTwoActive) {
  std::vector<CandidateEstimate> est{estimate(0, 0.5, 0.01), estimate(1, -1.0, 0.01)};
  est[1].status = CandidateStatus::pruned_confidence;
  EXPECT_EQ(prune_step(est, 3.0, 0.0), 0u);
}

TEST(Decide, ForcedMoveUsesNoTrials) {
  const FixedValueTask task;
  const auto r = decide(std::vector<double>{0.7}, task, FirstOption{}, DecisionConfig{});
  EXPECT_EQ(r.chosen, 0u);
  EXPECT_EQ(r.total_trials, 0u);
  EXPECT_EQ(r.rounds, 0u);
  EXPECT_EQ(r.candidates[0].status, CandidateStatus::forced_winner);
}

TEST(Decide, ZeroVarianceSeparation) {
  const FixedValueTask task;
  const auto r = decide(std::vector<double>{1.0, -1.0}, task, FirstOption{}, DecisionConfig{});
  EXPECT_EQ(r.chosen, 0u);
  EXPECT_EQ(r.rounds, 1u);
  EXPECT_EQ(r.candidates[1].status, CandidateStatus::pruned_confidence);
  EXPECT_EQ(r.candidates[1].pruned_at_round, 1u);
}

TEST(Decide, NoCandidatesAndConfigErrors) {
  const FixedValueTask task;
  EXPECT_THROW((void)decide(std::vector<double>{}, task, FirstOption{}, DecisionConfig{}), NoCandidates);

  auto expect_field = [&](DecisionConfig c, const std::string& field) {
    try {
      (void)decide(std::vector<double>{1.0, 2.0}, task, FirstOption{}, c);
      ADD_FAILURE() << "expected config-invalid for " << field;
    } catch (const ConfigInvalid& e) {
      EXPECT_EQ(e.field(), field);
      EXPECT_NE(std::string(e.what()).find(field), std::string::npos);
    }
  };
  DecisionConfig c;
  c.max_trials_per_candidate = 0;
  expect_field(c, "max_trials");
  c = {};
  c.batch_size = 0;
  expect_field(c, "batch_size");
  c = {};
  c.batch_size = 2000;
  expect_field(c, "batch_size");
  c = {};
  c.z = -1;
  expect_field(c, "z");
  c = {};
  c.epsilon = 20.0;
  expect_field(c, "epsilon");
  c = {};
  c.termination = ToCompletion{0};
  expect_field(c, "max_plies");
  c = {};
  c.termination = Truncated{0, "x"};
  expect_field(c, "k_plies");
}

TEST(Decide, ArgmaxSoundnessOnZeroVarianceTasks) {
  const FixedValueTask task;
  Rng rng(21);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<double> values(2 + rng.uniform_below(20));
    for (auto& v : values) v = std::round(rng.uniform01() * 1000.0) / 100.0 - 5.0;
    const auto best = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
    DecisionConfig c;
    c.max_trials_per_candidate = 1 + rng.uniform_below(50);
    c.batch_size = 1 + rng.uniform_below(c.max_trials_per_candidate);
    c.z = rng.uniform01() * 5.0;
    c.master_seed = rep;
    ASSERT_EQ(decide(values, task, FirstOption{}, c).chosen, best);
  }
}

TEST(RunTrial, TerminalShortCircuitAndCap) {
  const bg::BackgammonTask task;
  const auto policy = eval::pip_greedy();
  Rng stream(1);

  Board gammon{};
  gammon.off = {15, 0};
  gammon.points[20] = -15;
  gammon.to_move = bg::Side::black;
  const auto t = run_trial(gammon, task, policy, ToCompletion{}, stream);
  EXPECT_EQ(t.value, 2.0);
  EXPECT_EQ(t.plies, 0u);
  EXPECT_FALSE(t.truncated);

  Board start = bg::starting_position();
  start.to_move = bg::Side::black;
  const auto capped = run_trial(start, task, policy, ToCompletion{1}, stream);
  EXPECT_EQ(capped.value, 0.0);
  EXPECT_EQ(capped.plies, 1u);
  EXPECT_TRUE(capped.truncated);

  EXPECT_THROW((void)run_trial(start, task, policy, Truncated{3, "pip"}, stream), EvaluatorMissing);
}

TEST(RunTrial, TruncatedUsesLeafInDecidingPerspective) {
  const bg::BackgammonTask task;
  const auto policy = eval::pip_greedy();
  const auto leaf = eval::make_leaf(std::make_shared<eval::PipEvaluator>());
  Board start = bg::starting_position();
  start.to_move = bg::Side::white;  // Black just moved
  for (std::uint32_t k : {1u, 2u, 5u}) {
    Rng a(9), b(9);
    const auto t = run_trial(start, task, policy, Truncated{k, "pip"}, a, leaf);
    EXPECT_EQ(t.plies, k);
    EXPECT_TRUE(t.truncated);
    // Replay the same stream to find the reached position.
    Board s = start;
    for (std::uint32_t i = 0; i < k; ++i) s = task.advance(s, policy, b);
    const double black_view = (bg::pip_count(s, bg::Side::white) - bg::pip_count(s, bg::Side::black)) / 167.0;
    EXPECT_NEAR(t.value, black_view, 1e-12);
  }
}

TEST(Decide, ChoosesImmediateTerminalWin) {
  // White: checkers on 6 and 1, 13 off; Black all home. Roll 6-1 gives
  // 6/off 1/off (game over) or 6/5 5/off (one checker left on 1).
  Board b{};
  b.points[5] = 1;
  b.points[0] = 1;
  b.off[0] = 13;
  b.points[20] = -15;
  b.to_move = bg::Side::white;
  const bg::BackgammonTask task;
  const bg::Decision decision{b, DiceRoll{6, 1}};
  const auto cands = task.candidates(decision);
  ASSERT_EQ(cands.size(), 2u);
  int terminal = 0;
  for (const auto& c : cands) terminal += bg::is_terminal(c);
  ASSERT_EQ(terminal, 1);

  DecisionConfig c;
  c.max_trials_per_candidate = 40;
  c.batch_size = 10;
  c.master_seed = 3;
  const auto r = decide(decision, task, eval::pip_greedy(), c);
  EXPECT_TRUE(bg::is_terminal(cands[r.chosen]));
  EXPECT_EQ(r.candidates[r.chosen].stats.mean, 2.0);
}

TEST(Decide, ToyEstimatorMatchesExactValue) {
  const toy::DiceRaceTask task;
  const toy::ToyPolicy policy{toy::ToyPolicyKind::uniform};
  const toy::ToyDecision d{17, {0.25}};
  const auto cand = task.candidates(d);
  RunningStats s;
  for (std::uint64_t t = 0; t < 10000; ++t) {
    Rng stream(schedule_trial_seed(11, 0, t));
    s.push(run_trial(cand[0], task, policy, ToCompletion{}, stream).value);
  }
  const double exact = toy::toy_exact_value(cand[0], toy::ToyPolicyKind::uniform);
  EXPECT_LE(std::abs(s.mean - exact), 3.0 * s.stddev() / 100.0);
}

TEST(Decide, AccountingInvariants) {
  const toy::DiceRaceTask task;
  const toy::ToyPolicy policy{toy::ToyPolicyKind::uniform};
  Rng rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    const auto d = random_toy_decision(rng, 2 + rng.uniform_below(5));
    DecisionConfig c;
    c.max_trials_per_candidate = 20 + rng.uniform_below(200);
    c.batch_size = 2 + rng.uniform_below(20);
    c.z = 1.0 + rng.uniform01() * 3.0;
    c.epsilon = rng.uniform01() * 0.1;
    c.master_seed = rep;
    const auto r = decide(d, task, policy, c);
    std::uint64_t sum = 0, plies = 0;
    for (const auto& e : r.candidates) {
      sum += e.stats.count;
      plies += e.plies;
      ASSERT_LE(e.stats.count, c.max_trials_per_candidate);
      if (is_pruned(e.status)) {
        ASSERT_TRUE(e.pruned_at_round.has_value());
        ASSERT_EQ(e.stats.count, *e.pruned_at_round * c.batch_size);
        ASSERT_NE(e.id, r.chosen);
      }
      ASSERT_GE(e.stats.mean, task.value_range().lo);
      ASSERT_LE(e.stats.mean, task.value_range().hi);
    }
    ASSERT_EQ(sum, r.total_trials);
    ASSERT_EQ(plies, r.total_plies);
    ASSERT_LE(r.total_trials, r.candidates.size() * c.max_trials_per_candidate);
    ASSERT_FALSE(is_pruned(r.candidates[r.chosen].status));
    for (const auto& e : r.candidates) {
      if (!is_pruned(e.status)) {
        ASSERT_LE(e.stats.mean, r.candidates[r.chosen].stats.mean);
      }
    }
  }
}

TEST(Decide, PruningRarelyDropsTheTrueBest) {
  const toy::DiceRaceTask task;
  const toy::ToyPolicy policy{toy::ToyPolicyKind::uniform};
  Rng rng(41);
  int kept = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const auto d = random_toy_decision(rng, 2 + rng.uniform_below(4));
    const auto exact = toy_exact(d, toy::ToyPolicyKind::uniform);
    const auto best = static_cast<std::size_t>(std::max_element(exact.begin(), exact.end()) - exact.begin());
    DecisionConfig c;
    c.max_trials_per_candidate = 200;
    c.batch_size = 20;
    c.z = 4.0;
    c.epsilon = 0.0;
    c.master_seed = hash_combine(41, rep);
    const auto r = decide(d, task, policy, c);
    kept += !is_pruned(r.candidates[best].status);
  }
  EXPECT_GE(kept, 990);
}

TEST(Decide, ReportIndependentOfWorkerCount) {
  const bg::BackgammonTask task;
  const auto policy = eval::pip_greedy();
  Rng rng(51);
  WorkerPool two(2), eight(8);
  for (int rep = 0; rep < 6; ++rep) {
    Board b = mcr::testing::random_game_position(rng, 40);
    if (bg::is_terminal(b)) continue;
    const bg::Decision d{b, DiceRoll{rng.die(), rng.die()}};
    DecisionConfig c;
    c.max_trials_per_candidate = 24;
    c.batch_size = 8;
    c.z = 1.0;
    c.master_seed = rep;
    if (rep % 2) {
      c.termination = Truncated{3, "pip"};
    }
    const ExecOptions<Board> serial{nullptr, eval::make_leaf(std::make_shared<eval::PipEvaluator>())};
    auto with = [&](WorkerPool* p) {
      auto e = serial;
      e.pool = p;
      return body(decide(d, task, policy, c, e));
    };
    const auto ref = with(nullptr);
    EXPECT_EQ(with(&two), ref);
    EXPECT_EQ(with(&eight), ref);
  }
}

// T ~ N * B * D: time per (trial * ply) stays within a factor of 2 of the
// geometric mean across configurations.
TEST(Decide, CostScalesWithTrialsCandidatesAndDepth) {
  const bg::BackgammonTask task;
  const auto policy = eval::pip_greedy();
  const auto leaf = eval::make_leaf(std::make_shared<eval::PipEvaluator>());
  const auto cands = task.candidates({bg::starting_position(), DiceRoll{6, 4}});
  ASSERT_GE(cands.size(), 12u);

  struct Point {
    std::uint64_t n;
    std::size_t b;
    std::uint32_t d;
  };
  std::vector<double> unit_costs;
  for (const Point p : {Point{100, 6, 4}, Point{200, 6, 4}, Point{100, 12, 4}, Point{100, 6, 8}, Point{200, 12, 8}}) {
    DecisionConfig c;
    c.max_trials_per_candidate = p.n;
    c.batch_size = p.n;
    c.pruning = false;
    c.termination = Truncated{p.d, "pip"};
    const std::span<const Board> subset(cands.data(), p.b);
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto r = decide_among(subset, task, policy, c, ExecOptions<Board>{nullptr, leaf});
      best = std::min(best, r.wall_seconds);
    }
    unit_costs.push_back(best / (static_cast<double>(p.n) * p.b * p.d));
  }
  double log_sum = 0;
  for (double u : unit_costs) log_sum += std::log(u);
  const double geo = std::exp(log_sum / unit_costs.size());
  for (double u : unit_costs) {
    EXPECT_LE(u / geo, 2.0);
    EXPECT_GE(u / geo, 0.5);
  }
}
