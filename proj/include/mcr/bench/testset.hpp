#pragma once

// Rollout-labelled test positions and equity-loss grading.
//
// File format (bgts1), LF line endings:
//
//   bgts1
//   oracle <policy-id>
//   oracle_trials <n>
//   oracle_seed <seed>
//   oracle_termination full <max-plies>
//   entries <count>
//
//   position <bg1 position>
//   roll <d1> <d2>
//   candidate <bg1 afterstate> <equity>
//   ...
//
// Each entry block starts with a blank line. Equities are for the player to
// move in the position, shortest round-trip decimal.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcr/backgammon/game.hpp"
#include "mcr/backgammon/movegen.hpp"
#include "mcr/backgammon/position_text.hpp"
#include "mcr/backgammon/task.hpp"
#include "mcr/bench/player.hpp"
#include "mcr/engine.hpp"
#include "mcr/eval/policy.hpp"
#include "mcr/text_util.hpp"
#include "mcr/worker_pool.hpp"

namespace mcr::bench {

inline constexpr std::uint64_t kMinOracleTrials = 1000;

struct TestEntry {
  Board position;
  DiceRoll roll;
  std::vector<Board> candidates;
  std::vector<double> equities;
};

struct TestSet {
  std::string oracle_policy;
  std::uint64_t oracle_trials = 0;
  std::uint64_t oracle_seed = 0;
  std::uint32_t oracle_max_plies = 2000;
  std::vector<TestEntry> entries;
};

class TestSetError : public std::runtime_error {
 public:
  explicit TestSetError(const std::string& what) : std::runtime_error(what) {}
};

// Where test positions come from: self-play of `sampler` from the opening,
// stopped at a ply drawn uniformly from [min_ply, max_ply].
struct PositionSource {
  std::size_t count = 100;
  int min_ply = 6;
  int max_ply = 40;
  eval::Policy sampler = eval::pip_greedy();
};

// Draws one non-forced mid-game decision for `index`. Games that end before
// the target ply and single-candidate rolls are redrawn.
[[nodiscard]] inline bg::Decision sample_position(const PositionSource& src, std::uint64_t seed, std::uint64_t index) {
  std::vector<Board> options;
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(hash_combine(hash_combine(seed, index), attempt));
    const int target = src.min_ply + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(src.max_ply - src.min_ply + 1)));
    const auto opening = bg::opening_roll(rng);
    Board board = bg::opening_board(opening.first);
    DiceRoll roll = opening.roll;
    bool over = false;
    for (int ply = 0; ply < target; ++ply) {
      bg::generate_afterstates(board, roll, options);
      board = options[src.sampler.choose(board, options, rng)];
      if (bg::is_terminal(board)) {
        over = true;
        break;
      }
      roll = DiceRoll{rng.die(), rng.die()};
    }
    if (over) continue;
    bg::generate_afterstates(board, roll, options);
    if (options.size() < 2) continue;
    return {board, roll};
  }
}

inline void check_oracle_trials(std::uint64_t oracle_trials) {
  if (oracle_trials < kMinOracleTrials) {
    throw ConfigInvalid("oracle_trials", "must be at least " + std::to_string(kMinOracleTrials));
  }
}

// Oracle equities for every candidate of one decision: a fixed number of
// full rollouts per candidate, no pruning. Trials from an afterstate that
// already ends the game return its exact points.
[[nodiscard]] inline TestEntry label_entry(const bg::Decision& decision, const eval::Policy& oracle,
                                           std::uint64_t oracle_trials, std::uint64_t master_seed,
                                           WorkerPool* pool = nullptr, std::uint32_t max_plies = 2000) {
  check_oracle_trials(oracle_trials);
  DecisionConfig cfg;
  cfg.max_trials_per_candidate = oracle_trials;
  cfg.batch_size = oracle_trials;
  cfg.pruning = false;
  cfg.termination = ToCompletion{max_plies};
  cfg.master_seed = master_seed;

  const bg::BackgammonTask task;
  TestEntry e{decision.board, decision.roll, task.candidates(decision), {}};
  const auto report = decide_among(std::span<const Board>(e.candidates), task, oracle, cfg, ExecOptions<Board>{pool, {}});
  for (const auto& c : report.candidates) e.equities.push_back(c.stats.mean);
  return e;
}

// Labels `src.count` sampled positions. Entry i uses master seed
// hash_combine(mix64(seed), i).
[[nodiscard]] inline TestSet generate_testset(const PositionSource& src, const eval::Policy& oracle,
                                              std::uint64_t oracle_trials, std::uint64_t seed,
                                              WorkerPool* pool = nullptr, std::uint32_t max_plies = 2000) {
  check_oracle_trials(oracle_trials);
  if (src.min_ply < 0 || src.max_ply < src.min_ply) throw ConfigInvalid("plies", "need 0 <= min_ply <= max_ply");

  TestSet ts;
  ts.oracle_policy = oracle.id();
  ts.oracle_trials = oracle_trials;
  ts.oracle_seed = seed;
  ts.oracle_max_plies = max_plies;
  for (std::size_t i = 0; i < src.count; ++i) {
    const auto decision = sample_position(src, seed, i);
    ts.entries.push_back(label_entry(decision, oracle, oracle_trials, hash_combine(mix64(seed), i), pool, max_plies));
  }
  return ts;
}

inline void write_testset(std::ostream& os, const TestSet& ts) {
  os << "bgts1\n"
     << "oracle " << ts.oracle_policy << '\n'
     << "oracle_trials " << ts.oracle_trials << '\n'
     << "oracle_seed " << ts.oracle_seed << '\n'
     << "oracle_termination full " << ts.oracle_max_plies << '\n'
     << "entries " << ts.entries.size() << '\n';
  for (const auto& e : ts.entries) {
    os << "\nposition " << bg::format_position(e.position) << '\n'
       << "roll " << e.roll.d1 << ' ' << e.roll.d2 << '\n';
    for (std::size_t i = 0; i < e.candidates.size(); ++i) {
      os << "candidate " << bg::format_position(e.candidates[i]) << ' ' << format_double(e.equities[i]) << '\n';
    }
  }
}

[[nodiscard]] inline TestSet read_testset(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    return TestSetError("parse-error: testset line " + std::to_string(lineno) + ": " + what);
  };
  auto getline = [&]() -> bool {
    if (!std::getline(is, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  auto header = [&](std::string_view key) -> std::string_view {
    if (!getline()) throw fail("missing '" + std::string(key) + "'");
    std::string_view sv(line);
    if (sv.substr(0, key.size()) != key || sv.size() <= key.size() || sv[key.size()] != ' ') {
      throw fail("expected '" + std::string(key) + " ...'");
    }
    return sv.substr(key.size() + 1);
  };

  if (!getline()) throw fail("empty file");
  if (line != "bgts1") throw fail("expected 'bgts1' tag");
  TestSet ts;
  ts.oracle_policy = std::string(header("oracle"));
  if (!parse_int(header("oracle_trials"), ts.oracle_trials)) throw fail("bad oracle_trials");
  if (!parse_int(header("oracle_seed"), ts.oracle_seed)) throw fail("bad oracle_seed");
  {
    const auto term = header("oracle_termination");
    if (term.substr(0, 5) != "full " || !parse_int(term.substr(5), ts.oracle_max_plies)) {
      throw fail("bad oracle_termination");
    }
  }
  std::size_t count = 0;
  if (!parse_int(header("entries"), count)) throw fail("bad entries count");

  auto board_and_value = [&](std::string_view rest, Board& b, double& v) {
    const auto cut = rest.rfind(' ');
    if (cut == std::string_view::npos) throw fail("candidate line needs a position and an equity");
    try {
      b = bg::parse_position(rest.substr(0, cut));
    } catch (const std::exception& ex) {
      throw fail(ex.what());
    }
    if (!parse_double(rest.substr(cut + 1), v)) throw fail("bad equity");
  };

  TestEntry* cur = nullptr;
  while (getline()) {
    std::string_view sv(line);
    if (sv.empty()) continue;
    if (sv.substr(0, 9) == "position ") {
      ts.entries.emplace_back();
      cur = &ts.entries.back();
      try {
        cur->position = bg::parse_position(sv.substr(9));
      } catch (const std::exception& ex) {
        throw fail(ex.what());
      }
    } else if (sv.substr(0, 5) == "roll ") {
      if (!cur) throw fail("roll before position");
      const auto f = split_spaces(sv.substr(5));
      if (f.size() != 2 || !parse_int(f[0], cur->roll.d1) || !parse_int(f[1], cur->roll.d2) || !bg::valid_roll(cur->roll)) {
        throw fail("bad roll");
      }
    } else if (sv.substr(0, 10) == "candidate ") {
      if (!cur) throw fail("candidate before position");
      Board b;
      double v = 0.0;
      board_and_value(sv.substr(10), b, v);
      cur->candidates.push_back(b);
      cur->equities.push_back(v);
    } else {
      throw fail("unexpected line");
    }
  }
  if (ts.entries.size() != count) throw fail("entry count does not match header");
  return ts;
}

// Checks every entry against the current move generator and value bounds.
inline void validate(const TestSet& ts) {
  for (std::size_t i = 0; i < ts.entries.size(); ++i) {
    const auto& e = ts.entries[i];
    const auto legal = bg::legal_afterstates(e.position, e.roll).afterstates();
    if (legal != e.candidates || e.equities.size() != e.candidates.size()) {
      throw TestSetError("mismatch: entry " + std::to_string(i) +
                         " candidates differ from legal_afterstates (stale testset?)");
    }
    for (double v : e.equities) {
      if (!(v >= -3.0 && v <= 3.0)) throw TestSetError("entry " + std::to_string(i) + " equity out of [-3, 3]");
    }
  }
}

struct GradeReport {
  std::string player;
  std::string oracle_policy;
  std::size_t positions = 0;
  double average_loss = 0.0;
  std::vector<double> losses;  // entry order; negative values reflect oracle noise
  std::size_t negative_losses = 0;
};

[[nodiscard]] inline double loss_ratio(const GradeReport& base, const GradeReport& improved) {
  return base.average_loss / improved.average_loss;
}

// Decision seed of an entry: a hash of its content, so grades do not depend
// on entry order.
[[nodiscard]] inline std::uint64_t entry_seed(const TestEntry& e, std::uint64_t seed) {
  const auto key = bg::canonical_key(e.position);
  std::uint64_t h = hash_bytes(std::string_view(reinterpret_cast<const char*>(key.data()), key.size()));
  h = hash_combine(h, static_cast<std::uint64_t>(e.roll.d1 * 8 + e.roll.d2));
  return hash_combine(seed, h);
}

// Loss per entry = oracle equity of the best candidate minus oracle equity
// of the player's choice. Losses are not clamped at zero.
[[nodiscard]] inline GradeReport grade_testset(const Player& player, const TestSet& ts, std::uint64_t seed = 0,
                                               WorkerPool* pool = nullptr) {
  validate(ts);
  GradeReport g;
  g.player = player.id();
  g.oracle_policy = ts.oracle_policy;
  g.positions = ts.entries.size();
  g.losses.assign(ts.entries.size(), 0.0);
  auto body = [&](std::size_t i) {
    const auto& e = ts.entries[i];
    const std::size_t pick = player.choose(e.position, e.roll, e.candidates, entry_seed(e, seed));
    const double best = *std::max_element(e.equities.begin(), e.equities.end());
    g.losses[i] = best - e.equities.at(pick);
  };
  if (pool) {
    pool->parallel_for(ts.entries.size(), body);
  } else {
    for (std::size_t i = 0; i < ts.entries.size(); ++i) body(i);
  }
  double sum = 0.0;
  for (double l : g.losses) {
    sum += l;
    g.negative_losses += l < 0.0;
  }
  g.average_loss = g.positions ? sum / static_cast<double>(g.positions) : 0.0;
  return g;
}

}  // namespace mcr::bench
