#pragma once

// Command-line front end. Every run prints a report:
//
//   # one-line human summary
//   [config]     fully resolved options; usable as --config input
//   [result]     deterministic outcome
//   [runtime]    worker count and wall time
//
// Exit codes: 0 success, 2 invalid configuration, 3 runtime failure.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mcr/backgammon/board.hpp"
#include "mcr/backgammon/movegen.hpp"
#include "mcr/backgammon/position_text.hpp"
#include "mcr/backgammon/task.hpp"
#include "mcr/bench/match.hpp"
#include "mcr/bench/testset.hpp"
#include "mcr/cli/players.hpp"
#include "mcr/engine.hpp"
#include "mcr/eval/td.hpp"
#include "mcr/eval/weights_io.hpp"
#include "mcr/random.hpp"
#include "mcr/stats.hpp"
#include "mcr/text_util.hpp"
#include "mcr/worker_pool.hpp"

namespace mcr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;

struct Options {
  std::string config_path;
  std::size_t workers = default_worker_count();
  std::uint64_t seed = 0;

  // decide, perft
  std::string pos = bg::format_position(bg::starting_position());
  std::vector<int> roll;
  std::string policy = "pip";
  RolloutFlags rollout;
  int depth = 2;

  // match
  std::string a;
  std::string b;
  std::uint64_t games = 500;
  std::string vr = "on";
  std::string log;

  // testset gen / grade
  std::string oracle;
  std::uint64_t oracle_trials = bench::kMinOracleTrials;
  std::size_t count = 100;
  int min_ply = 6;
  int max_ply = 40;
  std::string sampler = "pip";
  std::uint32_t oracle_max_plies = 2000;
  std::string output;
  std::string testset;
  std::string player;
  std::string base;

  // train
  std::uint64_t episodes = 20000;
  double alpha = 0.02;
  double lambda = 0.7;
  std::string encoding = "rawhit54";
  double noise = 0.0;
  std::uint64_t trace_window = 1000;
};

namespace detail {

inline void add_common(CLI::App* s, Options& o) {
  s->add_option("--config", o.config_path, "Take unset options from the [config] section of a report file");
  s->add_option("--workers", o.workers, "Worker threads (default: $MCR_WORKERS, else hardware threads)")
      ->check(CLI::PositiveNumber);
}

inline void add_rollout(CLI::App* s, RolloutFlags& f) {
  s->add_option("--trials", f.trials, "Maximum trials per candidate");
  s->add_option("--batch", f.batch, "Trials per candidate per round");
  s->add_option("--z", f.z, "Confidence multiplier for pruning");
  s->add_option("--epsilon", f.epsilon, "Equivalence margin for pruning");
  s->add_option("--pruning", f.pruning, "on|off")->check(CLI::IsMember({"on", "off"}));
  s->add_option("--truncate", f.truncate, "Plies per truncated trial; 0 plays to completion");
  s->add_option("--leaf", f.leaf, "Leaf evaluator for truncated trials: pip|linear:PATH");
  s->add_option("--max-plies", f.max_plies, "Ply cap for full trials");
}

inline void build_app(CLI::App& app, Options& o) {
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  auto* decide = app.add_subcommand("decide", "Choose a move by Monte-Carlo rollouts");
  add_common(decide, o);
  decide->add_option("--pos", o.pos, "Position in bg1 format (default: opening, White to move)");
  decide->add_option("--roll", o.roll, "Dice of the player to move")->expected(2)->required()->check(CLI::Range(1, 6));
  decide->add_option("--policy", o.policy, "Base policy: random|pip|linear:PATH[+noise=X]");
  add_rollout(decide, o.rollout);
  decide->add_option("--seed", o.seed, "Master seed");

  auto* match = app.add_subcommand("match", "Play a cubeless match between two players");
  add_common(match, o);
  match->add_option("--a", o.a, "Player A spec")->required();
  match->add_option("--b", o.b, "Player B spec")->required();
  match->add_option("--games", o.games, "Number of games")->check(CLI::PositiveNumber);
  match->add_option("--seed", o.seed, "Match seed")->required();
  match->add_option("--vr", o.vr, "Variance reduction by mirrored dice: on|off")->check(CLI::IsMember({"on", "off"}));
  match->add_option("--log", o.log, "Write one line per game to this file");
  add_rollout(match, o.rollout);

  auto* testset = app.add_subcommand("testset", "Rollout-labelled test positions");
  testset->require_subcommand(1);
  auto* gen = testset->add_subcommand("gen", "Sample and label a testset");
  add_common(gen, o);
  gen->add_option("--oracle", o.oracle, "Oracle policy spec")->required();
  gen->add_option("--oracle-trials", o.oracle_trials, "Trials per candidate");
  gen->add_option("--count", o.count, "Number of positions");
  gen->add_option("--min-ply", o.min_ply, "Earliest sampled ply");
  gen->add_option("--max-ply", o.max_ply, "Latest sampled ply");
  gen->add_option("--sampler", o.sampler, "Policy that plays the sampling games");
  gen->add_option("--max-plies", o.oracle_max_plies, "Ply cap for oracle trials");
  gen->add_option("--seed", o.seed, "Testset seed")->required();
  gen->add_option("--output", o.output, "Testset file to write")->required();

  auto* grade = testset->add_subcommand("grade", "Average equity loss of a player on a testset");
  add_common(grade, o);
  grade->add_option("--testset", o.testset, "Testset file")->required();
  grade->add_option("--player", o.player, "Player spec")->required();
  grade->add_option("--base", o.base, "Second player; reports base_loss / player_loss");
  grade->add_option("--seed", o.seed, "Decision seed");
  add_rollout(grade, o.rollout);

  auto* train = app.add_subcommand("train", "TD(lambda) self-play training of a linear evaluator");
  add_common(train, o);
  train->add_option("--episodes", o.episodes, "Self-play games");
  train->add_option("--alpha", o.alpha, "Initial step size");
  train->add_option("--lambda", o.lambda, "Trace decay");
  train->add_option("--seed", o.seed, "Training seed")->required();
  train->add_option("--encoding", o.encoding, "raw52|rawhit54");
  train->add_option("--noise", o.noise, "Noise recorded for players built from the weights");
  train->add_option("--trace-window", o.trace_window, "Episodes per loss trace entry");
  train->add_option("--output", o.output, "Weights file to write")->required();

  auto* selfcheck = app.add_subcommand("selfcheck", "Perft, statistics and round-trip checks");
  add_common(selfcheck, o);

  auto* perft = app.add_subcommand("perft", "Count afterstate sequences to a depth");
  add_common(perft, o);
  perft->add_option("--pos", o.pos, "Position in bg1 format (default: opening, White to move)");
  perft->add_option("--depth", o.depth, "Plies")->check(CLI::Range(1, 6));
}

[[nodiscard]] inline CLI::App* active_leaf(CLI::App& app) {
  CLI::App* cur = &app;
  for (;;) {
    const auto subs = cur->get_subcommands();
    if (subs.empty()) return cur;
    cur = subs.front();
  }
}

[[nodiscard]] inline std::string command_path(const CLI::App* leaf) {
  std::vector<std::string> names;
  for (const CLI::App* c = leaf; c && c->get_parent(); c = c->get_parent()) names.push_back(c->get_name());
  std::string out;
  for (auto it = names.rbegin(); it != names.rend(); ++it) out += (out.empty() ? "" : " ") + *it;
  return out;
}

// Subcommand named by the leading non-option words of `args`.
[[nodiscard]] inline CLI::App* named_leaf(CLI::App& app, const std::vector<std::string>& args) {
  CLI::App* cur = &app;
  for (const auto& a : args) {
    if (a.starts_with("-")) break;
    CLI::App* next = cur->get_subcommand_no_throw(a);
    if (!next) break;
    cur = next;
  }
  return cur;
}

[[nodiscard]] inline std::vector<std::pair<std::string, std::string>> read_config_section(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot read '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  bool inside = false;
  while (std::getline(in, line)) {
    const std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    if (sv.front() == '[') {
      inside = sv == "[config]";
      continue;
    }
    if (!inside) continue;
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos) throw ValidationError("config", "expected 'key = value': " + std::string(sv));
    out.emplace_back(std::string(trim(sv.substr(0, eq))), std::string(trim(sv.substr(eq + 1))));
  }
  return out;
}

[[nodiscard]] inline std::string config_path_from_args(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].starts_with("--config=")) return args[i].substr(9);
  }
  return {};
}

[[nodiscard]] inline bool given_on_command_line(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.starts_with(flag + "="); });
}

// Appends config-file values for options not given in `args`; command-line
// flags win.
inline void inject_config(CLI::App& app, std::vector<std::string>& args) {
  const std::string path = config_path_from_args(args);
  if (path.empty()) return;
  CLI::App* leaf = named_leaf(app, args);
  const std::string command = command_path(leaf);
  const auto original = args;
  for (const auto& [key, value] : read_config_section(path)) {
    if (key == "command") {
      if (value != command) throw ValidationError("command", "config is for '" + value + "', not '" + command + "'");
      continue;
    }
    const CLI::Option* opt = leaf->get_option_no_throw("--" + key);
    if (!opt || key == "config") throw ValidationError(key, "unknown key in config file");
    if (given_on_command_line(original, key)) continue;
    args.push_back("--" + key);
    if (opt->get_items_expected_max() > 1) {
      for (auto tok : split_spaces(value)) {
        if (!tok.empty()) args.emplace_back(tok);
      }
    } else {
      args.push_back(value);
    }
  }
}

inline void write_config_echo(std::ostream& os, const CLI::App* leaf) {
  os << "[config]\n"
     << "command = " << command_path(leaf) << '\n';
  for (const CLI::Option* opt : leaf->get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty()) continue;
    const std::string& key = names.front();
    if (key == "help" || key == "config" || key == "workers") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : " ") + r;
    } else {
      value = opt->get_default_str();
    }
    if (!value.empty()) os << key << " = " << value << '\n';
  }
}

[[nodiscard]] inline bg::Board parse_position_option(const std::string& text, const std::string& key) {
  try {
    return bg::parse_position(text);
  } catch (const std::exception& e) {
    throw ValidationError(key, e.what());
  }
}

struct Outcome {
  std::string summary;
  std::string result;
  int exit_code = kExitOk;
};

[[nodiscard]] inline Outcome run_decide(const Options& o) {
  const bg::Board board = parse_position_option(o.pos, "pos");
  if (bg::is_terminal(board)) throw ValidationError("pos", "game is already over");
  const bg::DiceRoll roll{o.roll.at(0), o.roll.at(1)};
  const auto policy = make_policy(o.policy, "policy");
  const auto rollout = resolve_rollout(o.rollout, policy, o.seed);

  const bg::MoveSet moves = bg::legal_afterstates(board, roll);
  const auto candidates = moves.afterstates();
  WorkerPool pool(o.workers);
  const bg::BackgammonTask task;
  const auto report = decide_among(std::span<const bg::Board>(candidates), task, policy, rollout.config,
                                   ExecOptions<bg::Board>{&pool, rollout.leaf});

  std::ostringstream os;
  write_report_body(os, report);
  const std::string chosen = bg::format_play(moves.plays[report.chosen]);
  os << "chosen_move = " << chosen << '\n'
     << "chosen_afterstate = " << bg::format_position(candidates[report.chosen]) << '\n';
  for (std::size_t i = 0; i < moves.plays.size(); ++i) {
    os << "move." << i << " = " << bg::format_play(moves.plays[i]) << '\n';
  }
  Outcome out;
  out.summary = "decide: " + chosen + " (candidate " + std::to_string(report.chosen) + " of " +
                std::to_string(candidates.size()) + ", " + std::to_string(report.total_trials) + " trials)";
  out.result = os.str();
  return out;
}

[[nodiscard]] inline Outcome run_match(const Options& o) {
  WorkerPool pool(o.workers);
  // Rollout players parallelise their own trials; the pool runs one loop at a time.
  const bool nested = is_rollout_spec(o.a) || is_rollout_spec(o.b);
  WorkerPool* inner = nested ? &pool : nullptr;
  const auto a = make_player(o.a, o.rollout, "a", inner);
  const auto b = make_player(o.b, o.rollout, "b", inner);
  const auto r = bench::play_match(*a, *b, o.games, o.seed, o.vr == "on", nested ? nullptr : &pool);
  if (!o.log.empty()) {
    std::ofstream log(o.log);
    if (!log) throw std::runtime_error("match: cannot write log '" + o.log + "'");
    bench::write_match_log(log, r);
  }
  std::ostringstream os;
  os << "player_a = " << a->id() << '\n'
     << "player_b = " << b->id() << '\n'
     << "games = " << r.games << '\n'
     << "total_points = " << r.total_points << '\n'
     << "ppg = " << format_double(r.ppg) << '\n'
     << "ppg_se = " << format_double(r.ppg_se) << '\n'
     << "wins_a = " << r.wins[0] << ' ' << r.gammons[0] << ' ' << r.backgammons[0] << '\n'
     << "wins_b = " << r.wins[1] << ' ' << r.gammons[1] << ' ' << r.backgammons[1] << '\n'
     << "abandoned = " << r.abandoned << '\n';
  Outcome out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "match: %s vs %s, %.4f ppg +- %.4f over %llu games", a->id().c_str(),
                b->id().c_str(), r.ppg, r.ppg_se, static_cast<unsigned long long>(r.games));
  out.summary = buf;
  out.result = os.str();
  return out;
}

[[nodiscard]] inline Outcome run_testset_gen(const Options& o) {
  bench::check_oracle_trials(o.oracle_trials);
  const auto oracle = make_policy(o.oracle, "oracle");
  bench::PositionSource src;
  src.count = o.count;
  src.min_ply = o.min_ply;
  src.max_ply = o.max_ply;
  src.sampler = make_policy(o.sampler, "sampler");
  if (src.min_ply < 0 || src.max_ply < src.min_ply) throw ValidationError("min-ply", "need 0 <= min-ply <= max-ply");
  if (o.oracle_max_plies == 0) throw ValidationError("max-plies", "must be positive");

  WorkerPool pool(o.workers);
  const auto ts = bench::generate_testset(src, oracle, o.oracle_trials, o.seed, &pool, o.oracle_max_plies);
  {
    std::ofstream f(o.output, std::ios::binary);
    if (!f) throw std::runtime_error("testset: cannot write '" + o.output + "'");
    bench::write_testset(f, ts);
  }
  std::size_t candidates = 0;
  for (const auto& e : ts.entries) candidates += e.candidates.size();
  std::ostringstream os;
  os << "oracle = " << ts.oracle_policy << '\n'
     << "entries = " << ts.entries.size() << '\n'
     << "candidates = " << candidates << '\n'
     << "output = " << o.output << '\n';
  return {"testset gen: " + std::to_string(ts.entries.size()) + " positions written to " + o.output, os.str()};
}

[[nodiscard]] inline bench::TestSet load_testset(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("testset", "cannot read '" + path + "'");
  try {
    return bench::read_testset(f);
  } catch (const bench::TestSetError& e) {
    throw ValidationError("testset", e.what());
  }
}

[[nodiscard]] inline Outcome run_testset_grade(const Options& o) {
  const auto ts = load_testset(o.testset);
  WorkerPool pool(o.workers);
  auto grade = [&](const std::string& spec, const std::string& key) {
    const bool nested = is_rollout_spec(spec);
    const auto p = make_player(spec, o.rollout, key, nested ? &pool : nullptr);
    return bench::grade_testset(*p, ts, o.seed, nested ? nullptr : &pool);
  };
  const auto g = grade(o.player, "player");
  std::ostringstream os;
  os << "player = " << g.player << '\n'
     << "oracle = " << g.oracle_policy << '\n'
     << "positions = " << g.positions << '\n'
     << "average_loss = " << format_double(g.average_loss) << '\n'
     << "negative_losses = " << g.negative_losses << '\n';
  char buf[200];
  std::snprintf(buf, sizeof(buf), "testset grade: %s loses %.5f per position", g.player.c_str(), g.average_loss);
  std::string summary = buf;
  if (!o.base.empty()) {
    const auto b = grade(o.base, "base");
    const double ratio = bench::loss_ratio(b, g);
    os << "base_player = " << b.player << '\n'
       << "base_average_loss = " << format_double(b.average_loss) << '\n'
       << "base_negative_losses = " << b.negative_losses << '\n'
       << "ratio = " << format_double(ratio) << '\n';
    std::snprintf(buf, sizeof(buf), "; base %s loses %.5f; ratio %.3f", b.player.c_str(), b.average_loss, ratio);
    summary += buf;
  }
  return {summary, os.str()};
}

[[nodiscard]] inline Outcome run_train(const Options& o) {
  eval::TrainConfig c;
  c.episodes = o.episodes;
  c.alpha = o.alpha;
  c.lambda = o.lambda;
  c.seed = o.seed;
  try {
    c.encoding = eval::parse_encoding(o.encoding);
  } catch (const std::exception& e) {
    throw ValidationError("encoding", e.what());
  }
  c.noise_std = o.noise;
  c.trace_window = o.trace_window;
  eval::validate(c);
  const auto r = eval::train_td(c);
  eval::save_weights(o.output, r.evaluator);
  std::ostringstream os;
  os << "evaluator = " << r.evaluator.id() << '\n'
     << "episodes = " << c.episodes << '\n'
     << "loss_trace =";
  for (double x : r.loss_trace) os << ' ' << format_double(x);
  os << '\n' << "output = " << o.output << '\n';
  return {"train: " + std::to_string(c.episodes) + " episodes, weights written to " + o.output, os.str()};
}

[[nodiscard]] inline Outcome run_selfcheck() {
  std::vector<std::pair<std::string, bool>> checks;
  const auto opening = bg::starting_position();
  checks.emplace_back("perft_depth1", bg::perft(opening, 1) == 637);
  checks.emplace_back("perft_depth2", bg::perft(opening, 2) == 419783);

  {
    Rng rng(1);
    std::vector<double> xs(100000);
    for (auto& x : xs) x = rng.uniform01();
    RunningStats seq;
    std::array<RunningStats, 8> parts{};
    for (std::size_t i = 0; i < xs.size(); ++i) {
      seq.push(xs[i]);
      parts[i * parts.size() / xs.size()].push(xs[i]);
    }
    long double sum = 0;
    for (double x : xs) sum += x;
    const long double mean = sum / xs.size();
    long double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = static_cast<double>(ss / (xs.size() - 1));
    checks.emplace_back("stats_two_pass", std::abs(seq.mean - static_cast<double>(mean)) <= 1e-12 &&
                                              std::abs(seq.sample_variance() - var) <= 1e-12);
    RunningStats merged;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) merged = merge(merged, *it);
    checks.emplace_back("stats_merge", merged.count == seq.count && std::abs(merged.mean - seq.mean) <= 1e-10 &&
                                           std::abs(merged.m2 - seq.m2) <= 1e-10 * std::max(1.0, seq.m2));
  }

  {
    bool ok = true;
    Rng rng(2);
    std::vector<bg::Board> options;
    for (int game = 0; game < 100 && ok; ++game) {
      bg::Board b = opening;
      while (!bg::is_terminal(b) && ok) {
        ok = bg::parse_position(bg::format_position(b)) == b;
        bg::generate_afterstates(b, bg::DiceRoll{rng.die(), rng.die()}, options);
        b = options[rng.uniform_below(options.size())];
      }
    }
    checks.emplace_back("position_round_trip", ok);
  }

  {
    Rng rng(3);
    std::vector<double> w(eval::feature_count(eval::Encoding::rawhit54) + 1);
    for (auto& x : w) x = rng.normal() * 1e3;
    const eval::LinearEvaluator e(eval::Encoding::rawhit54, w);
    std::stringstream ss;
    eval::write_weights(ss, e);
    checks.emplace_back("weights_round_trip", eval::read_weights(ss).weights() == w);
  }

  {
    bench::TestSet ts;
    ts.oracle_policy = "pip";
    ts.oracle_trials = bench::kMinOracleTrials;
    ts.oracle_seed = 9;
    bench::TestEntry e{opening, bg::DiceRoll{3, 1}, bg::legal_afterstates(opening, bg::DiceRoll{3, 1}).afterstates(), {}};
    for (std::size_t i = 0; i < e.candidates.size(); ++i) e.equities.push_back(0.1 * static_cast<double>(i) - 0.35);
    ts.entries.push_back(e);
    std::ostringstream first, second;
    bench::write_testset(first, ts);
    std::istringstream in(first.str());
    bench::write_testset(second, bench::read_testset(in));
    checks.emplace_back("testset_round_trip", first.str() == second.str());
  }

  std::ostringstream os;
  std::size_t failed = 0;
  for (const auto& [name, ok] : checks) {
    os << "check." << name << " = " << (ok ? "pass" : "FAIL") << '\n';
    failed += !ok;
  }
  os << "failed = " << failed << '\n';
  return {"selfcheck: " + std::to_string(checks.size() - failed) + "/" + std::to_string(checks.size()) + " passed",
          os.str(), failed ? kExitRuntime : kExitOk};
}

[[nodiscard]] inline Outcome run_perft(const Options& o) {
  const bg::Board board = parse_position_option(o.pos, "pos");
  const auto nodes = bg::perft(board, o.depth);
  std::ostringstream os;
  os << "nodes = " << nodes << '\n';
  return {"perft: depth " + std::to_string(o.depth) + ": " + std::to_string(nodes) + " nodes", os.str()};
}

}  // namespace detail

// Entry point: parses `argv`, runs the subcommand and prints the report to
// `out`; diagnostics go to `err`.
inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  Options o;
  CLI::App app{"Monte-Carlo rollout move selection for backgammon", "mcr"};
  detail::build_app(app, o);

  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  std::string command = "mcr";
  if (CLI::App* named = detail::named_leaf(app, args); named != &app) command += " " + detail::command_path(named);
  try {
    detail::inject_config(app, args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    CLI::App* leaf = detail::active_leaf(app);

    detail::Outcome result;
    if (leaf->get_name() == "decide") {
      result = detail::run_decide(o);
    } else if (leaf->get_name() == "match") {
      result = detail::run_match(o);
    } else if (leaf->get_name() == "gen") {
      result = detail::run_testset_gen(o);
    } else if (leaf->get_name() == "grade") {
      result = detail::run_testset_grade(o);
    } else if (leaf->get_name() == "train") {
      result = detail::run_train(o);
    } else if (leaf->get_name() == "selfcheck") {
      result = detail::run_selfcheck();
    } else {
      result = detail::run_perft(o);
    }

    out << "# " << result.summary << '\n';
    detail::write_config_echo(out, leaf);
    out << "[result]\n" << result.result;
    out << "[runtime]\n"
        << "workers = " << o.workers << '\n'
        << "wall_seconds = " << format_double(std::chrono::duration<double>(Clock::now() - start).count()) << '\n';
    return result.exit_code;
  } catch (const CLI::CallForHelp&) {
    out << detail::active_leaf(app)->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << command << ": error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << command << ": error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const bg::ParseError& e) {
    err << command << ": error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << command << ": error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace mcr::cli
