#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mcr/cli/run.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
  std::string err;

  // Everything before the [runtime] section.
  [[nodiscard]] std::string body() const { return out.substr(0, out.find("[runtime]")); }
  [[nodiscard]] bool has_line(const std::string& line) const {
    return ("\n" + out).find("\n" + line + "\n") != std::string::npos;
  }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "mcr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = mcr::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "mcr_cli_test";
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Six checkers each, racing home: rollouts are short.
const std::string kRace = "bg1 0 0 0 0 3 3 0 0 0 0 0 0 0 0 0 0 0 0 -3 -3 0 0 0 0 0 0 9 9 W";
// White has two checkers on the bar against a closed board.
const std::string kDance = "bg1 0 0 0 0 0 13 0 0 0 0 0 0 0 0 0 0 0 0 -2 -2 -2 -2 -2 -2 2 0 0 3 W";

}  // namespace

TEST(Cli, DecideFillsDefaults) {
  const auto r = run({"decide", "--pos", kRace, "--roll", "3", "1", "--policy", "pip", "--trials", "500", "--seed", "7",
                      "--workers", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.has_line("command = decide"));
  EXPECT_TRUE(r.has_line("pos = " + kRace));
  EXPECT_TRUE(r.has_line("roll = 3 1"));
  EXPECT_TRUE(r.has_line("trials = 500"));
  EXPECT_TRUE(r.has_line("batch = 50"));
  EXPECT_TRUE(r.has_line("z = 3"));
  EXPECT_TRUE(r.has_line("pruning = on"));
  EXPECT_TRUE(r.has_line("seed = 7"));
  EXPECT_NE(r.out.find("chosen_move = "), std::string::npos);
  EXPECT_EQ(r.out.rfind("# decide: ", 0), 0u);
}

TEST(Cli, ForcedMoveRunsNoTrials) {
  const auto r = run({"decide", "--pos", kDance, "--roll", "4", "2", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.has_line("total_trials = 0"));
  EXPECT_TRUE(r.has_line("candidate.0 = forced_winner 0 0 0 - 0 0"));
  EXPECT_TRUE(r.has_line("chosen_move = (no move)"));
}

TEST(Cli, ReportBodyIndependentOfWorkers) {
  const std::vector<std::string> base{"decide", "--pos", kRace, "--roll", "6", "2", "--trials", "200", "--seed", "11"};
  auto with = [&](const std::string& w) {
    auto args = base;
    args.insert(args.end(), {"--workers", w});
    return run(args);
  };
  const auto one = with("1");
  const auto eight = with("8");
  ASSERT_EQ(one.code, 0) << one.err;
  ASSERT_EQ(eight.code, 0) << eight.err;
  EXPECT_EQ(one.body(), eight.body());
  EXPECT_TRUE(eight.has_line("workers = 8"));
}

TEST(Cli, EchoedConfigReproducesReport) {
  const auto first = run({"decide", "--pos", kRace, "--roll", "5", "4", "--trials", "100", "--batch", "20", "--z", "2.5",
                          "--seed", "3", "--truncate", "3", "--leaf", "pip"});
  ASSERT_EQ(first.code, 0) << first.err;
  const auto path = scratch_dir() / "echo.txt";
  write_file(path, first.out);
  const auto again = run({"decide", "--config", path.string()});
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(first.body(), again.body());
}

TEST(Cli, FlagOverridesConfigFile) {
  const auto path = scratch_dir() / "override.txt";
  write_file(path, "[config]\ncommand = decide\npos = " + kRace + "\nroll = 2 1\ntrials = 100\nbatch = 10\nseed = 5\n");
  const auto from_file = run({"decide", "--config", path.string()});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_TRUE(from_file.has_line("trials = 100"));
  const auto r = run({"decide", "--config", path.string(), "--trials", "40"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.has_line("trials = 40"));
  EXPECT_TRUE(r.has_line("batch = 10"));
  EXPECT_TRUE(r.has_line("roll = 2 1"));
}

TEST(Cli, ConfigFileErrors) {
  const auto path = scratch_dir() / "wrong.txt";
  write_file(path, "[config]\ncommand = perft\ndepth = 1\n");
  auto r = run({"decide", "--roll", "3", "1", "--config", path.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("command"), std::string::npos);
  write_file(path, "[config]\ncommand = perft\nbogus = 1\n");
  r = run({"perft", "--config", path.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bogus"), std::string::npos);
}

TEST(Cli, ZeroTrialsNamesMaxTrials) {
  const auto r = run({"decide", "--roll", "3", "1", "--trials", "0"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("max_trials"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, ValidationErrorsNameTheKey) {
  auto r = run({"decide", "--roll", "3", "1", "--frobnicate", "2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--frobnicate"), std::string::npos);

  r = run({"match", "--a", "pip", "--b", "random"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--seed"), std::string::npos);

  r = run({"decide", "--roll", "3", "1", "--leaf", "pip"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("leaf"), std::string::npos);

  r = run({"match", "--a", "linear:/does/not/exist", "--b", "pip", "--seed", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("/does/not/exist"), std::string::npos);

  r = run({"decide", "--roll", "3", "7"});
  EXPECT_EQ(r.code, 2);

  r = run({"decide", "--pos", "bg1 1 2 3", "--roll", "3", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("parse-error"), std::string::npos);

  r = run({"testset", "gen", "--oracle", "pip", "--oracle-trials", "999", "--seed", "1", "--output",
           (scratch_dir() / "never.txt").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("oracle_trials"), std::string::npos);
  EXPECT_FALSE(fs::exists(scratch_dir() / "never.txt"));
}

TEST(Cli, RuntimeFailureHasItsOwnCode) {
  const auto r = run({"train", "--episodes", "1", "--seed", "1", "--output", "/nonexistent-dir/w.txt"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("nonexistent-dir"), std::string::npos);
}

TEST(Cli, SelfcheckPasses) {
  const auto r = run({"selfcheck"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(r.has_line("failed = 0"));
  EXPECT_TRUE(r.has_line("check.perft_depth2 = pass"));
}

TEST(Cli, PerftFromOpening) {
  const auto r = run({"perft", "--depth", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.has_line("nodes = 637"));
}

TEST(Cli, HelpExitsCleanly) {
  const auto r = run({"decide", "--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--trials"), std::string::npos);
}

TEST(Cli, MatchWritesLogAndIsDeterministic) {
  const auto log = scratch_dir() / "match.log";
  const auto a = run({"match", "--a", "pip", "--b", "random", "--games", "10", "--seed", "4", "--log", log.string(),
                      "--workers", "1"});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto lines = read_file(log);
  EXPECT_EQ(std::count(lines.begin(), lines.end(), '\n'), 10);
  const auto b = run({"match", "--a", "pip", "--b", "random", "--games", "10", "--seed", "4", "--log", log.string(),
                      "--workers", "4"});
  EXPECT_EQ(a.body(), b.body());
  EXPECT_EQ(read_file(log), lines);
  EXPECT_TRUE(a.has_line("games = 10"));
}

TEST(Cli, TrainGenerateGradeFlow) {
  const auto dir = scratch_dir();
  const auto weights = dir / "w.txt";
  const auto ts = dir / "ts.txt";
  auto r = run({"train", "--episodes", "200", "--seed", "2", "--output", weights.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(weights));
  EXPECT_TRUE(r.has_line("evaluator = linear-rawhit54"));

  r = run({"testset", "gen", "--oracle", "random", "--count", "1", "--min-ply", "6", "--max-ply", "6", "--seed", "3",
           "--output", ts.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.has_line("entries = 1"));
  EXPECT_TRUE(r.has_line("command = testset gen"));
  EXPECT_EQ(read_file(ts).rfind("bgts1\n", 0), 0u);

  r = run({"testset", "grade", "--testset", ts.string(), "--player", "linear:" + weights.string(), "--base", "random"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.has_line("player = linear-rawhit54"));
  EXPECT_TRUE(r.has_line("base_player = random"));
  EXPECT_TRUE(r.has_line("oracle = random"));
  EXPECT_NE(r.out.find("ratio = "), std::string::npos);

  r = run({"testset", "grade", "--testset", (dir / "missing.txt").string(), "--player", "pip"});
  EXPECT_EQ(r.code, 2);
}
