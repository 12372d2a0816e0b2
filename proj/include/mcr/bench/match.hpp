#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "mcr/backgammon/game.hpp"
#include "mcr/backgammon/movegen.hpp"
#include "mcr/bench/player.hpp"
#include "mcr/random.hpp"
#include "mcr/stats.hpp"
#include "mcr/worker_pool.hpp"

namespace mcr::bench {

// Games still running after this many plies are abandoned and scored 0.
inline constexpr int kGamePlyCap = 20000;

struct GameLog {
  std::uint64_t seed = 0;   // dice stream seed
  bool a_is_white = true;
  int plies = 0;
  int outcome = 0;          // points for player A
};

struct MatchResult {
  std::uint64_t games = 0;
  std::int64_t total_points = 0;  // A minus B
  double ppg = 0.0;
  double ppg_se = 0.0;
  // [0] player A, [1] player B: single wins, gammons, backgammons.
  std::array<std::uint64_t, 2> wins{};
  std::array<std::uint64_t, 2> gammons{};
  std::array<std::uint64_t, 2> backgammons{};
  std::uint64_t abandoned = 0;
  std::vector<GameLog> logs;
};

struct GameOutcome {
  int white_points = 0;  // signed, White's perspective; 0 if abandoned
  int plies = 0;
};

// One cubeless game from the opening. Dice come from `dice_seed`; decision
// seeds from (decision_seed, ply), so two games with equal seeds see the same
// dice and random streams.
[[nodiscard]] inline GameOutcome play_game(const Player& white, const Player& black, std::uint64_t dice_seed,
                                           std::uint64_t decision_seed) {
  Rng dice(dice_seed);
  const auto opening = bg::opening_roll(dice);
  Board board = bg::opening_board(opening.first);
  DiceRoll roll = opening.roll;
  std::vector<Board> options;
  for (int ply = 0; ply < kGamePlyCap; ++ply) {
    bg::generate_afterstates(board, roll, options);
    const Player& mover = board.to_move == bg::Side::white ? white : black;
    const std::size_t pick =
        options.size() == 1 ? 0
                            : mover.choose(board, roll, options, hash_combine(decision_seed, static_cast<std::uint64_t>(ply)));
    board = options.at(pick);
    if (auto v = bg::terminal_value(board)) return {*v, ply + 1};
    roll = DiceRoll{dice.die(), dice.die()};
  }
  return {0, kGamePlyCap};
}

// Plays `games` games of A against B. With variance reduction, games come in
// pairs sharing one dice stream with colors swapped; otherwise each game has
// its own stream and A alternates colors. The standard error is taken over
// pair means (variance reduction) or single games.
[[nodiscard]] inline MatchResult play_match(const Player& a, const Player& b, std::uint64_t games, std::uint64_t seed,
                                            bool variance_reduction, WorkerPool* pool = nullptr) {
  if (games == 0) throw std::invalid_argument("match: games must be >= 1");
  MatchResult r;
  r.games = games;
  r.logs.resize(games);

  auto body = [&](std::size_t g) {
    const std::uint64_t unit = variance_reduction ? g / 2 : g;
    const std::uint64_t game_seed = hash_combine(seed, unit);
    const bool a_white = g % 2 == 0;
    const auto out = a_white ? play_game(a, b, game_seed, mix64(game_seed)) : play_game(b, a, game_seed, mix64(game_seed));
    r.logs[g] = GameLog{game_seed, a_white, out.plies, a_white ? out.white_points : -out.white_points};
  };
  if (pool) {
    pool->parallel_for(games, body);
  } else {
    for (std::size_t g = 0; g < games; ++g) body(g);
  }

  RunningStats units;
  for (std::size_t g = 0; g < games; ++g) {
    const auto& log = r.logs[g];
    r.total_points += log.outcome;
    if (log.outcome == 0) {
      ++r.abandoned;
    } else {
      const int winner = log.outcome > 0 ? 0 : 1;
      const int mag = std::abs(log.outcome);
      (mag == 1 ? r.wins : mag == 2 ? r.gammons : r.backgammons)[winner]++;
    }
    if (!variance_reduction) {
      units.push(log.outcome);
    } else if (g % 2 == 1) {
      units.push(0.5 * (r.logs[g - 1].outcome + log.outcome));
    } else if (g + 1 == games) {
      units.push(log.outcome);
    }
  }
  r.ppg = static_cast<double>(r.total_points) / static_cast<double>(games);
  r.ppg_se = units.standard_error();
  return r;
}

// One line per game: "<seed> <plies> <outcome>".
inline void write_match_log(std::ostream& os, const MatchResult& r) {
  for (const auto& g : r.logs) os << g.seed << ' ' << g.plies << ' ' << g.outcome << '\n';
}

}  // namespace mcr::bench
