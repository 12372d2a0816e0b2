#pragma once

// Test-only helpers: an independently written move generator used as an
// oracle for the fast one, and random position generators.

#include <algorithm>
#include <set>
#include <vector>

#include "mcr/backgammon/board.hpp"
#include "mcr/backgammon/game.hpp"
#include "mcr/backgammon/movegen.hpp"
#include "mcr/random.hpp"

namespace mcr::testing {

using bg::Board;
using bg::DiceRoll;
using bg::Side;

// Naive generator: breadth-first over sets of whole boards, one die at a
// time, with the rules applied directly in White's point numbering.
namespace naive {

inline int signed_count(const Board& b, int point) { return b.points[point - 1]; }

inline int own_count(const Board& b, Side s, int point) {
  const int v = signed_count(b, point);
  return s == Side::white ? std::max(v, 0) : std::max(-v, 0);
}

inline int opp_count(const Board& b, Side s, int point) {
  const int v = signed_count(b, point);
  return s == Side::white ? std::max(-v, 0) : std::max(v, 0);
}

inline bool all_home(const Board& b, Side s) {
  if (b.bar[static_cast<int>(s)] > 0) return false;
  for (int p = 1; p <= 24; ++p) {
    const bool home = s == Side::white ? p <= 6 : p >= 19;
    if (!home && own_count(b, s, p) > 0) return false;
  }
  return true;
}

inline void put(Board& b, Side s, int point, int delta) {
  b.points[point - 1] = static_cast<std::int8_t>(b.points[point - 1] + (s == Side::white ? delta : -delta));
}

// All boards after moving one checker of the side to move by `die`.
inline std::vector<Board> single_moves(const Board& b, int die) {
  std::vector<Board> out;
  const Side s = b.to_move;
  const int si = static_cast<int>(s);
  const int dir = s == Side::white ? -1 : 1;

  auto land = [&](Board nb, int dest) -> bool {
    if (opp_count(nb, s, dest) >= 2) return false;
    if (opp_count(nb, s, dest) == 1) {
      nb.points[dest - 1] = 0;
      nb.bar[1 - si] += 1;
    }
    put(nb, s, dest, 1);
    out.push_back(nb);
    return true;
  };

  if (b.bar[si] > 0) {
    const int dest = s == Side::white ? 25 - die : die;
    Board nb = b;
    nb.bar[si] -= 1;
    land(nb, dest);
    return out;
  }
  for (int p = 1; p <= 24; ++p) {
    if (own_count(b, s, p) == 0) continue;
    const int dest = p + dir * die;
    if (dest >= 1 && dest <= 24) {
      Board nb = b;
      put(nb, s, p, -1);
      land(nb, dest);
      continue;
    }
    if (!all_home(b, s)) continue;
    const bool exact = dest == 0 || dest == 25;
    bool allowed = exact;
    if (!exact) {
      // Overshoot: only from the point farthest from home.
      allowed = true;
      if (s == Side::white) {
        for (int q = p + 1; q <= 6; ++q) allowed &= own_count(b, s, q) == 0;
      } else {
        for (int q = p - 1; q >= 19; --q) allowed &= own_count(b, s, q) == 0;
      }
    }
    if (!allowed) continue;
    Board nb = b;
    put(nb, s, p, -1);
    nb.off[si] += 1;
    out.push_back(nb);
  }
  return out;
}

inline std::set<Board> expand(const std::set<Board>& level, int die) {
  std::set<Board> next;
  for (const auto& b : level) {
    for (const auto& nb : single_moves(b, die)) next.insert(nb);
  }
  return next;
}

// Afterstates (turn passed), sorted.
inline std::vector<Board> afterstates(const Board& board, const DiceRoll& roll) {
  std::set<Board> result;
  const std::set<Board> start{board};
  if (roll.is_double()) {
    std::set<Board> deepest = start;
    std::set<Board> level = start;
    for (int k = 0; k < 4; ++k) {
      level = expand(level, roll.d1);
      if (level.empty()) break;
      deepest = level;
    }
    result = deepest;
  } else {
    const auto a1 = expand(start, roll.d1);
    const auto b1 = expand(start, roll.d2);
    const auto ab = expand(a1, roll.d2);
    const auto ba = expand(b1, roll.d1);
    if (!ab.empty() || !ba.empty()) {
      result.insert(ab.begin(), ab.end());
      result.insert(ba.begin(), ba.end());
    } else if (!a1.empty() || !b1.empty()) {
      const auto& high = roll.d1 > roll.d2 ? a1 : b1;
      const auto& low = roll.d1 > roll.d2 ? b1 : a1;
      result = high.empty() ? low : high;
    } else {
      result = start;
    }
  }
  std::vector<Board> out;
  for (Board b : result) {
    b.to_move = bg::opponent(b.to_move);
    out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::uint64_t perft(const Board& b, int depth) {
  std::uint64_t total = 0;
  for (int d1 = 1; d1 <= 6; ++d1) {
    for (int d2 = 1; d2 <= 6; ++d2) {
      const auto next = afterstates(b, DiceRoll{d1, d2});
      if (depth == 1) {
        total += next.size();
      } else {
        for (const auto& a : next) total += bg::is_terminal(a) ? 1 : naive::perft(a, depth - 1);
      }
    }
  }
  return total;
}

}  // namespace naive

// A random legal, non-terminal board. Checkers go to the bar, off, or to
// points not held by the opponent; side to move is random.
inline Board random_board(Rng& rng) {
  for (;;) {
    Board b;
    for (int si = 0; si < 2; ++si) {
      const Side s = static_cast<Side>(si);
      int remaining = bg::kCheckers;
      const int mode = static_cast<int>(rng.uniform_below(4));
      if (mode == 0) {
        const int off = static_cast<int>(rng.uniform_below(15));
        b.off[si] = static_cast<std::uint8_t>(off);
        remaining -= off;
      }
      if (rng.uniform_below(3) == 0) {
        const int bar = std::min(remaining, 1 + static_cast<int>(rng.uniform_below(3)));
        b.bar[si] = static_cast<std::uint8_t>(bar);
        remaining -= bar;
      }
      // mode 1 keeps the checkers in the home board (bear-off positions).
      bool home_only = mode == 1 && b.bar[si] == 0;
      int misses = 0;
      while (remaining > 0) {
        if (misses > 50) home_only = false;
        const int d = home_only ? 1 + static_cast<int>(rng.uniform_below(6))
                                : 1 + static_cast<int>(rng.uniform_below(24));
        const int p = bg::point_of(s, d);
        const int v = b.points[p - 1] * bg::sign(s);
        if (v < 0) {
          ++misses;
          continue;
        }
        b.points[p - 1] = static_cast<std::int8_t>(b.points[p - 1] + bg::sign(s));
        --remaining;
      }
    }
    b.to_move = rng.uniform_below(2) ? Side::white : Side::black;
    if (!bg::is_terminal(b)) return b;
  }
}

// A position reached by random play from the opening (may be terminal).
inline Board random_game_position(Rng& rng, int max_plies) {
  const auto opening = bg::opening_roll(rng);
  Board b = bg::opening_board(opening.first);
  DiceRoll roll = opening.roll;
  std::vector<Board> options;
  const int plies = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(max_plies) + 1));
  for (int i = 0; i < plies; ++i) {
    bg::generate_afterstates(b, roll, options);
    Board next = options[rng.uniform_below(options.size())];
    if (bg::is_terminal(next)) break;
    b = next;
    roll = DiceRoll{rng.die(), rng.die()};
  }
  return b;
}

}  // namespace mcr::testing
