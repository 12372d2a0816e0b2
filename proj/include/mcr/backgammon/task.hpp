#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mcr/backgammon/board.hpp"
#include "mcr/backgammon/movegen.hpp"
#include "mcr/engine.hpp"
#include "mcr/random.hpp"
#include "mcr/stats.hpp"

namespace mcr::bg {

// A move decision: the board with the player to move, and that player's roll.
struct Decision {
  Board board;
  DiceRoll roll;
};

// Backgammon as an engine task. Values are in White's perspective, so a
// trial is scored for the deciding player by the sign of whoever made the
// candidate afterstate.
class BackgammonTask {
 public:
  using State = Board;
  using DecisionState = Decision;

  [[nodiscard]] std::vector<Board> candidates(const Decision& d) const {
    const MoveSet set = legal_afterstates(d.board, d.roll);
    return set.afterstates();
  }

  [[nodiscard]] std::optional<double> terminal_value(const Board& b) const noexcept {
    if (auto v = bg::terminal_value(b)) return static_cast<double>(*v);
    return std::nullopt;
  }

  [[nodiscard]] double perspective_sign(const Board& afterstate) const noexcept {
    return sign(opponent(afterstate.to_move));
  }

  [[nodiscard]] Interval value_range() const noexcept { return {-3.0, 3.0}; }

  template <class Policy>
  [[nodiscard]] Board advance(const Board& s, const Policy& policy, Rng& rng) const {
    thread_local std::vector<Board> options;
    const DiceRoll roll{rng.die(), rng.die()};
    generate_afterstates(s, roll, options);
    if (options.size() == 1) return options.front();
    const std::size_t pick = policy.choose(s, std::span<const Board>(options), rng);
    return options[pick];
  }
};

}  // namespace mcr::bg
