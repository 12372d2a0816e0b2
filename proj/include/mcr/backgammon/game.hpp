#pragma once

#include "mcr/backgammon/board.hpp"
#include "mcr/backgammon/movegen.hpp"
#include "mcr/random.hpp"

namespace mcr::bg {

struct Opening {
  Side first = Side::white;
  DiceRoll roll;
};

// Each side rolls one die, ties are re-rolled; the higher die moves first
// and plays the two dice shown.
[[nodiscard]] inline Opening opening_roll(Rng& dice) {
  for (;;) {
    const int white = dice.die();
    const int black = dice.die();
    if (white == black) continue;
    return {white > black ? Side::white : Side::black, DiceRoll{white, black}};
  }
}

[[nodiscard]] inline Board opening_board(Side first) {
  Board b = starting_position();
  b.to_move = first;
  return b;
}

}  // namespace mcr::bg
