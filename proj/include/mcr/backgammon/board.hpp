#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace mcr::bg {

enum class Side : std::uint8_t { white = 0, black = 1 };

[[nodiscard]] constexpr Side opponent(Side s) noexcept {
  return s == Side::white ? Side::black : Side::white;
}
[[nodiscard]] constexpr int index(Side s) noexcept { return static_cast<int>(s); }
// +1 for White, -1 for Black: the sign convention of point counts and values.
[[nodiscard]] constexpr int sign(Side s) noexcept { return s == Side::white ? 1 : -1; }

inline constexpr int kCheckers = 15;
inline constexpr int kPoints = 24;
inline constexpr int kBarDistance = 25;

class InvalidBoard : public std::invalid_argument {
 public:
  explicit InvalidBoard(const std::string& what) : std::invalid_argument("invalid-board: " + what) {}
};

// Full position. Points are numbered 1..24 from White's side: White moves
// toward point 1 and bears off past it, Black moves toward point 24.
// points[p - 1] > 0 holds White checkers, < 0 Black checkers.
//
// Member order is the canonical encoding order, so the defaulted comparison
// sorts boards exactly as their canonical keys do.
struct Board {
  std::array<std::int8_t, kPoints> points{};
  std::array<std::uint8_t, 2> bar{};
  std::array<std::uint8_t, 2> off{};
  Side to_move = Side::white;

  [[nodiscard]] int at(int point) const noexcept { return points[point - 1]; }

  // Checkers of `side` on `point` (numbered from White's side).
  [[nodiscard]] int count(Side side, int point) const noexcept {
    const int v = points[point - 1] * sign(side);
    return v > 0 ? v : 0;
  }

  friend auto operator<=>(const Board&, const Board&) = default;
  friend bool operator==(const Board&, const Board&) = default;
};

// Point number of `distance` (1..24, distance from bearing off) for `side`.
[[nodiscard]] constexpr int point_of(Side side, int distance) noexcept {
  return side == Side::white ? distance : kPoints + 1 - distance;
}

[[nodiscard]] inline Board starting_position() {
  Board b;
  b.points[24 - 1] = 2;
  b.points[13 - 1] = 5;
  b.points[8 - 1] = 3;
  b.points[6 - 1] = 5;
  b.points[1 - 1] = -2;
  b.points[12 - 1] = -5;
  b.points[17 - 1] = -3;
  b.points[19 - 1] = -5;
  return b;
}

inline void validate(const Board& b) {
  std::array<int, 2> total{};
  for (int p = 1; p <= kPoints; ++p) {
    const int v = b.at(p);
    if (v < -kCheckers || v > kCheckers) {
      throw InvalidBoard("point " + std::to_string(p) + " holds " + std::to_string(v) + " checkers");
    }
    if (v > 0) total[0] += v;
    if (v < 0) total[1] -= v;
  }
  static constexpr const char* names[2] = {"White", "Black"};
  for (int s = 0; s < 2; ++s) {
    if (b.bar[s] > kCheckers || b.off[s] > kCheckers) {
      throw InvalidBoard(std::string(names[s]) + " bar/off count out of range");
    }
    total[s] += b.bar[s] + b.off[s];
    if (total[s] != kCheckers) {
      throw InvalidBoard(std::string(names[s]) + " has " + std::to_string(total[s]) + " checkers, expected 15");
    }
  }
  if (b.to_move != Side::white && b.to_move != Side::black) throw InvalidBoard("bad side to move");
}

[[nodiscard]] inline bool is_valid(const Board& b) noexcept {
  try {
    validate(b);
    return true;
  } catch (const InvalidBoard&) {
    return false;
  }
}

// Colors swapped and points reflected (p -> 25 - p).
[[nodiscard]] inline Board mirror(const Board& b) noexcept {
  Board m;
  for (int p = 1; p <= kPoints; ++p) m.points[p - 1] = static_cast<std::int8_t>(-b.at(kPoints + 1 - p));
  m.bar = {b.bar[1], b.bar[0]};
  m.off = {b.off[1], b.off[0]};
  m.to_move = opponent(b.to_move);
  return m;
}

// Signed points of a finished game: + for a White win, - for Black; 1 for a
// single game, 2 for a gammon (loser bore off nothing), 3 for a backgammon
// (additionally a loser checker on the bar or in the winner's home board).
[[nodiscard]] inline std::optional<int> terminal_value(const Board& b) noexcept {
  for (Side winner : {Side::white, Side::black}) {
    if (b.off[index(winner)] != kCheckers) continue;
    const Side loser = opponent(winner);
    int v = 1;
    if (b.off[index(loser)] == 0) {
      v = 2;
      bool trapped = b.bar[index(loser)] > 0;
      for (int d = 1; d <= 6 && !trapped; ++d) trapped = b.count(loser, point_of(winner, d)) > 0;
      if (trapped) v = 3;
    }
    return v * sign(winner);
  }
  return std::nullopt;
}

[[nodiscard]] inline bool is_terminal(const Board& b) noexcept {
  return b.off[0] == kCheckers || b.off[1] == kCheckers;
}

// Pips `side` needs to bear off everything; bar checkers count 25.
[[nodiscard]] inline int pip_count(const Board& b, Side side) noexcept {
  int pips = kBarDistance * b.bar[index(side)];
  for (int d = 1; d <= kPoints; ++d) pips += d * b.count(side, point_of(side, d));
  return pips;
}

// Fixed-width serialization used for deduplication and tie-breaking:
// 24 point bytes (count + 15), White bar, Black bar, White off, Black off, side.
using CanonicalKey = std::array<std::uint8_t, kPoints + 5>;

[[nodiscard]] inline CanonicalKey canonical_key(const Board& b) noexcept {
  CanonicalKey k{};
  for (int i = 0; i < kPoints; ++i) k[i] = static_cast<std::uint8_t>(b.points[i] + kCheckers);
  k[24] = b.bar[0];
  k[25] = b.bar[1];
  k[26] = b.off[0];
  k[27] = b.off[1];
  k[28] = static_cast<std::uint8_t>(b.to_move);
  return k;
}

}  // namespace mcr::bg
