#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcr/backgammon/board.hpp"

namespace mcr::bg {

class NotABlot : public std::invalid_argument {
 public:
  explicit NotABlot(int point)
      : std::invalid_argument("not-a-blot: point " + std::to_string(point) + " does not hold exactly one checker") {}
};

namespace detail {

// A way to cover `distance` pips with one roll: the ordered rolls in `mask`
// hit if every intermediate landing point in `stops` (distances from the
// hitter, bit k = k pips) is open.
struct ShotPattern {
  std::uint64_t mask;
  std::uint32_t stops;
};

inline constexpr int roll_bit(int a, int b) noexcept { return (a - 1) * 6 + (b - 1); }

// Patterns per distance with identical stops merged, stored flat:
// patterns[begin[d] .. begin[d + 1]) cover distance d.
struct ShotTable {
  std::vector<ShotPattern> patterns;
  std::array<std::uint16_t, 26> begin{};
};

inline const ShotTable& shot_table() {
  static const ShotTable table = [] {
    std::array<std::vector<ShotPattern>, 25> by_distance;
    auto add = [&](int d, std::uint64_t bit, std::uint32_t stops) {
      for (auto& p : by_distance[d]) {
        if (p.stops == stops) {
          p.mask |= bit;
          return;
        }
      }
      by_distance[d].push_back({bit, stops});
    };
    for (int a = 1; a <= 6; ++a) {
      for (int b = 1; b <= 6; ++b) {
        const std::uint64_t bit = std::uint64_t{1} << roll_bit(a, b);
        if (a == b) {
          for (int k = 1; k <= 4 && a * k <= 24; ++k) {
            std::uint32_t stops = 0;
            for (int j = 1; j < k; ++j) stops |= 1u << (a * j);
            add(a * k, bit, stops);
          }
        } else {
          add(a, bit, 0);
          add(b, bit, 0);
          add(a + b, bit, 1u << a);
          add(a + b, bit, 1u << b);
        }
      }
    }
    ShotTable t;
    for (int d = 0; d <= 24; ++d) {
      t.begin[d] = static_cast<std::uint16_t>(t.patterns.size());
      t.patterns.insert(t.patterns.end(), by_distance[d].begin(), by_distance[d].end());
    }
    t.begin[25] = static_cast<std::uint16_t>(t.patterns.size());
    return t;
  }();
  return table;
}

}  // namespace detail

// The attacker's view of the board: bit d of `blocked` is set when the
// defender holds the point d pips from the attacker's bear-off, and bit d of
// `sources` when the attacker has a checker there (25 = bar).
struct ShotContext {
  Side attacker;
  std::uint32_t blocked = 0;
  std::uint32_t blocked_reversed = 0;  // bit 31 - d mirrors bit d of blocked
  std::uint32_t sources = 0;
};

[[nodiscard]] inline ShotContext shot_context(const Board& b, Side attacker) {
  ShotContext c{attacker};
  const int s = sign(attacker);
  for (int p = 1; p <= kPoints; ++p) {
    const int v = b.points[p - 1] * s;
    const int d = attacker == Side::white ? p : kPoints + 1 - p;
    c.blocked |= static_cast<std::uint32_t>(v <= -2) << d;
    c.sources |= static_cast<std::uint32_t>(v > 0) << d;
  }
  if (b.bar[index(attacker)] > 0) c.sources |= 1u << kBarDistance;
  for (std::uint32_t m = c.blocked; m != 0; m &= m - 1) c.blocked_reversed |= 1u << (31 - std::countr_zero(m));
  return c;
}

// Hitting rolls against a defender blot `j` pips from the attacker's
// bear-off, in the attacker's distances.
[[nodiscard]] inline std::uint64_t shot_mask_at(const ShotContext& c, int j) {
  const auto& table = detail::shot_table();
  constexpr std::uint64_t kAll = (std::uint64_t{1} << 36) - 1;
  std::uint64_t hits = 0;
  // Sources strictly above j and at most 24 pips away.
  std::uint32_t src_mask = c.sources & ~((2u << j) - 1);
  if (j + 24 < 31) src_mask &= (2u << (j + 24)) - 1;
  for (; src_mask != 0; src_mask &= src_mask - 1) {
    const int src = std::countr_zero(src_mask);
    // Bit k set when the point k pips below src is blocked.
    const std::uint32_t near_blocks = c.blocked_reversed >> (31 - src);
    const int d = src - j;
    for (int i = table.begin[d]; i < table.begin[d + 1]; ++i) {
      const auto& pat = table.patterns[i];
      if ((pat.stops & near_blocks) == 0) hits |= pat.mask;
    }
    if (hits == kAll) break;
  }
  return hits;
}

// Bitmask over the 36 ordered rolls (bit (d1-1)*6 + (d2-1)) with which the
// player other than the blot's owner can hit the blot on `blot_point`.
// Direct shots and combination shots count; a combination is blocked when an
// intermediate landing point holds two or more of the blot owner's checkers.
// Whether the hitter is free to move (e.g. must enter from the bar first) is
// not modelled.
[[nodiscard]] inline std::uint64_t shot_mask(const Board& b, int blot_point) {
  if (blot_point < 1 || blot_point > kPoints) throw NotABlot(blot_point);
  const int v = b.at(blot_point);
  if (v != 1 && v != -1) throw NotABlot(blot_point);
  const Side attacker = v > 0 ? Side::black : Side::white;
  const int j = attacker == Side::white ? blot_point : kPoints + 1 - blot_point;
  return shot_mask_at(shot_context(b, attacker), j);
}

// Number of the 36 ordered rolls that hit the blot on `blot_point`.
[[nodiscard]] inline int shot_rolls(const Board& b, int blot_point) {
  return std::popcount(shot_mask(b, blot_point));
}

// Sum of shot_rolls over every blot of `owner`.
[[nodiscard]] inline int total_shot_rolls(const Board& b, Side owner) {
  const Side attacker = opponent(owner);
  const ShotContext c = shot_context(b, attacker);
  int total = 0;
  const int s = sign(owner);
  for (int d = 1; d <= kPoints; ++d) {
    // d is the attacker's distance of the point.
    if (b.at(point_of(attacker, d)) * s == 1) total += std::popcount(shot_mask_at(c, d));
  }
  return total;
}

}  // namespace mcr::bg
