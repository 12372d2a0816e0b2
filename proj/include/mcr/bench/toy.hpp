#pragma once

// Dice race: a single runner must cover `distance` pips. Each step rolls one
// die r and the base policy either moves r pips or plays safe and moves one.
// A finished race pays bonus - 0.1 * steps. Decision candidates start the
// race from the same distance minus a head start k, each with its own fixed
// bonus, so every candidate value is known exactly by dynamic programming.

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mcr/engine.hpp"
#include "mcr/random.hpp"
#include "mcr/stats.hpp"

namespace mcr::toy {

inline constexpr int kMaxDistance = 30;
inline constexpr double kStepCost = 0.1;
inline constexpr double kMaxBonus = 1.0;

struct ToyState {
  int distance = 0;
  int steps = 0;
  double bonus = 0.0;
  friend bool operator==(const ToyState&, const ToyState&) = default;
};

struct ToyDecision {
  int distance = 0;
  std::vector<double> bonuses;  // candidate k gets a head start of k pips
};

enum class ToyPolicyKind { full, cautious, uniform };

struct ToyPolicy {
  ToyPolicyKind kind = ToyPolicyKind::uniform;

  // Options are ordered by remaining distance, the full move first.
  [[nodiscard]] std::size_t choose(const ToyState&, std::span<const ToyState> options, Rng& rng) const {
    switch (kind) {
      case ToyPolicyKind::full: return 0;
      case ToyPolicyKind::cautious: return options.size() - 1;
      case ToyPolicyKind::uniform: return static_cast<std::size_t>(rng.uniform_below(options.size()));
    }
    return 0;
  }
};

inline void validate(const ToyState& s) {
  if (s.distance < 0 || s.distance > kMaxDistance) throw std::invalid_argument("toy: distance must be in [0, 30]");
  if (s.steps < 0) throw std::invalid_argument("toy: steps must be non-negative");
  if (!(s.bonus >= -kMaxBonus && s.bonus <= kMaxBonus)) throw std::invalid_argument("toy: bonus must be in [-1, 1]");
}

// Remaining distances reachable with die r from d, full move first.
[[nodiscard]] inline std::array<int, 2> toy_moves(int d, int r, int& count) noexcept {
  const int full = std::max(d - r, 0);
  const int safe = d - 1;
  count = full == safe ? 1 : 2;
  return {full, safe};
}

class DiceRaceTask {
 public:
  using State = ToyState;
  using DecisionState = ToyDecision;

  [[nodiscard]] std::vector<ToyState> candidates(const ToyDecision& d) const {
    std::vector<ToyState> out;
    for (std::size_t k = 0; k < d.bonuses.size(); ++k) {
      ToyState s{std::max(d.distance - static_cast<int>(k), 0), 0, d.bonuses[k]};
      validate(s);
      out.push_back(s);
    }
    return out;
  }

  [[nodiscard]] std::optional<double> terminal_value(const ToyState& s) const noexcept {
    if (s.distance > 0) return std::nullopt;
    return s.bonus - kStepCost * s.steps;
  }

  [[nodiscard]] double perspective_sign(const ToyState&) const noexcept { return 1.0; }

  [[nodiscard]] Interval value_range() const noexcept {
    return {-kMaxBonus - kStepCost * kMaxDistance, kMaxBonus};
  }

  template <class Policy>
  [[nodiscard]] ToyState advance(const ToyState& s, const Policy& policy, Rng& rng) const {
    const int r = rng.die();
    int n = 0;
    const auto moves = toy_moves(s.distance, r, n);
    std::array<ToyState, 2> options{};
    for (int i = 0; i < n; ++i) options[i] = ToyState{moves[i], s.steps + 1, s.bonus};
    if (n == 1) return options[0];
    return options[policy.choose(s, std::span<const ToyState>(options.data(), 2), rng)];
  }
};

// Expected number of further steps from each distance 0..30 under a policy.
[[nodiscard]] inline std::array<double, kMaxDistance + 1> toy_expected_steps(ToyPolicyKind kind) {
  std::array<double, kMaxDistance + 1> e{};
  for (int d = 1; d <= kMaxDistance; ++d) {
    double acc = 0.0;
    for (int r = 1; r <= 6; ++r) {
      int n = 0;
      const auto m = toy_moves(d, r, n);
      if (n == 1) {
        acc += e[m[0]];
      } else if (kind == ToyPolicyKind::full) {
        acc += e[m[0]];
      } else if (kind == ToyPolicyKind::cautious) {
        acc += e[m[1]];
      } else {
        acc += 0.5 * (e[m[0]] + e[m[1]]);
      }
    }
    e[d] = 1.0 + acc / 6.0;
  }
  return e;
}

// Exact expected payoff of a toy state under the base policy.
[[nodiscard]] inline double toy_exact_value(const ToyState& s, ToyPolicyKind kind) {
  validate(s);
  return s.bonus - kStepCost * (s.steps + toy_expected_steps(kind)[s.distance]);
}

}  // namespace mcr::toy
