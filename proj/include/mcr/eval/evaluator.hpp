#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcr/backgammon/board.hpp"
#include "mcr/eval/features.hpp"
#include "mcr/random.hpp"

namespace mcr::eval {

inline constexpr double kMaxEquity = 3.0;

[[nodiscard]] constexpr double clamp_equity(double v) noexcept {
  return v < -kMaxEquity ? -kMaxEquity : (v > kMaxEquity ? kMaxEquity : v);
}

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : std::invalid_argument("dimension-mismatch: expected " + std::to_string(expected) + ", got " +
                              std::to_string(got)) {}
};

// Equity of an afterstate for `perspective`, the player who just moved.
// Implementations are immutable and safe to share across threads.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  [[nodiscard]] virtual double evaluate(const Board& afterstate, Side perspective) const = 0;
  [[nodiscard]] virtual std::string id() const = 0;
};

// (opponent pips - own pips) / 167, clamped.
class PipEvaluator final : public Evaluator {
 public:
  [[nodiscard]] double evaluate(const Board& b, Side perspective) const override {
    const int own = bg::pip_count(b, perspective);
    const int opp = bg::pip_count(b, bg::opponent(perspective));
    return clamp_equity((opp - own) / 167.0);
  }
  [[nodiscard]] std::string id() const override { return "pip"; }
};

struct Provenance {
  std::uint64_t seed = 0;
  std::uint64_t episodes = 0;
  double alpha = 0.0;
  double lambda = 0.0;
  double noise_std = 0.0;
};

// Single-layer linear evaluator: weights . features + bias, clamped to
// [-3, 3]. The bias is stored as the last weight.
class LinearEvaluator final : public Evaluator {
 public:
  LinearEvaluator(Encoding encoding, std::vector<double> weights, Provenance provenance = {})
      : encoding_(encoding), weights_(std::move(weights)), provenance_(provenance) {
    if (weights_.size() != feature_count(encoding_) + 1) {
      throw DimensionMismatch(feature_count(encoding_) + 1, weights_.size());
    }
  }

  [[nodiscard]] static LinearEvaluator zero(Encoding encoding) {
    return LinearEvaluator(encoding, std::vector<double>(feature_count(encoding) + 1, 0.0));
  }

  [[nodiscard]] double evaluate(const Board& b, Side perspective) const override {
    std::array<double, kMaxFeatures> f;
    const std::size_t n = feature_count(encoding_);
    encode_into(b, perspective, encoding_, std::span<double>(f.data(), n));
    return clamp_equity(dot(std::span<const double>(f.data(), n)));
  }

  [[nodiscard]] double evaluate(const FeatureVector& f) const {
    if (f.encoding != encoding_ || f.values.size() != feature_count(encoding_)) {
      throw DimensionMismatch(feature_count(encoding_), f.values.size());
    }
    return clamp_equity(dot(f.values));
  }

  // Unclamped weights . features + bias.
  [[nodiscard]] double dot(std::span<const double> features) const noexcept {
    double v = weights_.back();
    for (std::size_t i = 0; i < features.size(); ++i) v += weights_[i] * features[i];
    return v;
  }

  [[nodiscard]] std::string id() const override { return std::string("linear-") + std::string(to_string(encoding_)); }

  [[nodiscard]] Encoding encoding() const noexcept { return encoding_; }
  [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
  [[nodiscard]] const Provenance& provenance() const noexcept { return provenance_; }

 private:
  Encoding encoding_;
  std::vector<double> weights_;
  Provenance provenance_;
};

// Evaluation with additive Gaussian noise drawn from the caller's stream; the
// result is clamped again. noise_std == 0 draws nothing.
[[nodiscard]] inline double evaluate_noisy(const Evaluator& e, const Board& b, Side perspective, double noise_std,
                                           Rng& rng) {
  const double v = e.evaluate(b, perspective);
  if (noise_std <= 0.0) return v;
  return clamp_equity(v + noise_std * rng.normal());
}

}  // namespace mcr::eval
