#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mcr/backgammon/game.hpp"
#include "mcr/backgammon/movegen.hpp"
#include "mcr/eval/evaluator.hpp"
#include "mcr/eval/features.hpp"
#include "mcr/random.hpp"

namespace mcr::eval {

// One TD(lambda) update with accumulating traces:
//   e <- lambda * e + features_t
//   w <- w + alpha * (target - value_t) * e
// `features_t` is the gradient of the value at time t (for a linear value,
// the feature vector itself, bias input included).
inline void td_step(std::span<double> weights, std::span<const double> features_t, double value_t, double target,
                    std::span<double> eligibility, double alpha, double lambda) {
  if (features_t.size() != weights.size()) throw DimensionMismatch(weights.size(), features_t.size());
  if (eligibility.size() != weights.size()) throw DimensionMismatch(weights.size(), eligibility.size());
  const double step = alpha * (target - value_t);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    eligibility[i] = lambda * eligibility[i] + features_t[i];
    weights[i] += step * eligibility[i];
  }
}

struct TrainConfig {
  std::uint64_t episodes = 20000;
  double alpha = 0.02;
  double lambda = 0.7;
  std::uint64_t seed = 1;
  Encoding encoding = Encoding::rawhit54;
  double noise_std = 0.0;  // recorded for players built from the result
  std::uint64_t trace_window = 1000;
};

inline void validate(const TrainConfig& c) {
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw std::invalid_argument("train: alpha must be in (0, 1]");
  if (!(c.lambda >= 0.0 && c.lambda <= 1.0)) throw std::invalid_argument("train: lambda must be in [0, 1]");
  if (!(c.noise_std >= 0.0)) throw std::invalid_argument("train: noise_std must be non-negative");
  if (c.trace_window == 0) throw std::invalid_argument("train: trace_window must be positive");
}

struct TrainResult {
  LinearEvaluator evaluator;
  // Mean squared TD error over consecutive windows of `trace_window` episodes.
  std::vector<double> loss_trace;
};

class NonFiniteWeights : public std::runtime_error {
 public:
  explicit NonFiniteWeights(std::uint64_t episode)
      : std::runtime_error("train: non-finite weight after episode " + std::to_string(episode)) {}
};

// Self-play TD(lambda) on afterstate values. Both sides share the weights
// and move greedily with respect to them. Values are tracked in White's
// perspective: for an afterstate made by side s the value is
// sign(s) * (w . [f(a, s), 1]), so its gradient is sign(s) * [f(a, s), 1].
// The step size decays linearly from alpha to alpha / 10 over the run.
[[nodiscard]] inline TrainResult train_td(const TrainConfig& config) {
  validate(config);
  const std::size_t nf = feature_count(config.encoding);
  const std::size_t nw = nf + 1;
  std::vector<double> w(nw, 0.0);
  std::vector<double> trace(nw, 0.0);
  std::vector<double> grad_prev(nw, 0.0);
  std::vector<double> grad_cur(nw, 0.0);
  std::vector<bg::Board> options;
  std::array<double, kMaxFeatures> f{};

  auto value_of = [&](std::span<const double> g) {
    double v = 0.0;
    for (std::size_t i = 0; i < nw; ++i) v += w[i] * g[i];
    return v;
  };
  auto gradient = [&](const bg::Board& a, Side mover, std::vector<double>& out) {
    encode_into(a, mover, config.encoding, std::span<double>(f.data(), nf));
    const double s = bg::sign(mover);
    for (std::size_t i = 0; i < nf; ++i) out[i] = s * f[i];
    out[nf] = s;
  };

  TrainResult result{LinearEvaluator::zero(config.encoding), {}};
  double window_sq = 0.0;
  std::uint64_t window_n = 0;

  for (std::uint64_t ep = 0; ep < config.episodes; ++ep) {
    const double alpha =
        config.alpha * (1.0 - 0.9 * static_cast<double>(ep) / static_cast<double>(config.episodes));
    Rng rng(hash_combine(config.seed, ep));
    const auto opening = bg::opening_roll(rng);
    bg::Board board = bg::opening_board(opening.first);
    bg::DiceRoll roll = opening.roll;
    std::fill(trace.begin(), trace.end(), 0.0);
    bool have_prev = false;

    for (int ply = 0; ply < 10000; ++ply) {
      bg::generate_afterstates(board, roll, options);
      const Side mover = board.to_move;
      std::size_t best = 0;
      double best_value = 0.0;
      for (std::size_t i = 0; i < options.size(); ++i) {
        encode_into(options[i], mover, config.encoding, std::span<double>(f.data(), nf));
        double v = w[nf];
        for (std::size_t k = 0; k < nf; ++k) v += w[k] * f[k];
        if (i == 0 || v > best_value) {
          best_value = v;
          best = i;
        }
      }
      const bg::Board& after = options[best];
      gradient(after, mover, grad_cur);
      const auto outcome = bg::terminal_value(after);

      if (have_prev) {
        const double v_prev = value_of(grad_prev);
        const double target = outcome ? static_cast<double>(*outcome) : value_of(grad_cur);
        window_sq += (target - v_prev) * (target - v_prev);
        ++window_n;
        td_step(w, grad_prev, v_prev, target, trace, alpha, config.lambda);
      }
      if (outcome) {
        // The final afterstate is also pulled toward the true result.
        const double v_last = value_of(grad_cur);
        td_step(w, grad_cur, v_last, static_cast<double>(*outcome), trace, alpha, config.lambda);
        break;
      }
      std::swap(grad_prev, grad_cur);
      have_prev = true;
      board = after;
      roll = bg::DiceRoll{rng.die(), rng.die()};
    }

    for (double x : w) {
      if (!std::isfinite(x)) throw NonFiniteWeights(ep);
    }
    if ((ep + 1) % config.trace_window == 0 || ep + 1 == config.episodes) {
      result.loss_trace.push_back(window_n ? window_sq / static_cast<double>(window_n) : 0.0);
      window_sq = 0.0;
      window_n = 0;
    }
  }

  Provenance prov{config.seed, config.episodes, config.alpha, config.lambda, config.noise_std};
  result.evaluator = LinearEvaluator(config.encoding, std::move(w), prov);
  return result;
}

}  // namespace mcr::eval
