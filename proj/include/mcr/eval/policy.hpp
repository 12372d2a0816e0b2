#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>

#include "mcr/backgammon/movegen.hpp"
#include "mcr/eval/evaluator.hpp"
#include "mcr/random.hpp"
#include "mcr/text_util.hpp"

namespace mcr::eval {

// A base policy over backgammon afterstates: either uniform random, or
// greedy (1-ply) with respect to an evaluator, optionally with evaluation
// noise. Options are expected in canonical order; greedy ties go to the
// first option.
class Policy {
 public:
  [[nodiscard]] static Policy random() { return Policy(nullptr, 0.0); }

  [[nodiscard]] static Policy greedy(std::shared_ptr<const Evaluator> evaluator, double noise_std = 0.0) {
    if (!evaluator) throw std::invalid_argument("greedy policy needs an evaluator");
    if (!(noise_std >= 0.0)) throw std::invalid_argument("noise_std must be non-negative");
    return Policy(std::move(evaluator), noise_std);
  }

  [[nodiscard]] bool is_random() const noexcept { return evaluator_ == nullptr; }
  [[nodiscard]] const std::shared_ptr<const Evaluator>& evaluator() const noexcept { return evaluator_; }
  [[nodiscard]] double noise_std() const noexcept { return noise_std_; }

  [[nodiscard]] std::size_t choose(const Board& pre, std::span<const Board> options, Rng& rng) const {
    if (options.size() <= 1) return 0;
    if (!evaluator_) return static_cast<std::size_t>(rng.uniform_below(options.size()));
    const Side mover = pre.to_move;
    std::size_t best = 0;
    double best_value = evaluate_noisy(*evaluator_, options[0], mover, noise_std_, rng);
    for (std::size_t i = 1; i < options.size(); ++i) {
      const double v = evaluate_noisy(*evaluator_, options[i], mover, noise_std_, rng);
      if (v > best_value) {
        best_value = v;
        best = i;
      }
    }
    return best;
  }

  [[nodiscard]] std::string id() const {
    if (!evaluator_) return "random";
    std::string out = evaluator_->id();
    if (noise_std_ > 0.0) out += "+noise" + format_double(noise_std_);
    return out;
  }

 private:
  Policy(std::shared_ptr<const Evaluator> evaluator, double noise_std)
      : evaluator_(std::move(evaluator)), noise_std_(noise_std) {}

  std::shared_ptr<const Evaluator> evaluator_;
  double noise_std_ = 0.0;
};

// The policy's afterstate for `roll` at `board`.
[[nodiscard]] inline Board choose_move(const Policy& policy, const Board& board, const bg::DiceRoll& roll, Rng& rng) {
  const auto options = bg::legal_afterstates(board, roll).afterstates();
  return options[policy.choose(board, options, rng)];
}

[[nodiscard]] inline Policy pip_greedy() { return Policy::greedy(std::make_shared<PipEvaluator>()); }

// Leaf scorer for truncated trials: the evaluator's equity for the player who
// made the afterstate, converted to White's perspective.
[[nodiscard]] inline std::function<double(const Board&)> make_leaf(std::shared_ptr<const Evaluator> evaluator) {
  return [e = std::move(evaluator)](const Board& b) {
    const Side mover = bg::opponent(b.to_move);
    return bg::sign(mover) * e->evaluate(b, mover);
  };
}

}  // namespace mcr::eval
