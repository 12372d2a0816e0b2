#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace mcr {

class InsufficientCount : public std::domain_error {
 public:
  explicit InsufficientCount(std::uint64_t count)
      : std::domain_error("stats: confidence interval needs at least 2 samples, have " +
                          std::to_string(count)) {}
};

// Single-pass running mean / sum of squared deviations (Welford), with the
// pairwise merge of Chan et al. so that per-worker accumulators can be
// combined in a fixed order.
struct RunningStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) noexcept {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
    if (m2 < 0.0) m2 = 0.0;
  }

  // Unbiased estimator; only meaningful for count >= 2.
  [[nodiscard]] double sample_variance() const noexcept {
    return count >= 2 ? m2 / static_cast<double>(count - 1) : 0.0;
  }

  [[nodiscard]] double stddev() const noexcept { return std::sqrt(sample_variance()); }

  [[nodiscard]] double standard_error() const noexcept {
    return count >= 2 ? std::sqrt(sample_variance() / static_cast<double>(count)) : 0.0;
  }

  friend bool operator==(const RunningStats&, const RunningStats&) = default;
};

[[nodiscard]] inline RunningStats merge(const RunningStats& a, const RunningStats& b) noexcept {
  if (b.count == 0) return a;
  if (a.count == 0) return b;
  RunningStats out;
  out.count = a.count + b.count;
  const double na = static_cast<double>(a.count);
  const double nb = static_cast<double>(b.count);
  const double n = static_cast<double>(out.count);
  const double delta = b.mean - a.mean;
  out.mean = a.mean + delta * (nb / n);
  out.m2 = a.m2 + b.m2 + delta * delta * (na * nb / n);
  if (out.m2 < 0.0) out.m2 = 0.0;
  return out;
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] double width() const noexcept { return hi - lo; }
  [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

// Normal-approximation interval mean +- z * se.
[[nodiscard]] inline Interval confidence_interval(const RunningStats& s, double z) {
  if (s.count < 2) throw InsufficientCount(s.count);
  const double half = z * s.standard_error();
  return {s.mean - half, s.mean + half};
}

}  // namespace mcr
