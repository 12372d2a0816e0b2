#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace mcr {

// SplitMix64 finalizer. A bijection on 64-bit words.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Combine two words into a seed; order-sensitive.
[[nodiscard]] constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) noexcept {
  return mix64(mix64(seed) + 0x9e3779b97f4a7c15ULL + value);
}

[[nodiscard]] constexpr std::uint64_t hash_bytes(std::string_view bytes,
                                                 std::uint64_t h = 0xcbf29ce484222325ULL) noexcept {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline constexpr unsigned kTrialIndexBits = 40;
inline constexpr std::uint64_t kMaxTrialIndex = (std::uint64_t{1} << kTrialIndexBits) - 1;
inline constexpr std::uint64_t kMaxCandidateId = (std::uint64_t{1} << (64 - kTrialIndexBits)) - 1;

// Stream seed for one Monte-Carlo trial:
//   mix64(mix64(master) + (candidate << 40 | trial))
// For a fixed master seed the map is injective over candidate < 2^24 and
// trial < 2^40, since addition of a constant and mix64 are both bijections.
[[nodiscard]] constexpr std::uint64_t schedule_trial_seed(std::uint64_t master_seed,
                                                          std::uint64_t candidate_id,
                                                          std::uint64_t trial_index) noexcept {
  const std::uint64_t packed =
      ((candidate_id & kMaxCandidateId) << kTrialIndexBits) | (trial_index & kMaxTrialIndex);
  return mix64(mix64(master_seed) + packed);
}

// Thin wrapper over mt19937_64. The engine's output sequence is fixed by the
// standard; the distributions below are written out so that draws are
// identical on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound), bound > 0. Lemire's multiply-and-reject.
  std::uint64_t uniform_below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = -bound % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  int die() { return 1 + static_cast<int>(uniform_below(6)); }

  // [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Standard normal via the Marsaglia polar method (no cached second value,
  // so every call consumes a whole number of draws from the same state).
  double normal() {
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mcr
