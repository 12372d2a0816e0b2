#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mcr/backgammon/board.hpp"
#include "mcr/backgammon/shots.hpp"

namespace mcr::eval {

using bg::Board;
using bg::Side;

// raw52:    own and opponent counts on the 24 points (in the perspective
//           player's numbering), then own bar, opponent bar, own off,
//           opponent off; all divided by 15.
// rawhit54: raw52 plus own and opponent blot exposure, each the sum over
//           that side's blots of shot_rolls / 36.
enum class Encoding { raw52, rawhit54 };

inline constexpr std::size_t kMaxFeatures = 54;

class UnknownEncoding : public std::invalid_argument {
 public:
  explicit UnknownEncoding(std::string_view id)
      : std::invalid_argument("unknown-encoding: '" + std::string(id) + "'") {}
};

[[nodiscard]] constexpr std::size_t feature_count(Encoding e) noexcept {
  return e == Encoding::raw52 ? 52 : 54;
}

[[nodiscard]] constexpr std::string_view to_string(Encoding e) noexcept {
  return e == Encoding::raw52 ? "raw52" : "rawhit54";
}

[[nodiscard]] inline Encoding parse_encoding(std::string_view id) {
  if (id == "raw52") return Encoding::raw52;
  if (id == "rawhit54") return Encoding::rawhit54;
  throw UnknownEncoding(id);
}

struct FeatureVector {
  std::vector<double> values;
  Encoding encoding = Encoding::raw52;
  Side perspective = Side::white;
};

// Summed shot_rolls/36 over the blots of `owner`.
[[nodiscard]] inline double blot_exposure(const Board& b, Side owner) {
  return bg::total_shot_rolls(b, owner) / 36.0;
}

// `out` must hold feature_count(encoding) values. `b` is read as an
// afterstate of `perspective`, the player who just moved.
inline void encode_into(const Board& b, Side perspective, Encoding encoding, std::span<double> out) {
  constexpr double kScale = 1.0 / bg::kCheckers;
  const Side opp = bg::opponent(perspective);
  for (int d = 1; d <= bg::kPoints; ++d) {
    const int v = b.at(bg::point_of(perspective, d)) * bg::sign(perspective);
    out[d - 1] = v > 0 ? v * kScale : 0.0;
    out[bg::kPoints + d - 1] = v < 0 ? -v * kScale : 0.0;
  }
  out[48] = b.bar[bg::index(perspective)] * kScale;
  out[49] = b.bar[bg::index(opp)] * kScale;
  out[50] = b.off[bg::index(perspective)] * kScale;
  out[51] = b.off[bg::index(opp)] * kScale;
  if (encoding == Encoding::rawhit54) {
    out[52] = blot_exposure(b, perspective);
    out[53] = blot_exposure(b, opp);
  }
}

[[nodiscard]] inline FeatureVector encode_features(const Board& b, Side perspective, Encoding encoding) {
  FeatureVector f;
  f.encoding = encoding;
  f.perspective = perspective;
  f.values.resize(feature_count(encoding));
  encode_into(b, perspective, encoding, f.values);
  return f;
}

}  // namespace mcr::eval
