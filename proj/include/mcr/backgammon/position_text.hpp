#pragma once

// Canonical one-line position format:
//
//   bg1 <p1> ... <p24> <white-bar> <black-bar> <white-off> <black-off> <W|B>
//
// p_i is signed (positive White, negative Black, 0 empty), points numbered
// from White's side. Fields are separated by single spaces with no trailing
// space.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mcr/backgammon/board.hpp"
#include "mcr/text_util.hpp"

namespace mcr::bg {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : std::runtime_error("parse-error at character " + std::to_string(position) + ": " + what),
        position_(position) {}
  [[nodiscard]] std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

namespace detail {
// Only the spelling std::to_string produces: no '+', no leading zeros, no "-0".
inline bool parse_canonical_int(std::string_view s, int& out) {
  std::string_view digits = s.front() == '-' ? s.substr(1) : s;
  if (digits.empty() || digits.size() > 2) return false;
  if (digits.size() > 1 && digits.front() == '0') return false;
  if (s.front() == '-' && digits == "0") return false;
  for (char c : digits)
    if (c < '0' || c > '9') return false;
  return parse_int(s, out);
}
}  // namespace detail

[[nodiscard]] inline std::string format_position(const Board& b) {
  std::string out = "bg1";
  for (int p = 1; p <= kPoints; ++p) {
    out += ' ';
    out += std::to_string(b.at(p));
  }
  for (int v : {int{b.bar[0]}, int{b.bar[1]}, int{b.off[0]}, int{b.off[1]}}) {
    out += ' ';
    out += std::to_string(v);
  }
  out += b.to_move == Side::white ? " W" : " B";
  return out;
}

// Throws ParseError for malformed text and InvalidBoard when the fields
// parse but describe an impossible position.
[[nodiscard]] inline Board parse_position(std::string_view text) {
  if (!text.empty() && text.back() == '\n') text.remove_suffix(1);
  const auto fields = split_spaces(text);
  constexpr std::size_t kFields = 1 + kPoints + 4 + 1;

  auto field_error = [&](std::size_t i, const std::string& what) {
    std::size_t pos = 0;
    for (std::size_t j = 0; j < i && j < fields.size(); ++j) pos += fields[j].size() + 1;
    return ParseError(pos, what);
  };

  if (fields.empty() || fields[0] != "bg1") throw ParseError(0, "expected 'bg1' tag");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].empty()) throw field_error(i, "empty field (extra space?)");
  }
  if (fields.size() != kFields) {
    throw field_error(std::min(fields.size(), kFields),
                      "expected " + std::to_string(kFields) + " fields, got " + std::to_string(fields.size()));
  }

  Board b;
  for (int p = 1; p <= kPoints; ++p) {
    int v = 0;
    if (!detail::parse_canonical_int(fields[p], v)) throw field_error(p, "point " + std::to_string(p) + " is not an integer");
    if (v < -kCheckers || v > kCheckers) throw InvalidBoard("point " + std::to_string(p) + " out of range");
    b.points[p - 1] = static_cast<std::int8_t>(v);
  }
  static constexpr const char* names[4] = {"White bar", "Black bar", "White off", "Black off"};
  for (int i = 0; i < 4; ++i) {
    int v = 0;
    const std::size_t f = kPoints + 1 + i;
    if (!detail::parse_canonical_int(fields[f], v)) throw field_error(f, std::string(names[i]) + " is not an integer");
    if (v < 0 || v > kCheckers) throw InvalidBoard(std::string(names[i]) + " out of range");
    (i < 2 ? b.bar[i] : b.off[i - 2]) = static_cast<std::uint8_t>(v);
  }
  const auto side = fields[kFields - 1];
  if (side == "W") {
    b.to_move = Side::white;
  } else if (side == "B") {
    b.to_move = Side::black;
  } else {
    throw field_error(kFields - 1, "side to move must be W or B");
  }
  validate(b);
  return b;
}

}  // namespace mcr::bg
