#pragma once

// Weights file, version bgw1:
//
//   bgw1
//   encoding <id>
//   length <n>                       (feature count + 1 for the bias)
//   provenance seed=<s> episodes=<e> alpha=<a> lambda=<l> noise_std=<x>
//   <w_0>
//   ...
//   <w_{n-1}>                        (bias last)
//
// Weights are written in shortest round-trip decimal, LF line endings.

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcr/eval/evaluator.hpp"
#include "mcr/text_util.hpp"

namespace mcr::eval {

class WeightsParseError : public std::runtime_error {
 public:
  WeightsParseError(std::size_t line, const std::string& what)
      : std::runtime_error("parse-error: weights line " + std::to_string(line) + ": " + what) {}
};

class VersionMismatch : public std::runtime_error {
 public:
  explicit VersionMismatch(const std::string& found)
      : std::runtime_error("version-mismatch: expected 'bgw1', found '" + found + "'") {}
};

inline void write_weights(std::ostream& os, const LinearEvaluator& e) {
  const auto& p = e.provenance();
  os << "bgw1\n"
     << "encoding " << to_string(e.encoding()) << '\n'
     << "length " << e.weights().size() << '\n'
     << "provenance seed=" << p.seed << " episodes=" << p.episodes << " alpha=" << format_double(p.alpha)
     << " lambda=" << format_double(p.lambda) << " noise_std=" << format_double(p.noise_std) << '\n';
  for (double w : e.weights()) os << format_double(w) << '\n';
}

[[nodiscard]] inline LinearEvaluator read_weights(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  auto next = [&](const char* what) {
    if (!std::getline(is, line)) throw WeightsParseError(lineno + 1, std::string("missing ") + what);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return std::string_view(line);
  };

  const auto magic = next("version tag");
  if (magic != "bgw1") {
    if (magic.rfind("bgw", 0) == 0) throw VersionMismatch(std::string(magic));
    throw WeightsParseError(lineno, "not a weights file");
  }

  auto enc_line = next("encoding");
  if (enc_line.rfind("encoding ", 0) != 0) throw WeightsParseError(lineno, "expected 'encoding <id>'");
  const Encoding encoding = parse_encoding(enc_line.substr(9));

  auto len_line = next("length");
  std::size_t length = 0;
  if (len_line.rfind("length ", 0) != 0 || !parse_int(len_line.substr(7), length)) {
    throw WeightsParseError(lineno, "expected 'length <n>'");
  }
  if (length != feature_count(encoding) + 1) throw DimensionMismatch(feature_count(encoding) + 1, length);

  Provenance prov;
  auto prov_line = next("provenance");
  if (prov_line.rfind("provenance", 0) != 0) throw WeightsParseError(lineno, "expected 'provenance ...'");
  {
    std::istringstream fields{std::string(prov_line.substr(10))};
    std::string kv;
    while (fields >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw WeightsParseError(lineno, "bad provenance field '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      const std::string_view val = std::string_view(kv).substr(eq + 1);
      bool ok = true;
      if (key == "seed") ok = parse_int(val, prov.seed);
      else if (key == "episodes") ok = parse_int(val, prov.episodes);
      else if (key == "alpha") ok = parse_double(val, prov.alpha);
      else if (key == "lambda") ok = parse_double(val, prov.lambda);
      else if (key == "noise_std") ok = parse_double(val, prov.noise_std);
      if (!ok) throw WeightsParseError(lineno, "bad value for '" + key + "'");
    }
  }

  std::vector<double> weights;
  weights.reserve(length);
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double v = 0.0;
    if (!parse_double(line, v)) throw WeightsParseError(lineno, "not a number: '" + line + "'");
    weights.push_back(v);
  }
  if (weights.size() != length) throw DimensionMismatch(length, weights.size());
  return LinearEvaluator(encoding, std::move(weights), prov);
}

inline void save_weights(const std::string& path, const LinearEvaluator& e) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write weights file '" + path + "'");
  write_weights(os, e);
  if (!os) throw std::runtime_error("error writing weights file '" + path + "'");
}

[[nodiscard]] inline LinearEvaluator load_weights(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open weights file '" + path + "'");
  return read_weights(is);
}

}  // namespace mcr::eval
