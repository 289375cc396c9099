// Copyright 2026 The sbm Authors.
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

// Text instance formats and instance generators.
//
// G-Set:     "<n> <m>" then m lines "<i> <j> <w>", 1-based nodes.
// Knapsack:  "<n> <W>" then n lines "<value> <weight>".
//
// Lines starting with '%' or '#' are comments anywhere in a file. A comment
// of the form "optimum <v>" in a knapsack file records the known optimum.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sbm/encoders.hpp"
#include "sbm/error.hpp"

namespace sbm {

namespace detail {

struct Line {
  std::size_t number = 0;
  std::vector<std::string_view> fields;
};

inline bool is_comment(std::string_view line) {
  const auto p = line.find_first_not_of(" \t\r");
  return p != std::string_view::npos && (line[p] == '%' || line[p] == '#');
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t p = 0;
  while (p < line.size()) {
    while (p < line.size() && (line[p] == ' ' || line[p] == '\t' || line[p] == '\r' ||
                               line[p] == ',')) {
      ++p;
    }
    const std::size_t start = p;
    while (p < line.size() && line[p] != ' ' && line[p] != '\t' && line[p] != '\r' &&
           line[p] != ',') {
      ++p;
    }
    if (p > start) out.push_back(line.substr(start, p - start));
  }
  return out;
}

/// Non-empty, non-comment lines split into fields; comments go to `comments`.
inline std::vector<Line> data_lines(std::string_view text,
                                    std::vector<std::string_view>* comments = nullptr) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    ++number;
    if (is_comment(line)) {
      if (comments) comments->push_back(line);
    } else {
      auto fields = split_fields(line);
      if (!fields.empty()) out.push_back({number, std::move(fields)});
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

inline double parse_number(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    parse_fail(line, "'" + std::string(s) + "' is not a number");
  }
  return v;
}

inline std::int64_t parse_integer(std::string_view s, std::size_t line, bool lenient = false) {
  std::int64_t v = 0;
  const auto* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec == std::errc() && ptr == s.data() + s.size()) return v;
  if (lenient) {
    const double d = parse_number(s, line);
    if (d == std::floor(d) && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
  }
  parse_fail(line, "'" + std::string(s) + "' is not an integer");
}

inline std::string format_number(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    return std::to_string(static_cast<std::int64_t>(v));
  }
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace detail

inline MaxCutInstance parse_gset(std::string_view text) {
  const auto lines = detail::data_lines(text);
  if (lines.empty()) throw ParseError("empty G-Set file");
  const auto& head = lines.front();
  if (head.fields.size() != 2) detail::parse_fail(head.number, "expected '<n_nodes> <n_edges>'");
  const auto n = detail::parse_integer(head.fields[0], head.number);
  const auto m = detail::parse_integer(head.fields[1], head.number);
  if (n <= 0 || m < 0) detail::parse_fail(head.number, "node count must be positive");

  MaxCutInstance g;
  g.n = static_cast<std::size_t>(n);
  g.edges.reserve(static_cast<std::size_t>(m));
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& l = lines[k];
    if (l.fields.size() != 3) detail::parse_fail(l.number, "expected '<i> <j> <w>'");
    const auto i = detail::parse_integer(l.fields[0], l.number);
    const auto j = detail::parse_integer(l.fields[1], l.number);
    const double w = detail::parse_number(l.fields[2], l.number);
    if (i < 1 || i > n || j < 1 || j > n) detail::parse_fail(l.number, "node index out of range");
    if (i == j) detail::parse_fail(l.number, "self loop");
    const auto a = static_cast<std::size_t>(i - 1);
    const auto b = static_cast<std::size_t>(j - 1);
    if (!seen.insert(std::minmax(a, b)).second) detail::parse_fail(l.number, "duplicate edge");
    g.edges.push_back({a, b, w});
  }
  if (static_cast<std::int64_t>(g.edges.size()) != m) {
    throw ParseError("header declares " + std::to_string(m) + " edges, found " +
                     std::to_string(g.edges.size()));
  }
  return g;
}

inline std::string serialize_gset(const MaxCutInstance& g) {
  std::string out = std::to_string(g.n) + " " + std::to_string(g.edges.size()) + "\n";
  for (const auto& e : g.edges) {
    out += std::to_string(e.i + 1) + " " + std::to_string(e.j + 1) + " " +
           detail::format_number(e.w) + "\n";
  }
  return out;
}

enum class ParseMode { Strict, Lenient };

/// Strict: exactly n item lines of integers. Lenient additionally accepts
/// integral reals ("5.0") and ignores anything after the n-th item line.
inline KnapsackInstance parse_knapsack(std::string_view text, ParseMode mode = ParseMode::Strict) {
  std::vector<std::string_view> comments;
  const auto lines = detail::data_lines(text, &comments);
  const bool lenient = mode == ParseMode::Lenient;
  if (lines.empty()) throw ParseError("empty knapsack file");
  const auto& head = lines.front();
  if (head.fields.size() != 2) detail::parse_fail(head.number, "expected '<n> <capacity>'");
  const auto n = detail::parse_integer(head.fields[0], head.number, lenient);
  const auto cap = detail::parse_integer(head.fields[1], head.number, lenient);
  if (n <= 0) detail::parse_fail(head.number, "item count must be positive");
  if (cap <= 0) detail::parse_fail(head.number, "capacity must be positive");

  const std::size_t items = static_cast<std::size_t>(n);
  if (lines.size() - 1 < items) {
    throw ParseError("header declares " + std::to_string(items) + " items, found " +
                     std::to_string(lines.size() - 1));
  }
  if (!lenient && lines.size() - 1 > items) {
    detail::parse_fail(lines[items + 1].number, "unexpected data after the last item");
  }
  KnapsackInstance inst;
  inst.capacity = static_cast<double>(cap);
  for (std::size_t k = 1; k <= items; ++k) {
    const auto& l = lines[k];
    if (l.fields.size() != 2) detail::parse_fail(l.number, "expected '<value> <weight>'");
    const auto v = detail::parse_integer(l.fields[0], l.number, lenient);
    const auto w = detail::parse_integer(l.fields[1], l.number, lenient);
    if (v <= 0 || w <= 0) detail::parse_fail(l.number, "values and weights must be positive");
    inst.values.push_back(static_cast<double>(v));
    inst.weights.push_back(static_cast<double>(w));
  }
  for (auto c : comments) {
    auto f = detail::split_fields(c.substr(c.find_first_of("%#") + 1));
    if (f.size() == 2 && (f[0] == "optimum" || f[0] == "optimum:")) {
      inst.known_optimum = detail::parse_number(f[1], 0);
    }
  }
  return inst;
}

inline std::string serialize_knapsack(const KnapsackInstance& inst) {
  std::string out;
  if (inst.known_optimum) out += "# optimum " + detail::format_number(*inst.known_optimum) + "\n";
  out += std::to_string(inst.size()) + " " + detail::format_number(inst.capacity) + "\n";
  for (std::size_t k = 0; k < inst.size(); ++k) {
    out += detail::format_number(inst.values[k]) + " " + detail::format_number(inst.weights[k]) +
           "\n";
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Random max-cut instance described by its Ising couplings: every pair is an
/// edge with probability `density`, its coupling J drawn uniformly from the
/// integers [j_min, j_max]; pairs that draw J = 0 are left out. The edge
/// weight is -J / 2, matching encode_maxcut's J = -2 w.
struct RandomMaxCutSpec {
  std::size_t n = 256;
  std::int64_t j_min = -128;
  std::int64_t j_max = 0;
  double density = 1.0;
  std::uint64_t seed = 1;

  void validate() const {
    if (n < 2) throw InvalidArgument("random max-cut needs at least two nodes");
    if (j_min > j_max) throw InvalidArgument("random max-cut needs j_min <= j_max");
    if (!(density > 0.0 && density <= 1.0)) {
      throw InvalidArgument("random max-cut density must be in (0, 1]");
    }
  }
};

inline MaxCutInstance generate_maxcut(const RandomMaxCutSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::int64_t> coeff(spec.j_min, spec.j_max);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MaxCutInstance g;
  g.n = spec.n;
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = i + 1; j < spec.n; ++j) {
      if (spec.density < 1.0 && unit(rng) >= spec.density) continue;
      const std::int64_t c = coeff(rng);
      if (c != 0) g.edges.push_back({i, j, -0.5 * static_cast<double>(c)});
    }
  }
  return g;
}

/// Uncorrelated knapsack instance: values and weights uniform on
/// [1, range], capacity a fraction of the total weight (at least the largest
/// weight so every item fits on its own).
struct RandomKnapsackSpec {
  std::size_t n = 100;
  std::int64_t range = 1000;
  double capacity_fraction = 0.5;
  std::uint64_t seed = 1;
};

inline KnapsackInstance generate_knapsack(const RandomKnapsackSpec& spec) {
  if (spec.n == 0 || spec.range < 1 || !(spec.capacity_fraction > 0.0)) {
    throw InvalidArgument("invalid random knapsack spec");
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::int64_t> dist(1, spec.range);
  KnapsackInstance inst;
  double total = 0.0;
  double heaviest = 0.0;
  for (std::size_t k = 0; k < spec.n; ++k) {
    inst.values.push_back(static_cast<double>(dist(rng)));
    inst.weights.push_back(static_cast<double>(dist(rng)));
    total += inst.weights.back();
    heaviest = std::max(heaviest, inst.weights.back());
  }
  inst.capacity = std::max(heaviest, std::floor(spec.capacity_fraction * total));
  return inst;
}

}  // namespace sbm
