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

// JSON forms of models, spin vectors and solver configurations.
//
//   {"type": "ising", "n": 3, "J": [[...], ...], "h": [...], "offset": 0}
//   {"type": "qubo",  "n": 3, "Q": [[...], ...], "offset": 0}
//
// "h" and "offset" are optional on input.

#include <string>
#include <vector>

#include "json.hpp"
#include "sbm/error.hpp"
#include "sbm/ising_model.hpp"
#include "sbm/solver_config.hpp"

namespace sbm {

using Json = nlohmann::json;

namespace detail {

inline Json matrix_to_json(std::size_t n, std::span<const double> m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back(std::vector<double>(m.begin() + static_cast<std::ptrdiff_t>(i * n),
                                       m.begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
  }
  return rows;
}

inline std::vector<double> matrix_from_json(const Json& j, std::size_t n, const char* name) {
  if (!j.is_array() || j.size() != n) {
    throw ParseError(std::string(name) + " must be an array of " + std::to_string(n) + " rows");
  }
  std::vector<double> out;
  out.reserve(n * n);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != n) {
      throw ParseError(std::string(name) + " rows must have " + std::to_string(n) + " entries");
    }
    for (const auto& v : row) out.push_back(v.get<double>());
  }
  return out;
}

inline Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace detail

inline Json to_json(const IsingModel& m) {
  return Json{{"type", "ising"},
              {"n", m.size()},
              {"J", detail::matrix_to_json(m.size(), m.couplings())},
              {"h", std::vector<double>(m.fields().begin(), m.fields().end())},
              {"offset", m.offset()}};
}

inline Json to_json(const QuboModel& q) {
  return Json{{"type", "qubo"}, {"n", q.n}, {"Q", detail::matrix_to_json(q.n, q.q)},
              {"offset", q.offset}};
}

inline bool is_qubo_json(const Json& j) { return j.value("type", std::string("ising")) == "qubo"; }

inline IsingModel ising_from_json(const Json& j) {
  try {
    if (is_qubo_json(j)) throw ParseError("expected an Ising model, found a QUBO");
    const auto n = j.at("n").get<std::size_t>();
    auto couplings = detail::matrix_from_json(j.at("J"), n, "J");
    std::vector<double> h;
    if (j.contains("h")) h = j.at("h").get<std::vector<double>>();
    if (!h.empty() && h.size() != n) throw ParseError("h must have n entries");
    return IsingModel::from_dense(n, std::move(couplings), std::move(h), j.value("offset", 0.0));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed Ising model: ") + e.what());
  }
}

inline QuboModel qubo_from_json(const Json& j) {
  try {
    if (!is_qubo_json(j)) throw ParseError("expected a QUBO model");
    QuboModel q;
    q.n = j.at("n").get<std::size_t>();
    q.q = detail::matrix_from_json(j.at("Q"), q.n, "Q");
    q.offset = j.value("offset", 0.0);
    q.validate();
    return q;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed QUBO model: ") + e.what());
  }
}

inline IsingModel parse_ising_json(std::string_view text) {
  return ising_from_json(detail::parse_json(text));
}

inline QuboModel parse_qubo_json(std::string_view text) {
  return qubo_from_json(detail::parse_json(text));
}

inline Json to_json(const SpinVector& s) { return std::vector<int>(s.begin(), s.end()); }

inline Json to_json(const FixedFormat& f) {
  return Json{{"total_bits", f.total_bits}, {"frac_bits", f.frac_bits}};
}

inline FixedFormat fixed_format_from_json(const Json& j) {
  return FixedFormat{j.at("total_bits").get<int>(), j.at("frac_bits").get<int>()};
}

inline Json to_json(const SolverConfig& c) {
  Json fixed{{"j_bits", c.fixed.j_bits}, {"c0_significant_bits", c.fixed.c0_significant_bits}};
  if (c.fixed.x_format) fixed["x_format"] = to_json(*c.fixed.x_format);
  if (c.fixed.y_format) fixed["y_format"] = to_json(*c.fixed.y_format);
  Json j{{"variant", std::string(to_string(c.variant))},
         {"heated", c.heated},
         {"dt", c.dt},
         {"a0", c.a0},
         {"n_steps", c.n_steps},
         {"gamma", c.gamma},
         {"seed", c.seed},
         {"n_runs", c.n_runs},
         {"init_range", c.init_range},
         {"backend", std::string(to_string(c.backend))},
         {"fixed", fixed},
         {"parallel", {{"pr", c.parallel.pr}, {"pc", c.parallel.pc}, {"pb", c.parallel.pb}}},
         {"record_trajectory", c.record_trajectory}};
  j["c0"] = c.c0 ? Json(*c.c0) : Json(nullptr);
  return j;
}

inline Variant parse_variant(std::string_view s) {
  if (s == "discrete" || s == "dsb") return Variant::Discrete;
  if (s == "ballistic" || s == "bsb") return Variant::Ballistic;
  throw InvalidArgument("unknown variant '" + std::string(s) + "'");
}

inline Backend parse_backend(std::string_view s) {
  if (s == "float64" || s == "float") return Backend::Float64;
  if (s == "fixed") return Backend::Fixed;
  throw InvalidArgument("unknown backend '" + std::string(s) + "'");
}

/// Inverse of to_json(SolverConfig). Missing keys keep their defaults;
/// the thread count is not part of the echo since results do not depend on it.
inline SolverConfig config_from_json(const Json& j) {
  try {
    SolverConfig c;
    if (j.contains("variant")) c.variant = parse_variant(j.at("variant").get<std::string>());
    c.heated = j.value("heated", c.heated);
    c.dt = j.value("dt", c.dt);
    c.a0 = j.value("a0", c.a0);
    c.n_steps = j.value("n_steps", c.n_steps);
    c.gamma = j.value("gamma", c.gamma);
    if (j.contains("c0") && !j.at("c0").is_null()) c.c0 = j.at("c0").get<double>();
    c.seed = j.value("seed", c.seed);
    c.n_runs = j.value("n_runs", c.n_runs);
    c.init_range = j.value("init_range", c.init_range);
    if (j.contains("backend")) c.backend = parse_backend(j.at("backend").get<std::string>());
    if (j.contains("fixed")) {
      const auto& f = j.at("fixed");
      c.fixed.j_bits = f.value("j_bits", c.fixed.j_bits);
      c.fixed.c0_significant_bits = f.value("c0_significant_bits", c.fixed.c0_significant_bits);
      if (f.contains("x_format")) c.fixed.x_format = fixed_format_from_json(f.at("x_format"));
      if (f.contains("y_format")) c.fixed.y_format = fixed_format_from_json(f.at("y_format"));
    }
    if (j.contains("parallel")) {
      const auto& p = j.at("parallel");
      c.parallel.pr = p.value("pr", c.parallel.pr);
      c.parallel.pc = p.value("pc", c.parallel.pc);
      c.parallel.pb = p.value("pb", c.parallel.pb);
    }
    c.record_trajectory = j.value("record_trajectory", c.record_trajectory);
    return c;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed solver config: ") + e.what());
  }
}

}  // namespace sbm
