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

// Max-cut and 0/1 knapsack encoders.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "sbm/error.hpp"
#include "sbm/ising_model.hpp"

namespace sbm {

struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  double w = 1.0;
};

struct MaxCutInstance {
  std::size_t n = 0;
  std::vector<Edge> edges;

  void validate() const {
    if (n == 0) throw InvalidArgument("max-cut instance has no nodes");
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : edges) {
      if (e.i >= n || e.j >= n) {
        throw InvalidArgument("edge (" + std::to_string(e.i) + ", " +
                              std::to_string(e.j) + ") references a node >= " +
                              std::to_string(n));
      }
      if (e.i == e.j) {
        throw InvalidArgument("self loop on node " + std::to_string(e.i));
      }
      if (!std::isfinite(e.w)) throw InvalidArgument("edge weight is not finite");
      if (!seen.insert(std::minmax(e.i, e.j)).second) {
        throw InvalidArgument("duplicate edge (" + std::to_string(e.i) + ", " +
                              std::to_string(e.j) + ")");
      }
    }
  }

  double total_weight() const {
    double t = 0.0;
    for (const auto& e : edges) t += e.w;
    return t;
  }
};

struct KnapsackInstance {
  std::vector<double> values;
  std::vector<double> weights;
  double capacity = 0.0;
  std::optional<double> known_optimum;  // from instance metadata, if any

  std::size_t size() const { return values.size(); }

  void validate() const {
    detail::require_size(weights.size(), values.size(), "knapsack weights");
    if (values.empty()) throw InvalidArgument("knapsack instance has no items");
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (!(values[k] > 0.0) || !std::isfinite(values[k])) {
        throw InvalidArgument("item " + std::to_string(k) + " value must be positive");
      }
      if (!(weights[k] > 0.0) || !std::isfinite(weights[k])) {
        throw InvalidArgument("item " + std::to_string(k) + " weight must be positive");
      }
    }
    if (!(capacity > 0.0) || !std::isfinite(capacity)) {
      throw InvalidArgument("knapsack capacity must be positive");
    }
  }

  void require_integer_weights() const {
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (weights[k] != std::floor(weights[k])) {
        throw InvalidArgument("item " + std::to_string(k) +
                              " weight is not an integer");
      }
    }
    if (capacity != std::floor(capacity)) {
      throw InvalidArgument("knapsack capacity is not an integer");
    }
  }
};

enum class SpinRole { Node, Item, Slack, Ancilla };

struct SpinTag {
  SpinRole role = SpinRole::Node;
  std::size_t index = 0;  // node, item or slack bit number

  friend bool operator==(const SpinTag&, const SpinTag&) = default;
};

enum class ObjectiveSense { Minimize, Maximize };

/// An Ising model together with the bookkeeping needed to read spins back as
/// a problem-level solution.
struct Encoding {
  IsingModel model;
  std::vector<SpinTag> var_map;
  double penalty = 0.0;
  ObjectiveSense sense = ObjectiveSense::Maximize;
  std::variant<MaxCutInstance, KnapsackInstance> problem;
  // energy(model, s) == energy_per_objective * objective(s) + energy_constant
  // whenever the objective is an affine function of the energy (max-cut).
  double energy_per_objective = 0.0;
  double energy_constant = 0.0;

  std::optional<std::size_t> ancilla() const {
    for (std::size_t k = 0; k < var_map.size(); ++k) {
      if (var_map[k].role == SpinRole::Ancilla) return k;
    }
    return std::nullopt;
  }
};

/// C(s) = sum over undirected edges of w (1 - s_i s_j) / 2.
inline double cut_value(const MaxCutInstance& g, const SpinVector& spins) {
  detail::require_size(spins.size(), g.n, "spin vector");
  double cut = 0.0;
  for (const auto& e : g.edges) {
    if (spins[e.i] != spins[e.j]) cut += e.w;
  }
  return cut;
}

/// J_ij = J_ji = -2 w_ij, h = 0, offset = -2 sum(w).
///
/// Then energy(s) = 2 sum_e w (s_i s_j - 1) = -4 cut(s): minimizing the energy
/// maximizes the cut.
inline Encoding encode_maxcut(const MaxCutInstance& g) {
  g.validate();
  const std::size_t n = g.n;
  std::vector<double> j(n * n, 0.0);
  for (const auto& e : g.edges) {
    j[e.i * n + e.j] += -2.0 * e.w;
    j[e.j * n + e.i] += -2.0 * e.w;
  }
  Encoding enc{IsingModel::from_dense(n, std::move(j), {}, -2.0 * g.total_weight()),
               {},
               0.0,
               ObjectiveSense::Maximize,
               g,
               -4.0,
               0.0};
  enc.var_map.reserve(n);
  for (std::size_t v = 0; v < n; ++v) enc.var_map.push_back({SpinRole::Node, v});
  return enc;
}

/// Penalty used when the caller does not pick one.
inline double default_penalty(const KnapsackInstance& inst) {
  return 2.0 * *std::max_element(inst.values.begin(), inst.values.end());
}

/// Number of slack bits: floor(log2(W)) + 1, covering slack values 0..2^m-1.
inline std::size_t slack_bits(double capacity) {
  return static_cast<std::size_t>(
      std::bit_width(static_cast<std::uint64_t>(capacity)));
}

/// H = -sum_i c_i q_i + lambda (sum_b 2^b y_b + sum_i w_i q_i - W)^2 with
/// q = (1 + s) / 2, then the field is folded into an ancilla spin.
///
/// Spin order: items 0..n-1, slack bits 0..m-1, ancilla last.
inline Encoding encode_knapsack(const KnapsackInstance& inst, double lambda) {
  inst.validate();
  inst.require_integer_weights();
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("knapsack penalty must be positive");
  }
  const std::size_t items = inst.size();
  const std::size_t bits = slack_bits(inst.capacity);
  const std::size_t n = items + bits;

  std::vector<double> coeff(n);
  for (std::size_t k = 0; k < items; ++k) coeff[k] = inst.weights[k];
  for (std::size_t b = 0; b < bits; ++b) coeff[items + b] = std::ldexp(1.0, static_cast<int>(b));

  const double cap = inst.capacity;
  QuboModel qubo = QuboModel::zero(n);
  for (std::size_t k = 0; k < n; ++k) {
    // q_k^2 = q_k folds the square's diagonal into the linear term.
    qubo.at(k, k) += lambda * (coeff[k] * coeff[k] - 2.0 * cap * coeff[k]);
    for (std::size_t l = k + 1; l < n; ++l) {
      qubo.at(k, l) += 2.0 * lambda * coeff[k] * coeff[l];
    }
  }
  for (std::size_t k = 0; k < items; ++k) qubo.at(k, k) -= inst.values[k];
  qubo.offset = lambda * cap * cap;

  Encoding enc{embed_field(qubo_to_ising(qubo)),
               {},
               lambda,
               ObjectiveSense::Maximize,
               inst,
               0.0,
               0.0};
  enc.var_map.reserve(n + 1);
  for (std::size_t k = 0; k < items; ++k) enc.var_map.push_back({SpinRole::Item, k});
  for (std::size_t b = 0; b < bits; ++b) enc.var_map.push_back({SpinRole::Slack, b});
  enc.var_map.push_back({SpinRole::Ancilla, 0});
  return enc;
}

struct KnapsackSolution {
  std::vector<std::size_t> selected;
  double total_value = 0.0;
  double total_weight = 0.0;
  bool feasible = true;
};

/// Item k is selected iff its spin is +1. Slack and ancilla spins are ignored.
inline KnapsackSolution decode_knapsack(const Encoding& enc, const SpinVector& spins) {
  const auto* inst = std::get_if<KnapsackInstance>(&enc.problem);
  if (inst == nullptr) throw InvalidArgument("encoding is not a knapsack encoding");
  detail::require_size(spins.size(), enc.model.size(), "spin vector");
  KnapsackSolution sol;
  for (std::size_t k = 0; k < enc.var_map.size(); ++k) {
    const auto& tag = enc.var_map[k];
    if (tag.role != SpinRole::Item || spins[k] < 0) continue;
    sol.selected.push_back(tag.index);
    sol.total_value += inst->values[tag.index];
    sol.total_weight += inst->weights[tag.index];
  }
  sol.feasible = sol.total_weight <= inst->capacity;
  return sol;
}

/// Problem-level objective of a spin vector under an encoding: the cut for
/// max-cut, the value of a feasible selection (0 if infeasible) for knapsack.
inline double objective_value(const Encoding& enc, const SpinVector& spins) {
  if (const auto* g = std::get_if<MaxCutInstance>(&enc.problem)) {
    detail::require_size(spins.size(), enc.model.size(), "spin vector");
    return cut_value(*g, spins);
  }
  const auto sol = decode_knapsack(enc, spins);
  return sol.feasible ? sol.total_value : 0.0;
}

}  // namespace sbm
