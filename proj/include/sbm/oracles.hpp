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

// Reference solvers: exhaustive search, simulated annealing and the knapsack
// dynamic program.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sbm/encoders.hpp"
#include "sbm/error.hpp"
#include "sbm/ising_model.hpp"

namespace sbm {

struct GroundState {
  SpinVector spins;
  double energy = 0.0;
};

/// Exhaustive minimum over all 2^n spin vectors, n <= 24. Ties go to the
/// lexicographically smallest vector (-1 < +1, spin 0 most significant).
inline GroundState brute_force_ground_state(const IsingModel& model) {
  const std::size_t n = model.size();
  if (n > 24) throw InvalidArgument("brute force is limited to 24 spins, got " + std::to_string(n));

  // Gray-code walk with incremental energies; codes map to spins through
  // SpinVector::from_code so that the code order is the lexicographic order.
  std::vector<std::int8_t> s(n, -1);
  std::vector<double> local(n, 0.0);  // sum_j J_ij s_j + h_i
  for (std::size_t i = 0; i < n; ++i) {
    double acc = model.field(i);
    for (std::size_t j = 0; j < n; ++j) acc += model.coupling(i, j) * s[j];
    local[i] = acc;
  }
  SpinVector start = SpinVector::filled(n, -1);
  double e = energy(model, start);
  double best_e = e;
  std::uint64_t best_code = 0;

  double scale = std::abs(model.offset());
  for (double v : model.couplings()) scale += 0.5 * std::abs(v);
  for (double v : model.fields()) scale += std::abs(v);
  const double tie_tol = 1e-9 * (1.0 + scale);
  double best_exact = e;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const std::uint64_t gray = k ^ (k >> 1);
    const auto bit = static_cast<std::size_t>(std::countr_zero(k));
    const std::size_t i = n - 1 - bit;  // bit b of the code is spin n-1-b
    // Flipping s_i changes H by 2 s_i (sum_j J_ij s_j + h_i).
    e += 2.0 * s[i] * local[i];
    const double delta = -2.0 * s[i];
    s[i] = static_cast<std::int8_t>(-s[i]);
    for (std::size_t j = 0; j < n; ++j) local[j] += model.coupling(j, i) * delta;

    if (e < best_e - tie_tol) {
      best_e = e;
      best_code = gray;
      best_exact = energy(model, SpinVector::from_code(gray, n));
    } else if (e <= best_e + tie_tol) {
      // Near tie: settle it with exact evaluations.
      const double exact = energy(model, SpinVector::from_code(gray, n));
      if (exact < best_exact || (exact == best_exact && gray < best_code)) {
        best_e = exact;
        best_code = gray;
        best_exact = exact;
      }
    }
  }
  GroundState g{SpinVector::from_code(best_code, n), 0.0};
  g.energy = energy(model, g.spins);
  return g;
}

struct AnnealSchedule {
  double t_start = 10.0;
  double t_end = 0.01;
  std::size_t sweeps = 1000;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(t_end > 0.0) || !(t_start >= t_end)) {
      throw InvalidArgument("anneal schedule needs t_start >= t_end > 0");
    }
    if (sweeps == 0) throw InvalidArgument("anneal schedule needs at least one sweep");
  }
};

/// Schedule scaled to the model: starts at 2 sigma sqrt(n), the typical local
/// field magnitude, and cools by three orders of magnitude.
inline AnnealSchedule default_schedule(const IsingModel& model, std::size_t sweeps,
                                       std::uint64_t seed) {
  const std::size_t n = model.size();
  double ss = 0.0;
  for (double v : model.couplings()) ss += v * v;
  for (double v : model.fields()) ss += v * v;
  const double rms = std::sqrt(ss / static_cast<double>(n * n));
  double t0 = 2.0 * rms * std::sqrt(static_cast<double>(n));
  if (!(t0 > 0.0)) t0 = 1.0;
  return AnnealSchedule{t0, t0 * 1e-3, sweeps, seed};
}

/// Single-flip Metropolis with geometric cooling from t_start to t_end over
/// `sweeps` full passes. Returns the best state visited.
inline GroundState simulated_annealing(const IsingModel& model, const AnnealSchedule& schedule) {
  schedule.validate();
  const std::size_t n = model.size();
  std::mt19937_64 rng(schedule.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::int8_t> s(n);
  for (auto& v : s) v = (rng() & 1U) ? 1 : -1;
  std::vector<double> local(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = model.field(i);
    const auto row = model.row(i);
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * s[j];
    local[i] = acc;
  }
  double e = energy(model, SpinVector(s));
  double best_e = e;
  std::vector<std::int8_t> best = s;

  const double ratio = schedule.sweeps > 1
                           ? std::pow(schedule.t_end / schedule.t_start,
                                      1.0 / static_cast<double>(schedule.sweeps - 1))
                           : 1.0;
  double t = schedule.t_start;
  for (std::size_t sweep = 0; sweep < schedule.sweeps; ++sweep) {
    const double beta = 1.0 / t;
    for (std::size_t i = 0; i < n; ++i) {
      const double de = 2.0 * s[i] * local[i];
      if (de <= 0.0 || unit(rng) < std::exp(-de * beta)) {
        const double delta = -2.0 * s[i];
        s[i] = static_cast<std::int8_t>(-s[i]);
        e += de;
        const auto col = model.row(i);  // symmetric: column i == row i
        for (std::size_t j = 0; j < n; ++j) local[j] += col[j] * delta;
        if (e < best_e) {
          best_e = e;
          best = s;
        }
      }
    }
    t *= ratio;
  }
  GroundState g{SpinVector(std::move(best)), 0.0};
  g.energy = energy(model, g.spins);
  return g;
}

struct KnapsackOptimum {
  double optimal_value = 0.0;
  std::vector<std::size_t> selected;  // ascending item indices
};

/// O(n W) dynamic program over integer weights.
inline KnapsackOptimum knapsack_dp(const KnapsackInstance& inst) {
  inst.validate();
  inst.require_integer_weights();
  const std::size_t n = inst.size();
  const auto cap = static_cast<std::size_t>(inst.capacity);
  if (static_cast<double>(cap + 1) * static_cast<double>(n + 1) > 4e8) {
    throw InvalidArgument("knapsack DP table would exceed the memory budget");
  }
  // best[k][c]: best value using items < k with capacity c.
  std::vector<double> best((n + 1) * (cap + 1), 0.0);
  auto at = [&](std::size_t k, std::size_t c) -> double& { return best[k * (cap + 1) + c]; };
  for (std::size_t k = 1; k <= n; ++k) {
    const auto w = static_cast<std::size_t>(inst.weights[k - 1]);
    const double v = inst.values[k - 1];
    for (std::size_t c = 0; c <= cap; ++c) {
      at(k, c) = at(k - 1, c);
      if (w <= c) at(k, c) = std::max(at(k, c), at(k - 1, c - w) + v);
    }
  }
  KnapsackOptimum out;
  out.optimal_value = at(n, cap);
  std::size_t c = cap;
  for (std::size_t k = n; k >= 1; --k) {
    if (at(k, c) != at(k - 1, c)) {
      out.selected.push_back(k - 1);
      c -= static_cast<std::size_t>(inst.weights[k - 1]);
    }
  }
  std::reverse(out.selected.begin(), out.selected.end());
  return out;
}

}  // namespace sbm
