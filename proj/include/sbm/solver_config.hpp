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

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sbm/cost_model.hpp"
#include "sbm/error.hpp"
#include "sbm/int128.hpp"
#include "sbm/ising_model.hpp"

namespace sbm {

enum class Variant { Ballistic, Discrete };
enum class Backend { Float64, Fixed };

inline std::string_view to_string(Variant v) {
  return v == Variant::Ballistic ? "ballistic" : "discrete";
}
inline std::string_view to_string(Backend b) {
  return b == Backend::Float64 ? "float64" : "fixed";
}

/// Step size that worked best for each variant on max-cut.
inline double default_dt(Variant v) { return v == Variant::Discrete ? 1.0 : 0.5; }

/// Two's complement fixed-point word: total_bits including the sign,
/// frac_bits of them fractional. Arithmetic always saturates.
struct FixedFormat {
  int total_bits = 32;
  int frac_bits = 16;

  int integer_bits() const { return total_bits - 1 - frac_bits; }
  std::int64_t max_raw() const {
    return static_cast<std::int64_t>((static_cast<int128>(1) << (total_bits - 1)) - 1);
  }
  std::int64_t min_raw() const {
    return static_cast<std::int64_t>(-(static_cast<int128>(1) << (total_bits - 1)));
  }
  double resolution() const { return std::ldexp(1.0, -frac_bits); }
  double max_value() const { return std::ldexp(static_cast<double>(max_raw()), -frac_bits); }
  double min_value() const { return std::ldexp(static_cast<double>(min_raw()), -frac_bits); }

  void validate() const {
    if (total_bits < 4 || total_bits > 64) {
      throw InvalidArgument("fixed format total_bits must be in [4, 64], got " +
                            std::to_string(total_bits));
    }
    if (frac_bits < 0 || frac_bits > total_bits - 1) {
      throw InvalidArgument("fixed format frac_bits must be in [0, total_bits - 1]");
    }
  }

  friend bool operator==(const FixedFormat&, const FixedFormat&) = default;
};

struct FixedOptions {
  // Both unset: derived from the model and schedule (see derive_format).
  std::optional<FixedFormat> x_format;
  std::optional<FixedFormat> y_format;
  int j_bits = 8;
  // Extra fractional bits so that c0 keeps this many significant bits after
  // quantization. 0 keeps the plain pump-resolution rule.
  int c0_significant_bits = 8;
};

struct SolverConfig {
  Variant variant = Variant::Discrete;
  bool heated = false;
  double dt = 1.0;
  double a0 = 1.0;
  std::size_t n_steps = 1000;
  double gamma = 0.0;
  std::optional<double> c0;  // unset: auto from the coupling statistics
  std::uint64_t seed = 0;
  std::size_t n_runs = 1;
  double init_range = 0.1;
  Backend backend = Backend::Float64;
  FixedOptions fixed;
  ParallelParams parallel;  // pb > 1 splits every step across pb spin blocks
  std::size_t threads = 1;  // workers used across restarts
  bool record_trajectory = false;

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
    if (!(a0 > 0.0) || !std::isfinite(a0)) throw InvalidArgument("a0 must be positive");
    if (n_steps == 0) throw InvalidArgument("n_steps must be >= 1");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
      throw InvalidArgument("gamma must be non-negative");
    }
    if (heated && !(gamma > 0.0)) throw InvalidArgument("heated runs need gamma > 0");
    if (n_runs == 0) throw InvalidArgument("n_runs must be >= 1");
    if (!(init_range > 0.0 && init_range < 1.0)) {
      throw InvalidArgument("init_range must be in (0, 1)");
    }
    if (c0 && (!(*c0 > 0.0) || !std::isfinite(*c0))) {
      throw InvalidArgument("fixed c0 must be positive");
    }
    parallel.validate();
    if (fixed.j_bits < 2 || fixed.j_bits > 32) {
      throw InvalidArgument("j_bits must be in [2, 32]");
    }
    if (fixed.x_format) fixed.x_format->validate();
    if (fixed.y_format) fixed.y_format->validate();
    if (fixed.x_format.has_value() != fixed.y_format.has_value()) {
      throw InvalidArgument("x and y fixed formats must be given together");
    }
  }
};

/// Population standard deviation of the n(n-1) off-diagonal couplings.
inline double coupling_stddev(const IsingModel& model) {
  const std::size_t n = model.size();
  const double count = static_cast<double>(n) * static_cast<double>(n - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) sum += model.coupling(i, j);
    }
  }
  const double mean = sum / count;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = model.coupling(i, j) - mean;
      ss += d * d;
    }
  }
  return std::sqrt(ss / count);
}

/// c0 = 1 / lambda_max with lambda_max ~ 2 sigma sqrt(n): places the first
/// bifurcation near the start of the pump ramp.
inline double compute_c0(const IsingModel& model) {
  if (model.size() < 2) throw SolverError("auto c0 needs at least two spins; use a fixed c0");
  const double sigma = coupling_stddev(model);
  if (!(sigma > 0.0)) {
    throw SolverError("couplings have zero spread, auto c0 is undefined; use a fixed c0");
  }
  return 1.0 / (2.0 * sigma * std::sqrt(static_cast<double>(model.size())));
}

inline double resolve_c0(const IsingModel& model, const SolverConfig& config) {
  return config.c0 ? *config.c0 : compute_c0(model);
}

}  // namespace sbm
