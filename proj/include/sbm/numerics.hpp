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

// Arithmetic back ends for the oscillator update.
//
// FloatArithmetic is plain IEEE double with a fixed 8-lane reduction order.
// FixedArithmetic emulates a saturating two's complement datapath: x, y and
// the scalar parameters share one fractional width, couplings are j_bits-wide
// integers and the sign-weighted row sum is accumulated exactly before it is
// scaled by c0.

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sbm/error.hpp"
#include "sbm/int128.hpp"
#include "sbm/ising_model.hpp"
#include "sbm/solver_config.hpp"

namespace sbm {

struct SaturationCounters {
  std::uint64_t saturations = 0;
  std::uint64_t underflows = 0;  // nonzero products rounded to zero

  SaturationCounters& operator+=(const SaturationCounters& o) {
    saturations += o.saturations;
    underflows += o.underflows;
    return *this;
  }
  friend bool operator==(const SaturationCounters&, const SaturationCounters&) = default;
};

namespace detail {

/// p / 2^shift rounded to nearest, ties to even.
inline int128 round_shift(int128 p, int shift) {
  if (shift == 0) return p;
  int128 q = p >> shift;
  const int128 rem = p - (q << shift);
  const int128 half = static_cast<int128>(1) << (shift - 1);
  if (rem > half || (rem == half && (q & 1) != 0)) ++q;
  return q;
}

inline std::int64_t saturate(int128 v, std::int64_t lo, std::int64_t hi,
                             SaturationCounters* counters) {
  if (v > hi) {
    if (counters) ++counters->saturations;
    return hi;
  }
  if (v < lo) {
    if (counters) ++counters->saturations;
    return lo;
  }
  return static_cast<std::int64_t>(v);
}

/// Dot product with eight interleaved partial sums combined pairwise. The
/// order depends only on the length, never on threading.
inline double blocked_dot(std::span<const double> a, std::span<const double> b) {
  double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  const std::size_t n = a.size();
  const std::size_t main = n - n % 8;
  const double* pa = a.data();
  const double* pb = b.data();
  for (std::size_t j = 0; j < main; j += 8) {
    for (std::size_t l = 0; l < 8; ++l) acc[l] += pa[j + l] * pb[j + l];
  }
  for (std::size_t j = main; j < n; ++j) acc[j - main] += pa[j] * pb[j];
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
}

}  // namespace detail

/// Round-to-nearest-even onto the format grid, then saturate.
inline std::int64_t quantize(double v, const FixedFormat& fmt,
                             SaturationCounters* counters = nullptr) {
  if (std::isnan(v)) throw InvalidArgument("cannot quantize NaN");
  const double scaled = std::nearbyint(std::ldexp(v, fmt.frac_bits));
  const double limit = std::ldexp(1.0, fmt.total_bits - 1);
  if (scaled >= limit) {
    if (counters) ++counters->saturations;
    return fmt.max_raw();
  }
  if (scaled < -limit) {
    if (counters) ++counters->saturations;
    return fmt.min_raw();
  }
  return static_cast<std::int64_t>(scaled);
}

inline double to_real(std::int64_t raw, const FixedFormat& fmt) {
  return std::ldexp(static_cast<double>(raw), -fmt.frac_bits);
}

/// Sum_j sgn_j * J_ij computed the way a mux-based MAC does it: each partial
/// product selects J or its one's complement, and a second adder adds the
/// number of negative signs to turn the one's complements into two's
/// complements. The result is exact; it must fit in acc_bits.
inline std::int64_t fixed_mac(std::span<const std::int32_t> row,
                              std::span<const std::int8_t> signs, int acc_bits = 63) {
  detail::require_size(signs.size(), row.size(), "sign vector");
  std::int64_t tree1 = 0;
  std::int64_t tree2 = 0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    const bool neg = signs[j] < 0;
    tree1 += neg ? ~static_cast<std::int64_t>(row[j]) : static_cast<std::int64_t>(row[j]);
    tree2 += neg ? 1 : 0;
  }
  const std::int64_t acc = tree1 + tree2;
  if (acc_bits < 63) {
    const std::int64_t hi = (std::int64_t{1} << (acc_bits - 1)) - 1;
    if (acc > hi || acc < -hi - 1) {
      throw SolverError("MAC accumulator overflow: " + std::to_string(acc) +
                        " does not fit in " + std::to_string(acc_bits) + " bits");
    }
  }
  return acc;
}

/// Word formats chosen for a model and schedule.
struct FormatPlan {
  FixedFormat x_format;
  FixedFormat y_format;  // also the working format of every intermediate
  int j_bits = 8;
  int acc_bits = 16;
  double c0 = 0.0;  // resolved, before quantization
};

/// Throws if any coupling (or field entry, which becomes a coupling once
/// embedded) is not an integer representable in j_bits two's complement.
inline void check_coupling_range(const IsingModel& model, int j_bits) {
  const double hi = std::ldexp(1.0, j_bits - 1) - 1.0;
  const double lo = -std::ldexp(1.0, j_bits - 1);
  auto check = [&](double v, const std::string& name) {
    if (v != std::floor(v) || v > hi || v < lo) {
      throw InvalidArgument(name + " = " + std::to_string(v) + " is not representable as a " +
                            std::to_string(j_bits) + "-bit two's complement integer");
    }
  };
  for (std::size_t i = 0; i < model.size(); ++i) {
    for (std::size_t j = 0; j < model.size(); ++j) {
      check(model.coupling(i, j), "J[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
    check(model.field(i), "h[" + std::to_string(i) + "]");
  }
}

/// Derives x/y formats for a run.
///
/// Fractional bits: enough to represent the pump increment a0 / n_steps
/// (ceil(log2(n_steps / a0))), raised if needed so that c0 keeps
/// c0_significant_bits significant bits. Integer bits: x needs one (|x| <= 1);
/// y needs 2^I > max_i sum_j |J_ij| c0 + a0.
inline FormatPlan derive_format(const IsingModel& model, const SolverConfig& config) {
  const int j_bits = config.fixed.j_bits;
  check_coupling_range(model, j_bits);
  FormatPlan plan;
  plan.j_bits = j_bits;
  plan.acc_bits = j_bits + static_cast<int>(std::bit_width(model.size()));
  plan.c0 = resolve_c0(model, config);

  if (config.fixed.x_format) {
    plan.x_format = *config.fixed.x_format;
    plan.y_format = *config.fixed.y_format;
    if (plan.x_format.frac_bits != plan.y_format.frac_bits) {
      throw InvalidArgument("x and y formats must share frac_bits");
    }
    if (plan.x_format.integer_bits() < 1 ||
        plan.y_format.integer_bits() < plan.x_format.integer_bits()) {
      throw InvalidArgument("x needs >= 1 integer bit and y at least as many as x");
    }
    return plan;
  }

  const double ratio = static_cast<double>(config.n_steps) / config.a0;
  int frac = 0;
  while (std::ldexp(1.0, frac) < ratio) ++frac;
  if (config.fixed.c0_significant_bits > 0) {
    const int c0_exp = static_cast<int>(std::ceil(-std::log2(plan.c0)));
    frac = std::max(frac, c0_exp + config.fixed.c0_significant_bits);
  }

  double row_max = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    double s = std::abs(model.field(i));
    for (double v : model.row(i)) s += std::abs(v);
    row_max = std::max(row_max, s);
  }
  const double bound = row_max * plan.c0 + config.a0;
  int int_bits = 1;
  while (std::ldexp(1.0, int_bits) <= bound) ++int_bits;

  plan.x_format = FixedFormat{2 + frac, frac};
  plan.y_format = FixedFormat{1 + int_bits + frac, frac};
  if (plan.y_format.total_bits > 64) {
    throw InvalidArgument("derived y format needs " + std::to_string(plan.y_format.total_bits) +
                          " bits (> 64); reduce n_steps or rescale the couplings");
  }
  return plan;
}

/// Integer couplings in [-(2^(j_bits-1)), 2^(j_bits-1) - 1] obtained by
/// scaling every coupling and field entry by one common factor and rounding.
struct ScaledModel {
  IsingModel model;
  double scale = 1.0;  // scaled = round(scale * original)
};

inline ScaledModel scale_to_integer_couplings(const IsingModel& model, int j_bits) {
  double max_abs = 0.0;
  for (double v : model.couplings()) max_abs = std::max(max_abs, std::abs(v));
  for (double v : model.fields()) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs == 0.0) return {model, 1.0};
  const double limit = std::ldexp(1.0, j_bits - 1) - 1.0;
  const double scale = limit / max_abs;
  const std::size_t n = model.size();
  std::vector<double> j(n * n);
  std::vector<double> h(n);
  for (std::size_t k = 0; k < n * n; ++k) j[k] = std::nearbyint(model.couplings()[k] * scale);
  for (std::size_t k = 0; k < n; ++k) h[k] = std::nearbyint(model.fields()[k] * scale);
  return {IsingModel::from_dense(n, std::move(j), std::move(h), model.offset() * scale), scale};
}

/// True when every coupling and field entry already is a j_bits integer.
inline bool has_integer_couplings(const IsingModel& model, int j_bits) {
  try {
    check_coupling_range(model, j_bits);
    return true;
  } catch (const InvalidArgument&) {
    return false;
  }
}

struct FloatArithmetic {
  using value_type = double;
  using coupling_type = double;
  using sign_type = double;

  static coupling_type coupling(double v) { return v; }
  value_type quantize(double v, SaturationCounters*) const { return v; }
  double to_real(value_type v) const { return v; }
  value_type one() const { return 1.0; }
  value_type add(value_type a, value_type b, SaturationCounters*) const { return a + b; }
  value_type sub(value_type a, value_type b, SaturationCounters*) const { return a - b; }
  value_type mul(value_type a, value_type b, SaturationCounters*) const { return a * b; }
  static sign_type sign_of(value_type v) { return v >= 0.0 ? 1.0 : -1.0; }

  value_type scaled_sign_field(std::span<const coupling_type> row, std::span<const sign_type> sgn,
                               value_type c0, SaturationCounters*) const {
    return c0 * detail::blocked_dot(row, sgn);
  }
  value_type scaled_position_field(std::span<const coupling_type> row,
                                   std::span<const value_type> x, value_type c0,
                                   SaturationCounters*) const {
    return c0 * detail::blocked_dot(row, x);
  }
};

class FixedArithmetic {
 public:
  using value_type = std::int64_t;
  using coupling_type = std::int32_t;
  using sign_type = std::int8_t;

  explicit FixedArithmetic(const FormatPlan& plan)
      : x_(plan.x_format), y_(plan.y_format), acc_bits_(plan.acc_bits) {
    x_.validate();
    y_.validate();
    lo_ = y_.min_raw();
    hi_ = y_.max_raw();
  }

  static coupling_type coupling(double v) { return static_cast<coupling_type>(v); }

  const FixedFormat& x_format() const { return x_; }
  const FixedFormat& y_format() const { return y_; }

  value_type quantize(double v, SaturationCounters* c) const { return sbm::quantize(v, y_, c); }
  double to_real(value_type v) const { return sbm::to_real(v, y_); }
  value_type one() const { return value_type{1} << y_.frac_bits; }

  value_type add(value_type a, value_type b, SaturationCounters* c) const {
    return detail::saturate(static_cast<int128>(a) + b, lo_, hi_, c);
  }
  value_type sub(value_type a, value_type b, SaturationCounters* c) const {
    return detail::saturate(static_cast<int128>(a) - b, lo_, hi_, c);
  }
  value_type mul(value_type a, value_type b, SaturationCounters* c) const {
    const int128 r = detail::round_shift(static_cast<int128>(a) * b, y_.frac_bits);
    if (r == 0 && a != 0 && b != 0 && c) ++c->underflows;
    return detail::saturate(r, lo_, hi_, c);
  }
  static sign_type sign_of(value_type v) { return v >= 0 ? 1 : -1; }

  /// c0 * sum_j J_ij sgn_j. The MAC result is an integer, so the c0 product
  /// needs no rounding.
  value_type scaled_sign_field(std::span<const coupling_type> row, std::span<const sign_type> sgn,
                               value_type c0, SaturationCounters* c) const {
    const std::int64_t acc = fixed_mac(row, sgn, acc_bits_);
    return detail::saturate(static_cast<int128>(c0) * acc, lo_, hi_, c);
  }

  value_type scaled_position_field(std::span<const coupling_type> row,
                                   std::span<const value_type> x, value_type c0,
                                   SaturationCounters* c) const {
    int128 acc = 0;
    for (std::size_t j = 0; j < row.size(); ++j) acc += static_cast<int128>(row[j]) * x[j];
    const int128 r = detail::round_shift(acc * c0, y_.frac_bits);
    return detail::saturate(r, lo_, hi_, c);
  }

 private:
  FixedFormat x_;
  FixedFormat y_;
  int acc_bits_;
  std::int64_t lo_ = 0;
  std::int64_t hi_ = 0;
};

}  // namespace sbm
