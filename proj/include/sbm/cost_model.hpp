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

// Cycle-count model of the matrix-vector / time-evolution datapath.
//
// Per algorithm step, with n spins and unrolling factors (pr, pc, pb):
//
//   Sequential      n^2 + n
//   UnrolledColumns n (n/pc + 1)
//   UnrolledRows    n (n/(pc pr) + 1)
//   Blocked         (n/pb) (n/(pc pr) + 1)
//   Pipelined       (n/pb) (n/(pc pr) + 1/pc)     valid when n/pc >= pr
//
// Counts are exact rationals so the 1/pc pipeline term is never rounded.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "sbm/error.hpp"
#include "sbm/int128.hpp"

namespace sbm {

struct ParallelParams {
  std::size_t pr = 1;  // rows processed concurrently
  std::size_t pc = 1;  // columns of a row consumed per cycle
  std::size_t pb = 1;  // replicated matrix blocks

  void validate() const {
    if (pr == 0 || pc == 0 || pb == 0) {
      throw InvalidArgument("parallel parameters must be >= 1");
    }
  }

  friend bool operator==(const ParallelParams&, const ParallelParams&) = default;
};

/// Non-negative rational with 64-bit parts, kept in lowest terms.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw InvalidArgument("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }
  constexpr double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  constexpr bool is_integer() const { return den_ == 1; }

  friend constexpr Rational operator+(Rational a, Rational b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend constexpr Rational operator*(Rational a, Rational b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend constexpr bool operator==(Rational a, Rational b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend constexpr auto operator<=>(Rational a, Rational b) {
    return static_cast<int128>(a.num_) * b.den_ <=>
           static_cast<int128>(b.num_) * a.den_;
  }
  friend std::ostream& operator<<(std::ostream& os, Rational r) {
    os << r.num_;
    if (r.den_ != 1) os << '/' << r.den_;
    return os;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

enum class CostMode { Sequential, UnrolledColumns, UnrolledRows, Blocked, Pipelined };

/// Strict rejects parameters that do not divide n; Ceil rounds each quotient
/// up instead, which is handy for exploratory sweeps over arbitrary sizes.
enum class Divisibility { Strict, Ceil };

inline std::string_view to_string(CostMode m) {
  switch (m) {
    case CostMode::Sequential: return "sequential";
    case CostMode::UnrolledColumns: return "unrolled-cols";
    case CostMode::UnrolledRows: return "unrolled-rows";
    case CostMode::Blocked: return "blocked";
    case CostMode::Pipelined: return "pipelined";
  }
  return "?";
}

inline CostMode parse_cost_mode(std::string_view s) {
  for (auto m : {CostMode::Sequential, CostMode::UnrolledColumns, CostMode::UnrolledRows,
                 CostMode::Blocked, CostMode::Pipelined}) {
    if (to_string(m) == s) return m;
  }
  throw InvalidArgument("unknown cost mode '" + std::string(s) + "'");
}

namespace detail {

inline Rational quotient(std::size_t n, std::size_t d, Divisibility div, const char* what) {
  if (n % d == 0) return Rational(static_cast<std::int64_t>(n / d));
  if (div == Divisibility::Ceil) {
    return Rational(static_cast<std::int64_t>((n + d - 1) / d));
  }
  throw InvalidArgument(std::string(what) + " = " + std::to_string(d) +
                        " does not divide n_spin = " + std::to_string(n));
}

}  // namespace detail

/// Clock cycles per algorithm step.
inline Rational cycles_per_step(std::size_t n_spin, const ParallelParams& p, CostMode mode,
                                Divisibility div = Divisibility::Strict) {
  if (n_spin == 0) throw InvalidArgument("n_spin must be positive");
  p.validate();
  const auto n = static_cast<std::int64_t>(n_spin);
  const auto pc = static_cast<std::int64_t>(p.pc);
  const auto pr = static_cast<std::int64_t>(p.pr);

  switch (mode) {
    case CostMode::Sequential:
      return Rational(n * n + n);
    case CostMode::UnrolledColumns:
      return Rational(n) * (detail::quotient(n_spin, p.pc, div, "pc") + Rational(1));
    case CostMode::UnrolledRows: {
      detail::quotient(n_spin, p.pc, div, "pc");
      detail::quotient(n_spin, p.pr, div, "pr");
      const Rational mm = div == Divisibility::Ceil
                              ? detail::quotient(n_spin, p.pc * p.pr, div, "pc*pr")
                              : Rational(n, pc * pr);
      return Rational(n) * (mm + Rational(1));
    }
    case CostMode::Blocked:
    case CostMode::Pipelined: {
      detail::quotient(n_spin, p.pc, div, "pc");
      detail::quotient(n_spin, p.pr * p.pb, div, "pr*pb");
      const Rational rows = detail::quotient(n_spin, p.pb, div, "pb");
      const Rational mm = div == Divisibility::Ceil
                              ? detail::quotient(n_spin, p.pc * p.pr, div, "pc*pr")
                              : Rational(n, pc * pr);
      const Rational te = mode == CostMode::Blocked ? Rational(1) : Rational(1, pc);
      return rows * (mm + te);
    }
  }
  throw InvalidArgument("unknown cost mode");
}

/// MM and TE overlap when a row group's column sweep (n/pc cycles) lasts at
/// least as long as the pr time-evolution updates it feeds.
inline bool overlap_feasible(std::size_t n_spin, std::size_t pc, std::size_t pr) {
  if (pc == 0 || pr == 0) throw InvalidArgument("pc and pr must be >= 1");
  return n_spin >= pc * pr;  // n/pc >= pr without the division
}

/// cycles_per_step * n_steps * t_ck, in seconds.
inline double exec_time(std::size_t n_spin, const ParallelParams& p, CostMode mode,
                        std::size_t n_steps, double t_ck,
                        Divisibility div = Divisibility::Strict) {
  if (!(t_ck > 0.0)) throw InvalidArgument("clock period must be positive");
  return cycles_per_step(n_spin, p, mode, div).to_double() *
         static_cast<double>(n_steps) * t_ck;
}

struct CostRow {
  ParallelParams params;
  Rational cycles;
  bool overlap = false;
  double seconds = 0.0;
};

/// Every power-of-two (pr, pc, pb) point that satisfies the divisibility
/// rules, sorted by cycle count then by pr * pc * pb (cheaper hardware first).
inline std::vector<CostRow> cost_sweep(std::size_t n_spin, CostMode mode, std::size_t n_steps,
                                       double t_ck, std::size_t max_factor = 0) {
  if (max_factor == 0) max_factor = n_spin;
  std::vector<std::size_t> factors;
  for (std::size_t f = 1; f <= max_factor && f <= n_spin; f *= 2) {
    if (n_spin % f == 0) factors.push_back(f);
  }
  std::vector<CostRow> rows;
  for (auto pr : factors) {
    for (auto pc : factors) {
      for (auto pb : factors) {
        if (n_spin % (pr * pb) != 0) continue;
        ParallelParams p{pr, pc, pb};
        CostRow row{p, cycles_per_step(n_spin, p, mode), overlap_feasible(n_spin, pc, pr), 0.0};
        row.seconds = row.cycles.to_double() * static_cast<double>(n_steps) * t_ck;
        rows.push_back(row);
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const CostRow& a, const CostRow& b) {
    if (a.cycles != b.cycles) return a.cycles < b.cycles;
    return a.params.pr * a.params.pc * a.params.pb < b.params.pr * b.params.pc * b.params.pb;
  });
  return rows;
}

}  // namespace sbm
