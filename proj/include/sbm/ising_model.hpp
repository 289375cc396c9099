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

// Dense Ising and QUBO models.
//
// Energy convention used throughout the library:
//
//   H(s) = -1/2 sum_ij J_ij s_i s_j - sum_i h_i s_i + offset,   s_i in {-1,+1}
//
// and QUBO value(q) = sum_ij Q_ij q_i q_j + offset with q_i in {0,1}; the two
// are related by s = 2q - 1.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <span>
#include <string>
#include <vector>

#include "sbm/error.hpp"

namespace sbm {

/// A vector of spins, each exactly -1 or +1.
class SpinVector {
 public:
  SpinVector() = default;

  explicit SpinVector(std::vector<std::int8_t> spins) : s_(std::move(spins)) {
    for (std::size_t i = 0; i < s_.size(); ++i) {
      if (s_[i] != 1 && s_[i] != -1) {
        throw InvalidArgument("spin " + std::to_string(i) +
                              " is neither -1 nor +1");
      }
    }
  }

  static SpinVector filled(std::size_t n, std::int8_t value) {
    return SpinVector(std::vector<std::int8_t>(n, value));
  }

  /// Spins from the bits of `code`: bit (n-1-i) set means s_i = +1, so
  /// increasing codes enumerate vectors in lexicographic order (-1 < +1).
  static SpinVector from_code(std::uint64_t code, std::size_t n) {
    std::vector<std::int8_t> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = ((code >> (n - 1 - i)) & 1U) ? 1 : -1;
    }
    return SpinVector(std::move(s));
  }

  std::size_t size() const { return s_.size(); }
  std::int8_t operator[](std::size_t i) const { return s_[i]; }
  void flip(std::size_t i) { s_[i] = static_cast<std::int8_t>(-s_[i]); }
  std::span<const std::int8_t> values() const { return s_; }
  auto begin() const { return s_.begin(); }
  auto end() const { return s_.end(); }

  SpinVector negated() const {
    auto out = s_;
    for (auto& v : out) v = static_cast<std::int8_t>(-v);
    return SpinVector(std::move(out));
  }

  friend bool operator==(const SpinVector&, const SpinVector&) = default;
  friend auto operator<=>(const SpinVector&, const SpinVector&) = default;

 private:
  std::vector<std::int8_t> s_;
};

/// Ising model with dense symmetric zero-diagonal couplings.
///
/// Immutable after construction. Inputs whose asymmetry exceeds
/// kSymmetryWarn are symmetrized as (J + J^T) / 2 with a warning on
/// std::clog; asymmetry above kSymmetryError is rejected.
class IsingModel {
 public:
  static constexpr double kSymmetryWarn = 1e-12;
  static constexpr double kSymmetryError = 1e-6;

  /// `couplings` is row-major n x n. An empty `field` means h = 0. The stored
  /// field is field_scale * field.
  static IsingModel from_dense(std::size_t n, std::vector<double> couplings,
                               std::vector<double> field = {},
                               double offset = 0.0, double field_scale = 1.0) {
    if (n == 0) throw InvalidArgument("Ising model needs at least one spin");
    detail::require_size(couplings.size(), n * n, "coupling matrix");
    if (field.empty()) field.assign(n, 0.0);
    detail::require_size(field.size(), n, "field vector");
    if (!std::isfinite(offset) || !std::isfinite(field_scale)) {
      throw InvalidArgument("offset and field scale must be finite");
    }

    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double v = couplings[i * n + j];
        if (!std::isfinite(v)) {
          throw InvalidArgument("J[" + std::to_string(i) + "][" +
                                std::to_string(j) + "] is not finite");
        }
        if (i == j && v != 0.0) {
          throw InvalidArgument("J[" + std::to_string(i) + "][" +
                                std::to_string(i) +
                                "] is nonzero; the diagonal must be zero");
        }
        if (j > i) asym = std::max(asym, std::abs(v - couplings[j * n + i]));
      }
    }
    if (asym > kSymmetryError) {
      throw InvalidArgument("coupling matrix is not symmetric (max |J_ij - J_ji| = " +
                            std::to_string(asym) + ")");
    }
    if (asym > kSymmetryWarn) {
      std::clog << "sbm: warning: symmetrizing coupling matrix (max asymmetry "
                << asym << ")\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double m = 0.5 * (couplings[i * n + j] + couplings[j * n + i]);
        couplings[i * n + j] = m;
        couplings[j * n + i] = m;
      }
    }
    for (auto& h : field) {
      h *= field_scale;
      if (!std::isfinite(h)) throw InvalidArgument("field entry is not finite");
    }

    IsingModel m;
    m.n_ = n;
    m.j_ = std::move(couplings);
    m.h_ = std::move(field);
    m.offset_ = offset;
    m.asymmetry_ = asym;
    return m;
  }

  /// All-zero model on n spins.
  static IsingModel zero(std::size_t n, double offset = 0.0) {
    return from_dense(n, std::vector<double>(n * n, 0.0), {}, offset);
  }

  std::size_t size() const { return n_; }
  double coupling(std::size_t i, std::size_t j) const { return j_[i * n_ + j]; }
  double field(std::size_t i) const { return h_[i]; }
  double offset() const { return offset_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(j_).subspan(i * n_, n_);
  }
  std::span<const double> couplings() const { return j_; }
  std::span<const double> fields() const { return h_; }

  bool has_field() const {
    for (double h : h_) {
      if (h != 0.0) return true;
    }
    return false;
  }

  /// Largest |J_ij - J_ji| seen in the input before symmetrization.
  double input_asymmetry() const { return asymmetry_; }

  IsingModel with_offset(double offset) const {
    IsingModel m = *this;
    m.offset_ = offset;
    return m;
  }

 private:
  IsingModel() = default;

  std::size_t n_ = 0;
  std::vector<double> j_;
  std::vector<double> h_;
  double offset_ = 0.0;
  double asymmetry_ = 0.0;
};

/// QUBO model over q in {0,1}^n: value(q) = sum_ij Q_ij q_i q_j + offset.
/// Q may be upper triangular or symmetric; both orders are summed.
struct QuboModel {
  std::size_t n = 0;
  std::vector<double> q;  // row-major n x n
  double offset = 0.0;

  static QuboModel zero(std::size_t n) {
    return QuboModel{n, std::vector<double>(n * n, 0.0), 0.0};
  }

  double& at(std::size_t i, std::size_t j) { return q[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return q[i * n + j]; }

  void validate() const {
    if (n == 0) throw InvalidArgument("QUBO model needs at least one variable");
    detail::require_size(q.size(), n * n, "QUBO matrix");
    for (double v : q) {
      if (!std::isfinite(v)) throw InvalidArgument("QUBO entry is not finite");
    }
    if (!std::isfinite(offset)) throw InvalidArgument("QUBO offset is not finite");
  }
};

/// Ising energy, always evaluated in double precision.
inline double energy(const IsingModel& model, const SpinVector& spins) {
  const std::size_t n = model.size();
  detail::require_size(spins.size(), n, "spin vector");
  double quad = 0.0;
  double lin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = model.row(i);
    double acc = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) acc += row[j] * spins[j];
    quad += spins[i] * acc;
    lin += model.field(i) * spins[i];
  }
  // -1/2 * sum over both orders == -sum over i < j for symmetric J.
  return -quad - lin + model.offset();
}

/// QUBO objective for a binary assignment given as 0/1 bytes.
inline double qubo_value(const QuboModel& qubo, std::span<const std::uint8_t> bits) {
  detail::require_size(bits.size(), qubo.n, "binary assignment");
  double v = qubo.offset;
  for (std::size_t i = 0; i < qubo.n; ++i) {
    if (!bits[i]) continue;
    for (std::size_t j = 0; j < qubo.n; ++j) {
      if (bits[j]) v += qubo.at(i, j);
    }
  }
  return v;
}

/// Binary image of a spin vector, q = (1 + s) / 2.
inline std::vector<std::uint8_t> to_binary(const SpinVector& s) {
  std::vector<std::uint8_t> q(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) q[i] = s[i] > 0 ? 1 : 0;
  return q;
}

/// Spin image of a binary assignment, s = 2q - 1.
inline SpinVector to_spins(std::span<const std::uint8_t> q) {
  std::vector<std::int8_t> s(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) s[i] = q[i] ? 1 : -1;
  return SpinVector(std::move(s));
}

/// Rewrites a QUBO as an Ising model with identical objective on every
/// assignment: value(q) == energy(model, 2q - 1).
inline IsingModel qubo_to_ising(const QuboModel& qubo) {
  qubo.validate();
  const std::size_t n = qubo.n;
  std::vector<double> j(n * n, 0.0);
  std::vector<double> h(n, 0.0);
  double offset = qubo.offset;
  for (std::size_t i = 0; i < n; ++i) {
    // Q_ii q_i = Q_ii (1 + s_i) / 2
    offset += 0.5 * qubo.at(i, i);
    h[i] -= 0.5 * qubo.at(i, i);
    for (std::size_t k = i + 1; k < n; ++k) {
      // (Q_ik + Q_ki) q_i q_k = c (1 + s_i + s_k + s_i s_k) / 4
      const double c = qubo.at(i, k) + qubo.at(k, i);
      if (c == 0.0) continue;
      offset += 0.25 * c;
      h[i] -= 0.25 * c;
      h[k] -= 0.25 * c;
      j[i * n + k] = -0.25 * c;
      j[k * n + i] = -0.25 * c;
    }
  }
  return IsingModel::from_dense(n, std::move(j), std::move(h), offset);
}

/// Inverse of qubo_to_ising; returns a symmetric Q.
inline QuboModel ising_to_qubo(const IsingModel& model) {
  const std::size_t n = model.size();
  QuboModel out = QuboModel::zero(n);
  out.offset = model.offset();
  for (std::size_t i = 0; i < n; ++i) {
    // -h_i s_i = -h_i (2 q_i - 1)
    out.at(i, i) -= 2.0 * model.field(i);
    out.offset += model.field(i);
    for (std::size_t k = i + 1; k < n; ++k) {
      // -J_ik s_i s_k = -J_ik (4 q_i q_k - 2 q_i - 2 q_k + 1)
      const double c = model.coupling(i, k);
      if (c == 0.0) continue;
      out.at(i, k) -= 2.0 * c;
      out.at(k, i) -= 2.0 * c;
      out.at(i, i) += 2.0 * c;
      out.at(k, k) += 2.0 * c;
      out.offset -= c;
    }
  }
  return out;
}

/// Folds h into an (n+1)-spin coupling matrix whose last spin is an ancilla.
/// With the ancilla at +1 the energy equals the original model's.
inline IsingModel embed_field(const IsingModel& model) {
  const std::size_t n = model.size();
  const std::size_t m = n + 1;
  std::vector<double> j(m * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) j[i * m + k] = model.coupling(i, k);
    // Row and column each contribute once: -1/2 * 2 * h_i s_i s_anc.
    j[i * m + n] = model.field(i);
    j[n * m + i] = model.field(i);
  }
  return IsingModel::from_dense(m, std::move(j), {}, model.offset());
}

/// Appends an ancilla spin (+1) to a spin vector.
inline SpinVector with_ancilla(const SpinVector& s) {
  std::vector<std::int8_t> v(s.begin(), s.end());
  v.push_back(1);
  return SpinVector(std::move(v));
}

}  // namespace sbm
