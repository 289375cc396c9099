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

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "sbm/error.hpp"

namespace sbm {

/// Expected time to reach the target with 90% confidence when one run of
/// length t_com succeeds with probability p_s.
inline double time_to_target(double t_com, double p_s) {
  if (!(t_com >= 0.0) || !std::isfinite(t_com)) {
    throw InvalidArgument("time_to_target: t_com must be a finite non-negative time");
  }
  if (!(p_s > 0.0 && p_s < 1.0)) {
    throw InvalidArgument("time_to_target: success probability must be in (0, 1)");
  }
  return t_com * std::log(0.1) / std::log1p(-p_s);
}

/// Fraction of objectives >= threshold.
inline double success_probability(std::span<const double> objectives, double threshold) {
  if (objectives.empty()) throw InvalidArgument("success_probability: no samples");
  const auto hits = std::count_if(objectives.begin(), objectives.end(),
                                  [&](double v) { return v >= threshold; });
  return static_cast<double>(hits) / static_cast<double>(objectives.size());
}

struct CdfPoint {
  double value = 0.0;
  double probability = 0.0;  // P(X <= value)
};

/// Empirical CDF, one point per distinct sample value.
inline std::vector<CdfPoint> empirical_cdf(std::span<const double> samples) {
  std::vector<double> v(samples.begin(), samples.end());
  std::sort(v.begin(), v.end());
  std::vector<CdfPoint> out;
  const double n = static_cast<double>(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k + 1 < v.size() && v[k + 1] == v[k]) continue;
    out.push_back({v[k], static_cast<double>(k + 1) / n});
  }
  return out;
}

/// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|.
inline double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("ks_distance: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / static_cast<double>(x.size()) -
                             static_cast<double>(j) / static_cast<double>(y.size())));
  }
  return d;
}

inline double mean(std::span<const double> v) {
  if (v.empty()) throw InvalidArgument("mean: no samples");
  double s = 0.0;
  for (double e : v) s += e;
  return s / static_cast<double>(v.size());
}

}  // namespace sbm
