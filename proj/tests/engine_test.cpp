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


#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "test_support.hpp"

namespace sbm {
namespace {

/// n-spin model whose off-diagonal entries alternate +v, -v pair by pair.
IsingModel alternating_model(std::size_t n, double v) {
  std::vector<double> j(n * n, 0.0);
  int k = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) j[a * n + b] = j[b * n + a] = (k++ % 2 ? -v : v);
  }
  return IsingModel::from_dense(n, std::move(j));
}

OscillatorState manual_state(std::vector<double> x, std::vector<double> y) {
  OscillatorState s;
  s.sgn_prev.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s.sgn_prev[i] = x[i] >= 0.0 ? 1 : -1;
  s.x = std::move(x);
  s.y = std::move(y);
  return s;
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  auto bad = [](auto mutate) {
    SolverConfig c;
    mutate(c);
    return c;
  };
  EXPECT_THROW(bad([](SolverConfig& c) { c.dt = 0; }).validate(), InvalidArgument);
  EXPECT_THROW(bad([](SolverConfig& c) { c.n_steps = 0; }).validate(), InvalidArgument);
  EXPECT_THROW(bad([](SolverConfig& c) { c.gamma = -1; }).validate(), InvalidArgument);
  EXPECT_THROW(bad([](SolverConfig& c) { c.heated = true; }).validate(), InvalidArgument);
  EXPECT_THROW(bad([](SolverConfig& c) { c.init_range = 1.0; }).validate(), InvalidArgument);
  EXPECT_THROW(bad([](SolverConfig& c) { c.init_range = 0.0; }).validate(), InvalidArgument);
  EXPECT_THROW(bad([](SolverConfig& c) { c.n_runs = 0; }).validate(), InvalidArgument);
  EXPECT_THROW(bad([](SolverConfig& c) { c.c0 = -1.0; }).validate(), InvalidArgument);
  EXPECT_NO_THROW(bad([](SolverConfig& c) {
                    c.heated = true;
                    c.gamma = 0.1;
                  }).validate());
}

TEST(DefaultDt, PerVariant) {
  EXPECT_EQ(default_dt(Variant::Discrete), 1.0);
  EXPECT_EQ(default_dt(Variant::Ballistic), 0.5);
}

TEST(ComputeC0, DirectFormula) {
  EXPECT_DOUBLE_EQ(compute_c0(alternating_model(4, 1.0)), 0.25);
  EXPECT_DOUBLE_EQ(compute_c0(alternating_model(16, 0.5)), 0.25);
}

TEST(ComputeC0, UndefinedCases) {
  EXPECT_THROW(compute_c0(IsingModel::zero(1)), SolverError);
  EXPECT_THROW(compute_c0(IsingModel::zero(5)), SolverError);
  EXPECT_THROW(compute_c0(IsingModel::from_dense(2, {0, -1, -1, 0})), SolverError);
}

TEST(ComputeC0, MatchesIndependentStatistics) {
  // Sparse unit graph, 800 nodes.
  const auto g = generate_maxcut({800, -2, 0, 0.06, 3});
  const auto m = encode_maxcut(g).model;
  // Two-pass mean / variance over the off-diagonal entries with long double.
  long double sum = 0, sq = 0;
  const long double count = 800.0L * 799.0L;
  for (std::size_t i = 0; i < 800; ++i) {
    for (std::size_t j = 0; j < 800; ++j) {
      if (i != j) sum += m.coupling(i, j);
    }
  }
  const long double mu = sum / count;
  for (std::size_t i = 0; i < 800; ++i) {
    for (std::size_t j = 0; j < 800; ++j) {
      if (i != j) sq += (m.coupling(i, j) - mu) * (m.coupling(i, j) - mu);
    }
  }
  const double expected = static_cast<double>(1.0L / (2.0L * std::sqrt(sq / count) * std::sqrt(800.0L)));
  EXPECT_NEAR(compute_c0(m), expected, 1e-12);
}

TEST(InitState, DeterministicAndInRange) {
  std::mt19937_64 rng(60);
  const auto m = testing::random_model(32, rng);
  SolverConfig c;
  c.seed = 77;
  const auto a = init_state(m, c, 3);
  const auto b = init_state(m, c, 3);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.a, 0.0);
  EXPECT_EQ(a.step, 0u);
  for (std::size_t i = 0; i < 32; ++i) {
    EXPECT_LE(std::abs(a.x[i]), c.init_range);
    EXPECT_LE(std::abs(a.y[i]), c.init_range);
    EXPECT_NE(a.x[i], 0.0);
    EXPECT_NE(a.y[i], 0.0);
    EXPECT_EQ(a.sgn_prev[i], a.x[i] >= 0 ? 1 : -1);
  }
}

TEST(InitState, DifferentRunsDiffer) {
  std::mt19937_64 rng(61);
  const auto m = testing::random_model(8, rng);
  SolverConfig c;
  const auto base = init_state(m, c, 0);
  for (std::size_t r = 1; r <= 64; ++r) EXPECT_NE(init_state(m, c, r).x, base.x);
}

TEST(InitState, FixedBackendStateIsOnGridAndNonzero) {
  std::mt19937_64 rng(62);
  const auto m = testing::random_integer_model(16, -4, 4, rng);
  SolverConfig c;
  c.backend = Backend::Fixed;
  c.n_steps = 64;
  c.init_range = 0.001;
  const auto plan = derive_format(m, c);
  const auto s = init_state(m, c, 0);
  for (double v : s.x) {
    EXPECT_NE(v, 0.0);
    EXPECT_EQ(to_real(quantize(v, plan.y_format), plan.y_format), v);
  }
}

TEST(Step, ZeroModelFixedPoint) {
  SolverConfig c;
  c.c0 = 1.0;
  c.n_steps = 50;
  auto s = manual_state({0.0}, {0.0});
  const auto m = IsingModel::zero(1);
  for (int k = 0; k < 50; ++k) {
    s = step(s, m, c);
    ASSERT_EQ(s.x[0], 0.0);
    ASSERT_EQ(s.y[0], 0.0);
  }
  EXPECT_THROW(step(s, m, c), SolverError);
}

TEST(Step, WallClampResetsMomentum) {
  SolverConfig c;
  c.c0 = 1.0;
  c.n_steps = 1;  // a = a0 on the first step, so the detuning term vanishes
  const auto s = step(manual_state({0.5}, {1.0}), IsingModel::zero(1), c);
  EXPECT_EQ(s.x[0], 1.0);
  EXPECT_EQ(s.y[0], 0.0);
  EXPECT_EQ(s.a, 1.0);
}

TEST(Step, HeatedWallKeepsTheHeatingTerm) {
  SolverConfig c;
  c.c0 = 1.0;
  c.n_steps = 1;
  c.heated = true;
  c.gamma = 0.25;
  const auto s = step(manual_state({0.5}, {1.0}), IsingModel::zero(1), c);
  EXPECT_EQ(s.x[0], 1.0);
  EXPECT_EQ(s.y[0], 0.25);  // gamma * y_old * dt
  const auto t = step(manual_state({0.1}, {0.2}), IsingModel::zero(1), c);
  EXPECT_NEAR(t.x[0], 0.3, 1e-15);
  EXPECT_NEAR(t.y[0], 0.2 + 0.25 * 0.2, 1e-15);
}

TEST(Step, NegativeWall) {
  SolverConfig c;
  c.c0 = 1.0;
  c.n_steps = 1;
  const auto s = step(manual_state({-0.5}, {-1.0}), IsingModel::zero(1), c);
  EXPECT_EQ(s.x[0], -1.0);
  EXPECT_EQ(s.y[0], 0.0);
  EXPECT_EQ(s.sgn_prev[0], -1);
}

TEST(Step, RejectsFieldsAndBadStates) {
  SolverConfig c;
  c.c0 = 1.0;
  const auto m = IsingModel::from_dense(2, {0, 1, 1, 0}, {1, 0});
  EXPECT_THROW(step(manual_state({0.1, 0.1}, {0, 0}), m, c), InvalidArgument);
  EXPECT_THROW(step(manual_state({0.1}, {0}), IsingModel::zero(2), c), DimensionError);
}

TEST(Step, SignOfZeroIsPlus) {
  SolverConfig c;
  c.c0 = 1.0;
  c.n_steps = 10;
  const auto s = step(manual_state({0.0}, {0.0}), IsingModel::zero(1), c);
  EXPECT_EQ(s.sgn_prev[0], 1);
}

TEST(Step, PumpScheduleFloat) {
  std::mt19937_64 rng(63);
  const auto m = testing::random_model(6, rng);
  SolverConfig c;
  c.n_steps = 300;
  c.a0 = 1.3;
  auto s = init_state(m, c, 0);
  for (std::size_t k = 1; k <= c.n_steps; ++k) {
    s = step(s, m, c);
    const double want = static_cast<double>(k) * c.a0 / static_cast<double>(c.n_steps);
    ASSERT_NEAR(s.a, want, static_cast<double>(k) * std::numeric_limits<double>::epsilon() * want);
    ASSERT_EQ(s.step, k);
  }
  EXPECT_EQ(s.a, c.a0);
}

TEST(Step, PumpScheduleFixedIsExact) {
  std::mt19937_64 rng(64);
  const auto m = testing::random_integer_model(6, -3, 3, rng);
  SolverConfig c;
  c.backend = Backend::Fixed;
  c.n_steps = 256;
  const auto plan = derive_format(m, c);
  const double da = to_real(quantize(c.a0 / 256.0, plan.y_format), plan.y_format);
  auto s = init_state(m, c, 0);
  for (std::size_t k = 1; k <= c.n_steps; ++k) {
    s = step(s, m, c);
    ASSERT_EQ(s.a, static_cast<double>(k) * da);
  }
  EXPECT_EQ(s.a, 1.0);
}

TEST(Step, PositionBoundAndUnheatedWallRule) {
  std::mt19937_64 rng(65);
  for (auto variant : {Variant::Discrete, Variant::Ballistic}) {
    for (auto backend : {Backend::Float64, Backend::Fixed}) {
      const auto m = testing::random_integer_model(10, -5, 5, rng);
      SolverConfig c;
      c.variant = variant;
      c.dt = default_dt(variant);
      c.backend = backend;
      c.n_steps = 200;
      auto s = init_state(m, c, 1);
      for (std::size_t k = 0; k < c.n_steps; ++k) {
        const auto prev = s;
        s = step(s, m, c);
        for (std::size_t i = 0; i < 10; ++i) {
          ASSERT_LE(std::abs(s.x[i]), 1.0);
          const bool clamped = std::abs(s.x[i]) == 1.0 && std::abs(prev.x[i]) != 1.0;
          if (clamped) {
            ASSERT_EQ(s.y[i], 0.0);
          }
        }
      }
    }
  }
}

TEST(Step, DiscreteForceDependsOnlyOnSigns) {
  std::mt19937_64 rng(66);
  const std::size_t n = 8;
  const auto m = testing::random_model(n, rng);
  SolverConfig c;
  c.n_steps = 100;
  auto s = init_state(m, c, 2);
  for (int k = 0; k < 30; ++k) s = step(s, m, c);
  std::uniform_real_distribution<double> mag(0.01, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    // Rescale every other oscillator's position, keeping its sign.
    auto t = s;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) t.x[j] = (t.x[j] >= 0 ? 1.0 : -1.0) * mag(rng);
    }
    EXPECT_EQ(step(s, m, c).y[i], step(t, m, c).y[i]);
    EXPECT_EQ(step(s, m, c).x[i], step(t, m, c).x[i]);
  }
}

TEST(Step, PermutationEquivariance) {
  std::mt19937_64 rng(67);
  const std::size_t n = 8;
  for (auto variant : {Variant::Discrete, Variant::Ballistic}) {
    const auto m = testing::random_dyadic_model(n, rng, false);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> j(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) j[perm[a] * n + perm[b]] = m.coupling(a, b);
    }
    const auto pm = IsingModel::from_dense(n, j);
    SolverConfig c;
    c.variant = variant;
    c.c0 = 0.125;
    c.n_steps = 100;
    auto s = init_state(m, c, 0);
    auto permute = [&](const OscillatorState& in) {
      OscillatorState out = in;
      for (std::size_t a = 0; a < n; ++a) {
        out.x[perm[a]] = in.x[a];
        out.y[perm[a]] = in.y[a];
        out.sgn_prev[perm[a]] = in.sgn_prev[a];
      }
      return out;
    };
    auto ps = permute(s);
    for (std::size_t k = 0; k < c.n_steps; ++k) {
      s = step(s, m, c);
      ps = step(ps, pm, c);
      const auto expect = permute(s);
      ASSERT_EQ(ps.sgn_prev, expect.sgn_prev);
      // The 8-lane reduction visits a permuted row in a different order, so
      // positions agree to rounding rather than bit for bit.
      for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(ps.x[i], expect.x[i], 1e-9);
    }
  }
}

TEST(Step, TwoSpinAntiferromagnet) {
  const auto m = IsingModel::from_dense(2, {0, -1, -1, 0});
  SolverConfig c;
  c.c0 = 0.5;  // constant couplings: the automatic rule is undefined
  c.n_steps = 1000;
  auto s = init_state(m, c, 0);
  for (std::size_t k = 0; k < c.n_steps; ++k) s = step(s, m, c);
  EXPECT_EQ(s.sgn_prev[0], -s.sgn_prev[1]);
  EXPECT_EQ(energy(m, s.spins()), brute_force_ground_state(m).energy);
}

TEST(Solve, SingleRun) {
  std::mt19937_64 rng(68);
  const auto m = testing::random_model(6, rng);
  SolverConfig c;
  c.n_steps = 100;
  const auto r = solve(m, c);
  ASSERT_EQ(r.runs.size(), 1u);
  EXPECT_EQ(r.runs[0].best_spins, r.best.best_spins);
  EXPECT_EQ(r.best.best_energy, energy(m, r.best.best_spins));
  EXPECT_EQ(r.best.best_step, c.n_steps);
}

TEST(Solve, FindsGroundStateOfEightSpinModel) {
  std::mt19937_64 rng(69);
  for (int trial = 0; trial < 5; ++trial) {
    const auto m = testing::random_model(8, rng);
    SolverConfig c;
    c.n_runs = 100;
    c.n_steps = 2000;
    c.seed = static_cast<std::uint64_t>(trial);
    const auto r = solve(m, c);
    EXPECT_NEAR(r.best.best_energy, brute_force_ground_state(m).energy, 1e-9);
  }
}

TEST(Solve, BestIsMinimumWithEarliestTie) {
  std::mt19937_64 rng(70);
  const auto m = testing::random_model(10, rng);
  SolverConfig c;
  c.n_runs = 30;
  c.n_steps = 50;
  const auto r = solve(m, c);
  std::size_t want = 0;
  for (std::size_t k = 0; k < r.runs.size(); ++k) {
    EXPECT_EQ(r.runs[k].run_index, k);
    EXPECT_EQ(r.runs[k].best_energy, energy(m, r.runs[k].best_spins));
    if (r.runs[k].best_energy < r.runs[want].best_energy) want = k;
  }
  EXPECT_EQ(r.best.run_index, want);
}

TEST(Solve, TrajectoryTracksTheBestCheckpoint) {
  std::mt19937_64 rng(71);
  const auto m = testing::random_model(12, rng);
  SolverConfig c;
  c.n_steps = 300;
  c.n_runs = 4;
  c.record_trajectory = true;
  const auto r = solve(m, c);
  for (const auto& run : r.runs) {
    ASSERT_EQ(run.trajectory.size(), c.n_steps);
    const auto it = std::min_element(run.trajectory.begin(), run.trajectory.end());
    EXPECT_EQ(run.best_energy, *it);
    EXPECT_EQ(run.best_step, static_cast<std::size_t>(it - run.trajectory.begin()) + 1);
    EXPECT_LE(run.best_step, c.n_steps);
    EXPECT_EQ(run.best_energy, energy(m, run.best_spins));
    EXPECT_LE(run.best_energy, run.trajectory.back());
  }
  // The trajectory's last entry is the final state reported without tracking.
  c.record_trajectory = false;
  const auto plain = solve(m, c);
  for (std::size_t k = 0; k < r.runs.size(); ++k) {
    EXPECT_EQ(plain.runs[k].best_energy, r.runs[k].trajectory.back());
  }
}

TEST(Solve, DeterministicAcrossThreadsAndBlocks) {
  std::mt19937_64 rng(72);
  const auto m = testing::random_integer_model(40, -16, 16, rng);
  for (auto backend : {Backend::Float64, Backend::Fixed}) {
    SolverConfig c;
    c.backend = backend;
    c.n_steps = 200;
    c.n_runs = 12;
    c.seed = 5;
    const auto ref = solve(m, c);
    for (std::size_t threads : {2u, 4u, 8u}) {
      for (std::size_t pb : {1u, 3u, 4u}) {
        c.threads = threads;
        c.parallel.pb = pb;
        const auto r = solve(m, c);
        for (std::size_t k = 0; k < ref.runs.size(); ++k) {
          ASSERT_EQ(r.runs[k].best_spins, ref.runs[k].best_spins);
          ASSERT_EQ(r.runs[k].best_energy, ref.runs[k].best_energy);
          ASSERT_EQ(r.runs[k].saturation, ref.runs[k].saturation);
        }
      }
    }
  }
}

TEST(Solve, FieldIsFoldedIntoAnAncilla) {
  std::mt19937_64 rng(73);
  const auto m = testing::random_model(8, rng, true);
  for (auto variant : {Variant::Discrete, Variant::Ballistic}) {
    SolverConfig c;
    c.variant = variant;
    c.dt = default_dt(variant);
    c.n_runs = 60;
    c.n_steps = 1000;
    const auto r = solve(m, c);
    EXPECT_TRUE(r.field_embedded);
    EXPECT_EQ(r.best.best_spins.size(), 8u);
    EXPECT_EQ(r.best.best_energy, energy(m, r.best.best_spins));
    EXPECT_NEAR(r.best.best_energy, brute_force_ground_state(m).energy, 1e-9);
  }
}

TEST(Solve, BallisticAncillaFollowsThePumpRamp) {
  const KnapsackInstance inst{{5, 4, 3}, {4, 3, 2}, 5};
  const auto enc = encode_knapsack(inst, default_penalty(inst));
  const auto anc = *enc.ancilla();
  SolverConfig c;
  c.variant = Variant::Ballistic;
  c.dt = 0.5;
  c.n_steps = 20;
  auto s = init_state(enc.model, c, 0, anc);
  EXPECT_EQ(s.x[anc], 0.0);
  for (std::size_t k = 1; k <= c.n_steps; ++k) {
    s = step(s, enc.model, c, anc);
    ASSERT_DOUBLE_EQ(s.x[anc], std::min(1.0, s.a / c.a0));
  }
  c.variant = Variant::Discrete;
  c.dt = 1.0;
  s = init_state(enc.model, c, 0, anc);
  for (std::size_t k = 1; k <= c.n_steps; ++k) {
    s = step(s, enc.model, c, anc);
    ASSERT_EQ(s.x[anc], 1.0);
    ASSERT_EQ(s.sgn_prev[anc], 1);
  }
}

TEST(Solve, EncodingKeepsItsAncillaAtPlusOne) {
  const KnapsackInstance inst{{6, 10, 3}, {2, 2, 1}, 3};
  const auto enc = encode_knapsack(inst, default_penalty(inst));
  SolverConfig c;
  c.n_runs = 20;
  c.n_steps = 500;
  const auto r = solve(enc, c);
  for (const auto& run : r.runs) EXPECT_EQ(run.best_spins[*enc.ancilla()], 1);
  EXPECT_EQ(decode_knapsack(enc, r.best.best_spins).total_value, 13.0);
}

TEST(Solve, FixedBackendReportsQuantizedParameters) {
  std::mt19937_64 rng(74);
  const auto m = testing::random_integer_model(12, -8, 8, rng);
  SolverConfig c;
  c.backend = Backend::Fixed;
  c.n_steps = 100;
  const auto r = solve(m, c);
  ASSERT_TRUE(r.formats.has_value());
  const auto& fmt = r.formats->y_format;
  EXPECT_EQ(to_real(quantize(r.c0, fmt), fmt), r.c0);
  EXPECT_NEAR(r.c0, compute_c0(m), fmt.resolution());
  EXPECT_EQ(r.dt, 1.0);
}

TEST(Solve, FixedBackendRejectsNonIntegerCouplings) {
  std::mt19937_64 rng(75);
  SolverConfig c;
  c.backend = Backend::Fixed;
  EXPECT_THROW(solve(testing::random_model(5, rng), c), InvalidArgument);
}

TEST(Solve, HeatedDiscreteRuns) {
  std::mt19937_64 rng(76);
  const auto m = testing::random_model(8, rng);
  SolverConfig c;
  c.heated = true;
  c.gamma = 0.1;
  c.n_runs = 50;
  c.n_steps = 1000;
  const auto r = solve(m, c);
  EXPECT_NEAR(r.best.best_energy, brute_force_ground_state(m).energy, 1e-9);
}

}  // namespace
}  // namespace sbm
