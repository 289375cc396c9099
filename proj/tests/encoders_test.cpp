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

#include <random>

#include "test_support.hpp"

namespace sbm {
namespace {

using testing::for_each_assignment;

/// Minimum energy over all assignments with the last (ancilla) spin at +1.
SpinVector argmin_with_ancilla(const IsingModel& m) {
  const std::size_t free = m.size() - 1;
  SpinVector best;
  double best_e = 0.0;
  for_each_assignment(free, [&](const SpinVector& s) {
    const auto full = with_ancilla(s);
    const double e = energy(m, full);
    if (best.size() == 0 || e < best_e) {
      best = full;
      best_e = e;
    }
  });
  return best;
}

TEST(MaxCutInstance, Validation) {
  EXPECT_THROW((MaxCutInstance{2, {{0, 2, 1.0}}}.validate()), InvalidArgument);
  EXPECT_THROW((MaxCutInstance{2, {{1, 1, 1.0}}}.validate()), InvalidArgument);
  EXPECT_THROW((MaxCutInstance{3, {{0, 1, 1.0}, {1, 0, 2.0}}}.validate()), InvalidArgument);
  EXPECT_NO_THROW((MaxCutInstance{3, {{0, 1, 1.0}, {1, 2, 2.0}}}.validate()));
}

TEST(CutValue, SingleEdge) {
  const MaxCutInstance g{2, {{0, 1, 1.0}}};
  EXPECT_EQ(cut_value(g, SpinVector({1, -1})), 1.0);
  EXPECT_EQ(cut_value(g, SpinVector({1, 1})), 0.0);
  EXPECT_THROW(cut_value(g, SpinVector({1})), DimensionError);
}

TEST(CutValue, OneSidedPartitionCutsNothing) {
  std::mt19937_64 rng(4);
  const auto g = testing::random_graph(30, 0.3, rng);
  EXPECT_EQ(cut_value(g, SpinVector::filled(30, 1)), 0.0);
}

TEST(EncodeMaxCut, SingleEdge) {
  const auto enc = encode_maxcut(MaxCutInstance{2, {{0, 1, 1.0}}});
  EXPECT_EQ(enc.model.coupling(0, 1), -2.0);
  EXPECT_EQ(enc.model.coupling(1, 0), -2.0);
  EXPECT_FALSE(enc.model.has_field());
  EXPECT_EQ(brute_force_ground_state(enc.model).spins, SpinVector({-1, 1}));
  EXPECT_LT(energy(enc.model, SpinVector({1, -1})), energy(enc.model, SpinVector({1, 1})));
  EXPECT_FALSE(enc.ancilla().has_value());
}

TEST(EncodeMaxCut, TriangleBestCutIsTwo) {
  const MaxCutInstance g{3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}};
  const auto enc = encode_maxcut(g);
  const auto gs = brute_force_ground_state(enc.model);
  EXPECT_EQ(cut_value(g, gs.spins), 2.0);
}

TEST(EncodeMaxCut, EmptyGraphAllAssignmentsTie) {
  const auto enc = encode_maxcut(MaxCutInstance{4, {}});
  for_each_assignment(4, [&](const SpinVector& s) { EXPECT_EQ(energy(enc.model, s), 0.0); });
}

TEST(EncodeMaxCut, DuplicateEdgeRejected) {
  EXPECT_THROW(encode_maxcut(MaxCutInstance{3, {{0, 1, 1.0}, {0, 1, 1.0}}}), InvalidArgument);
}

TEST(EncodeMaxCut, EnergyIsAffineInCut) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 11;
    const auto g = testing::random_graph(n, 0.5, rng);
    const auto enc = encode_maxcut(g);
    for_each_assignment(n, [&](const SpinVector& s) {
      ASSERT_EQ(energy(enc.model, s),
                enc.energy_per_objective * cut_value(g, s) + enc.energy_constant);
    });
    EXPECT_LT(enc.energy_per_objective, 0.0);
  }
}

TEST(KnapsackInstance, Validation) {
  EXPECT_THROW((KnapsackInstance{{1}, {1, 2}, 3, {}}.validate()), DimensionError);
  EXPECT_THROW((KnapsackInstance{{0}, {1}, 3, {}}.validate()), InvalidArgument);
  EXPECT_THROW((KnapsackInstance{{1}, {1}, 0, {}}.validate()), InvalidArgument);
  EXPECT_THROW(encode_knapsack(KnapsackInstance{{1}, {1.5}, 3, {}}, 1.0), InvalidArgument);
  EXPECT_THROW(encode_knapsack(KnapsackInstance{{1}, {1}, 3, {}}, 0.0), InvalidArgument);
  EXPECT_THROW(encode_knapsack(KnapsackInstance{{1}, {1}, 3, {}}, -1.0), InvalidArgument);
}

TEST(EncodeKnapsack, SlackRegisterSize) {
  EXPECT_EQ(slack_bits(1), 1u);
  EXPECT_EQ(slack_bits(3), 2u);
  EXPECT_EQ(slack_bits(4), 3u);
  EXPECT_EQ(slack_bits(1000), 10u);
}

TEST(EncodeKnapsack, SpinLayoutAndTags) {
  const KnapsackInstance inst{{5, 6}, {3, 4}, 5};
  const auto enc = encode_knapsack(inst, 10.0);
  ASSERT_EQ(enc.model.size(), 2u + 3u + 1u);
  EXPECT_EQ(enc.var_map[0], (SpinTag{SpinRole::Item, 0}));
  EXPECT_EQ(enc.var_map[1], (SpinTag{SpinRole::Item, 1}));
  EXPECT_EQ(enc.var_map[2], (SpinTag{SpinRole::Slack, 0}));
  EXPECT_EQ(enc.var_map[4], (SpinTag{SpinRole::Slack, 2}));
  EXPECT_EQ(enc.ancilla(), std::optional<std::size_t>(5));
  EXPECT_FALSE(enc.model.has_field());
  EXPECT_EQ(enc.penalty, 10.0);
}

TEST(EncodeKnapsack, EnergyIsCostPlusPenalty) {
  const KnapsackInstance inst{{5, 6, 2}, {3, 4, 1}, 6};
  const double lambda = 3.0;
  const auto enc = encode_knapsack(inst, lambda);
  const std::size_t bits = slack_bits(inst.capacity);
  for_each_assignment(enc.model.size() - 1, [&](const SpinVector& s) {
    double value = 0, load = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      if (s[k] > 0) {
        value += inst.values[k];
        load += inst.weights[k];
      }
    }
    for (std::size_t b = 0; b < bits; ++b) {
      if (s[3 + b] > 0) load += std::ldexp(1.0, static_cast<int>(b));
    }
    const double expected = -value + lambda * (load - inst.capacity) * (load - inst.capacity);
    ASSERT_EQ(energy(enc.model, with_ancilla(s)), expected);
  });
}

TEST(EncodeKnapsack, OneItemIsSelected) {
  const KnapsackInstance inst{{5}, {3}, 3};
  const auto enc = encode_knapsack(inst, 10.0);
  const auto best = argmin_with_ancilla(enc.model);
  const auto sol = decode_knapsack(enc, best);
  EXPECT_EQ(sol.selected, std::vector<std::size_t>{0});
  EXPECT_TRUE(sol.feasible);
  EXPECT_EQ(energy(enc.model, best), -5.0);  // zero violation
}

TEST(EncodeKnapsack, TwoItemsPicksTheMoreValuable) {
  const KnapsackInstance inst{{6, 10}, {2, 2}, 2};
  const auto enc = encode_knapsack(inst, 100.0);
  const auto best = argmin_with_ancilla(enc.model);
  const auto sol = decode_knapsack(enc, best);
  EXPECT_EQ(sol.selected, std::vector<std::size_t>{1});
  EXPECT_EQ(sol.total_value, 10.0);
  EXPECT_EQ(sol.total_weight, 2.0);
  EXPECT_TRUE(sol.feasible);
}

TEST(EncodeKnapsack, TinyPenaltyStillBuildsAModel) {
  const KnapsackInstance inst{{6, 10}, {2, 2}, 2};
  const auto enc = encode_knapsack(inst, 1e-12);
  EXPECT_EQ(enc.model.size(), 2u + 2u + 1u);
}

TEST(DecodeKnapsack, EmptyAndOverweightSelections) {
  const KnapsackInstance inst{{6, 10}, {2, 2}, 3};
  const auto enc = encode_knapsack(inst, 1.0);
  const std::size_t n = enc.model.size();

  const auto none = decode_knapsack(enc, SpinVector::filled(n, -1));
  EXPECT_TRUE(none.selected.empty());
  EXPECT_EQ(none.total_value, 0.0);
  EXPECT_TRUE(none.feasible);

  const auto all = decode_knapsack(enc, SpinVector::filled(n, 1));
  EXPECT_EQ(all.selected.size(), 2u);
  EXPECT_FALSE(all.feasible);
  EXPECT_EQ(objective_value(enc, SpinVector::filled(n, 1)), 0.0);
  EXPECT_THROW(decode_knapsack(enc, SpinVector::filled(n - 1, 1)), DimensionError);
}

TEST(DecodeKnapsack, RejectsMaxCutEncoding) {
  const auto enc = encode_maxcut(MaxCutInstance{2, {{0, 1, 1.0}}});
  EXPECT_THROW(decode_knapsack(enc, SpinVector({1, 1})), InvalidArgument);
}

TEST(EncodeKnapsack, LargePenaltyGroundStateIsDpOptimal) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const auto inst = testing::random_knapsack(n, rng, 20, 8);
    const double vmax = *std::max_element(inst.values.begin(), inst.values.end());
    const auto enc = encode_knapsack(inst, vmax * static_cast<double>(n) + 1.0);
    const auto sol = decode_knapsack(enc, argmin_with_ancilla(enc.model));
    EXPECT_TRUE(sol.feasible);
    EXPECT_EQ(sol.total_value, knapsack_dp(inst).optimal_value);
  }
}

TEST(Encodings, ModelsSatisfyInvariants) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto enc = encode_knapsack(testing::random_knapsack(8, rng), 7.0);
    EXPECT_EQ(enc.var_map.size(), enc.model.size());
    for (std::size_t i = 0; i < enc.model.size(); ++i) {
      EXPECT_EQ(enc.model.coupling(i, i), 0.0);
      for (std::size_t j = 0; j < enc.model.size(); ++j) {
        EXPECT_EQ(enc.model.coupling(i, j), enc.model.coupling(j, i));
      }
    }
    const auto count = std::count_if(enc.var_map.begin(), enc.var_map.end(),
                                     [](const SpinTag& t) { return t.role == SpinRole::Ancilla; });
    EXPECT_EQ(count, 1);
  }
}

}  // namespace
}  // namespace sbm
