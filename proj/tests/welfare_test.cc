// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "capfac/welfare.h"

#include <random>

#include <gtest/gtest.h>

#include "oracles.h"

namespace capfac {
namespace {

using oracle::Pt;
using oracle::Pts;

TEST(WelfareTest, SumsServedUtilities) {
  EXPECT_EQ(Welfare(Instance(Pts({"0", "0", "1"}), 2), Pt("0")), Rational(2));
  EXPECT_EQ(Welfare(Instance(Pts({"0", "0", "1"}), 3), Pt("0")), Rational(2));
  // 17/20 + 19/20 from the two served agents.
  EXPECT_EQ(Welfare(Instance(Pts({"0.2", "0.4", "0.9"}), 2), Pt("7/20")),
            Rational(9, 5));
}

TEST(WelfareTest, MatchesOracleOnRandomInstances) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(UniformBelow(rng, 6));
    const int k = 1 + static_cast<int>(UniformBelow(rng, n));
    const oracle::Profile x = oracle::RandomGridProfile(rng, n, 12);
    const Location s = oracle::RandomGridProfile(rng, 1, 12)[0];
    EXPECT_EQ(Welfare(Instance(x, k), s), oracle::WelfareAt(x, k, s));
  }
}

TEST(OptimalLocationTest, SmallCases) {
  const OptimalSolution a = OptimalLocation(Instance(Pts({"0", "0", "1"}), 2));
  EXPECT_EQ(a.site, Pt("0"));
  EXPECT_EQ(a.welfare, Rational(2));
  const OptimalSolution b = OptimalLocation(Instance(Pts({"2/7"}), 1));
  EXPECT_EQ(b.site, Pt("2/7"));
  EXPECT_EQ(b.welfare, Rational(1));
  // Nothing on a fine grid beats the window optimum.
  for (int q = 1; q <= 12; ++q) {
    EXPECT_LE(oracle::GridOptimum(Pts({"0", "0", "1"}), 2, q).second,
              Rational(2));
  }
}

TEST(OptimalLocationTest, FullCapacityPicksMedian) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(UniformBelow(rng, 7));
    const oracle::Profile x = oracle::RandomGridProfile(rng, n, 20);
    const OptimalSolution opt = OptimalLocation(Instance(x, n));
    EXPECT_EQ(opt.welfare, oracle::WelfareAt(x, n, oracle::LowerMedian(x)));
  }
}

TEST(OptimalLocationTest, EqualsGridOptimumOnRandomInstances) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 1 + static_cast<int>(UniformBelow(rng, 8));
    const int k = 1 + static_cast<int>(UniformBelow(rng, n));
    const oracle::Profile x = oracle::RandomGridProfile(rng, n, 60);
    const Instance instance(x, k);
    const OptimalSolution opt = OptimalLocation(instance);
    EXPECT_EQ(opt.welfare, oracle::GridOptimum(x, k, 60).second);
    EXPECT_EQ(opt.welfare, oracle::BestAgentSiteWelfare(x, k));
    EXPECT_EQ(Welfare(instance, opt.site), opt.welfare);
    const CheckedOptimum checked =
        OptimalLocationChecked(instance, GridSpec(60));
    EXPECT_FALSE(checked.structure_violation) << checked.diagnostic;
    EXPECT_EQ(checked.solution.welfare, opt.welfare);
  }
}

TEST(OptimalLocationTest, CheckedFallsBackOnlyWhenGridWins) {
  // Off-grid agents: the grid can only tie or lose against the windows.
  const Instance instance(Pts({"1/7", "2/7", "6/7"}), 2);
  const CheckedOptimum checked = OptimalLocationChecked(instance, GridSpec(5));
  EXPECT_FALSE(checked.structure_violation);
  EXPECT_LE(checked.grid_best.welfare, checked.solution.welfare);
}

TEST(ApproximationRatioTest, InfinityIsLargest) {
  const auto inf = ApproximationRatio::Infinite();
  const auto two = ApproximationRatio::Finite(Rational(2));
  EXPECT_GT(inf, two);
  EXPECT_LT(ApproximationRatio::Finite(Rational(4, 3)), two);
  EXPECT_EQ(ApproximationRatio::Of(Rational(1), Rational(0)), inf);
  EXPECT_EQ(inf.ToString(), "inf");
  EXPECT_EQ(ApproximationRatio::Of(Rational(4), Rational(3)).ToString(),
            "4/3");
}

TEST(RatioReportTest, MedianMatchesOptimumOnCoincidentAgents) {
  const WelfareReport r =
      RatioReport(Instance(Pts({"0", "0", "1"}), 2), MedianMechanism{});
  EXPECT_EQ(r.mechanism_location, Pt("0"));
  EXPECT_EQ(r.mechanism_welfare, Rational(2));
  EXPECT_EQ(r.optimal_welfare, Rational(2));
  EXPECT_EQ(r.ratio, ApproximationRatio::Finite(Rational(1)));
}

TEST(RatioReportTest, MedianOnSpreadProfile) {
  const oracle::Profile x = Pts({"0", "49/100", "1/2", "51/100", "1"});
  const WelfareReport r = RatioReport(Instance(x, 2), MedianMechanism{});
  EXPECT_EQ(r.mechanism_location, Pt("1/2"));
  EXPECT_EQ(r.mechanism_welfare, Rational(199, 100));
  EXPECT_EQ(r.optimal_welfare, oracle::GridOptimum(x, 2, 100).second);
  EXPECT_EQ(r.ratio, ApproximationRatio::Finite(Rational(1)));
}

TEST(RatioReportTest, ZeroWelfareIsInfinite) {
  const WelfareReport r = RatioReport(Instance(Pts({"1", "1", "1"}), 1),
                                      ConstantMechanism{Pt("0")});
  EXPECT_EQ(r.mechanism_welfare, Rational(0));
  EXPECT_TRUE(r.ratio.infinite());
}

}  // namespace
}  // namespace capfac
