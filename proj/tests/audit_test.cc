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

#include "capfac/audit.h"

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "capfac/errors.h"
#include "oracles.h"

namespace capfac {
namespace {

using oracle::Pt;
using oracle::Pts;

MechanismFn Fn(const MechanismSpec& spec) { return AsFunction(spec); }

// Average of the reports: not a generalized median, defined everywhere.
Location Mean(std::span<const Location> x) {
  Rational total(0);
  for (const Location& v : x) total += v.value();
  return Location(total / static_cast<std::int64_t>(x.size()));
}

void ExpectSameAsOracle(const MechanismFn& fn, int n, int k, int q) {
  const AuditVerdict v = AuditDic(fn, n, k, GridSpec(q));
  const auto expected = oracle::FirstDicViolation(fn, n, k, q);
  ASSERT_EQ(v.passed, !expected.has_value());
  if (!expected) return;
  const DicWitness& w = *v.witness;
  EXPECT_EQ(w.agent, expected->agent);
  EXPECT_EQ(w.true_location, expected->own);
  EXPECT_EQ(w.deviation, expected->deviation);
  EXPECT_EQ(w.others_reports, expected->others_reports);
  EXPECT_EQ(w.others_true, expected->others_true);
  EXPECT_EQ(w.truthful_utility, expected->truthful);
  EXPECT_EQ(w.deviating_utility, expected->deviating);
  EXPECT_TRUE(VerifyDicWitness(fn, k, w));
}

TEST(AuditDicTest, MedianPasses) {
  const AuditVerdict v = AuditDic(MedianMechanism{}, 3, 2, GridSpec(6));
  EXPECT_TRUE(v.passed);
  EXPECT_FALSE(v.witness.has_value());
  EXPECT_EQ(v.instances_checked, 3u * 7 * 7 * 7 * 7 * 7 * 7);
}

TEST(AuditDicTest, MedianEncodingPassesForEveryCapacity) {
  const MechanismSpec g = GmmEncoding(MedianMechanism{}, 3);
  for (int k = 1; k <= 3; ++k) {
    EXPECT_TRUE(AuditDic(g, 3, k, GridSpec(4)).passed) << k;
  }
}

TEST(AuditDicTest, SnapDictatorFailsBelowFullCapacity) {
  for (int k = 1; k <= 3; ++k) {
    const AuditVerdict v =
        AuditDic(SnapDictatorMechanism{}, 4, k, GridSpec(8));
    ASSERT_FALSE(v.passed) << k;
    const DicWitness& w = *v.witness;
    EXPECT_EQ(w.agent, 1);
    EXPECT_EQ(w.true_location, Pt("3/8"));
    EXPECT_EQ(w.deviation, Pt("5/8"));
    EXPECT_EQ(w.truthful_site, Pt("1/4"));
    EXPECT_EQ(w.deviating_site, Pt("3/4"));
    EXPECT_EQ(w.truthful_utility, Rational(0));
    EXPECT_EQ(w.deviating_utility, Rational(5, 8));
    EXPECT_TRUE(VerifyDicWitness(Fn(SnapDictatorMechanism{}), k, w));
  }
}

TEST(AuditDicTest, SnapDictatorLosesServiceWithOthersAtQuarter) {
  // Everyone else truly at 1/4 and reporting it.
  DicWitness w;
  w.agent = 1;
  w.true_location = Pt("3/8");
  w.deviation = Pt("5/8");
  w.others_reports = Pts({"1/4", "1/4", "1/4"});
  w.others_true = w.others_reports;
  w.truthful_site = Pt("1/4");
  w.deviating_site = Pt("3/4");
  w.truthful_utility = Rational(0);
  w.deviating_utility = Rational(5, 8);
  for (int k = 1; k <= 3; ++k) {
    EXPECT_TRUE(VerifyDicWitness(Fn(SnapDictatorMechanism{}), k, w)) << k;
  }
  EXPECT_FALSE(VerifyDicWitness(Fn(SnapDictatorMechanism{}), 4, w));
}

TEST(AuditDicTest, SingleAgent) {
  EXPECT_TRUE(AuditDic(DictatorMechanism{1}, 1, 1, GridSpec(8)).passed);
  EXPECT_TRUE(AuditDic(SnapDictatorMechanism{}, 1, 1, GridSpec(8)).passed);
  EXPECT_TRUE(AuditDic(MedianMechanism{}, 1, 1, GridSpec(5)).passed);
  // Reporting the mirror image is not weakly closer.
  const MechanismFn mirror = [](std::span<const Location> x) {
    return Location(1 - x[0].value());
  };
  EXPECT_FALSE(AuditDic(mirror, 1, 1, GridSpec(4)).passed);
}

TEST(AuditDicTest, MatchesOracleOnAssortedMechanisms) {
  ExpectSameAsOracle(Fn(SnapDictatorMechanism{}), 3, 1, 4);
  ExpectSameAsOracle(Fn(SnapDictatorMechanism{2}), 3, 2, 4);
  ExpectSameAsOracle(Fn(MedianMechanism{}), 3, 2, 3);
  ExpectSameAsOracle(Mean, 2, 1, 4);
  ExpectSameAsOracle(Mean, 3, 2, 2);
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const TableMechanism t = TableMechanism::Random(2, GridSpec(3), rng);
    ExpectSameAsOracle(AsFunction(t), 2, 1, 3);
    const GmmSpec g = RandomGmm(3, GridSpec(2), rng);
    ExpectSameAsOracle(Fn(g), 3, 1 + trial % 3, 2);
  }
}

TEST(AuditDicTest, ParallelScanFindsSameWitness) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 5; ++trial) {
    const TableMechanism t = TableMechanism::Random(3, GridSpec(3), rng);
    AuditOptions serial;
    AuditOptions parallel;
    parallel.threads = 3;
    const AuditVerdict a = AuditDic(AsFunction(t), 3, 2, GridSpec(3), serial);
    const AuditVerdict b =
        AuditDic(AsFunction(t), 3, 2, GridSpec(3), parallel);
    ASSERT_EQ(a.passed, b.passed);
    EXPECT_EQ(a.instances_checked, b.instances_checked);
    if (a.witness) {
      EXPECT_EQ(a.witness->agent, b.witness->agent);
      EXPECT_EQ(a.witness->others_true, b.witness->others_true);
      EXPECT_EQ(a.witness->others_reports, b.witness->others_reports);
      EXPECT_EQ(a.witness->deviation, b.witness->deviation);
    }
  }
}

TEST(AuditDicTest, FailurePersistsOnFinerGrids) {
  for (int q : {2, 4, 8}) {
    EXPECT_FALSE(AuditDic(Mean, 2, 1, GridSpec(q)).passed) << q;
  }
  EXPECT_FALSE(AuditDic(SnapDictatorMechanism{}, 2, 1, GridSpec(16)).passed);
}

TEST(AuditDicTest, EnforcesBudgetAndShape) {
  AuditOptions tight;
  tight.budget = 1000;
  EXPECT_THROW(AuditDic(MedianMechanism{}, 3, 2, GridSpec(6), tight),
               BudgetExceeded);
  EXPECT_THROW(AuditDic(MedianMechanism{}, 3, 4, GridSpec(2)),
               InvalidArgument);
}

TEST(AuditDicTest, TruthfulOthersModeIsWeaker) {
  AuditOptions truthful;
  truthful.others = OthersMode::kTruthful;
  EXPECT_TRUE(
      AuditDic(MedianMechanism{}, 3, 2, GridSpec(4), truthful).passed);
  const AuditVerdict v =
      AuditDic(SnapDictatorMechanism{}, 4, 2, GridSpec(8), truthful);
  ASSERT_FALSE(v.passed);
  EXPECT_EQ(v.witness->others_true, v.witness->others_reports);
  EXPECT_TRUE(VerifyDicWitness(Fn(SnapDictatorMechanism{}), 2, *v.witness));
}

TEST(AuditAtCapacityNTest, SnapDictatorAndMedianPass) {
  EXPECT_TRUE(
      AuditDicAtCapacityN(SnapDictatorMechanism{}, 4, GridSpec(8)).passed);
  EXPECT_TRUE(AuditDicAtCapacityN(MedianMechanism{}, 3, GridSpec(6)).passed);
}

TEST(AuditAtCapacityNTest, MatchesFullAuditAtKEqualsN) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const TableMechanism t = TableMechanism::Random(2, GridSpec(3), rng);
    const AuditVerdict a = AuditDicAtCapacityN(AsFunction(t), 2, GridSpec(3));
    const AuditVerdict b = AuditDic(AsFunction(t), 2, 2, GridSpec(3));
    EXPECT_EQ(a.passed, b.passed);
    if (!a.passed) {
      EXPECT_TRUE(VerifyDicWitness(AsFunction(t), 2, *a.witness));
    }
  }
}

TEST(AuditAtCapacityNTest, FullCapacityFailuresAlsoFailBelowIt) {
  std::mt19937_64 rng(59);
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const TableMechanism t = TableMechanism::Random(3, GridSpec(2), rng);
    if (AuditDicAtCapacityN(AsFunction(t), 3, GridSpec(2)).passed) continue;
    ++checked;
    for (int k = 1; k < 3; ++k) {
      EXPECT_FALSE(AuditDic(AsFunction(t), 3, k, GridSpec(2)).passed);
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(EquivalenceTest, GmmsPassAndCompromisingTablesFail) {
  const EquivalenceSummary s =
      EquivalenceExperiment(3, 2, GridSpec(3), 8, /*seed=*/5);
  EXPECT_EQ(s.gmm_sampled, 8);
  EXPECT_EQ(s.gmm_dic_passed, 8);
  EXPECT_EQ(s.gmm_uncompromising_passed, 8);
  EXPECT_EQ(s.table_sampled, 8);
  EXPECT_EQ(s.table_dic_failed, 8);
  EXPECT_EQ(s.anomalies, 0);
}

TEST(EquivalenceTest, RequiresBindingCapacity) {
  EXPECT_THROW(EquivalenceExperiment(3, 3, GridSpec(2), 1, 1), DomainError);
}

TEST(AssembleProfileTest, InsertsAtAgentPosition) {
  EXPECT_EQ(AssembleProfile(2, Pt("1/2"), Pts({"0", "1"})),
            Pts({"0", "1/2", "1"}));
  EXPECT_EQ(AssembleProfile(1, Pt("1/2"), {}), Pts({"1/2"}));
}

}  // namespace
}  // namespace capfac
