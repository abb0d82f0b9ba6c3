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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Criterion 11 reruns 1-10 and compares their serialized
// artifacts byte for byte.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "capfac/alloc_ext.h"
#include "capfac/audit.h"
#include "capfac/bounds.h"
#include "capfac/core_model.h"
#include "capfac/enumeration.h"
#include "capfac/json_io.h"
#include "capfac/mechanisms.h"
#include "capfac/welfare.h"
#include "oracles.h"

namespace capfac {
namespace {

using oracle::Pt;
using oracle::Pts;

// Slack allowed below the lower-bound targets of criteria 7 and 8.
const Rational kSearchSlack(1, 20);

struct Outcome {
  bool passed = false;
  std::string detail;
  Json artifact;
};

std::vector<Instance> SeededInstances(std::uint64_t seed, int count,
                                      int max_agents, int q) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const int n = 1 + static_cast<int>(UniformBelow(rng, max_agents));
    const int k = 1 + static_cast<int>(UniformBelow(rng, n));
    out.emplace_back(oracle::RandomGridProfile(rng, n, q), k);
  }
  return out;
}

// Served set of one subgame equilibrium: the k highest-priority travellers.
// Agents served at distance exactly 1 are indifferent between travelling and
// staying, so they are left out of the comparison on both sides.
std::vector<int> EquilibriumServed(const Instance& instance, const Location& s,
                                   const ActionProfile& actions) {
  const Priority priority = ComputePriority(instance, s);
  std::vector<int> served;
  int admitted = 0;
  for (int agent : priority.order()) {
    if (actions[agent - 1] != Action::kTravel) continue;
    if (admitted++ >= instance.capacity()) break;
    served.push_back(agent);
  }
  std::sort(served.begin(), served.end());
  return served;
}

std::vector<int> WithoutIndifferent(const Instance& instance,
                                    const Location& s,
                                    std::vector<int> served) {
  std::erase_if(served, [&](int agent) {
    return Distance(instance.location(agent), s) == Rational(1);
  });
  return served;
}

Outcome EquilibriumEquivalence() {
  const GridSpec grid(6);
  int checked = 0;
  int mismatches = 0;
  Json first_mismatch;
  for (const Instance& instance : SeededInstances(101, 500, 5, 6)) {
    for (const Location& s : grid.points()) {
      const EquilibriumOutcome resolved = ResolveEquilibrium(instance, s);
      const std::vector<int> expected =
          WithoutIndifferent(instance, s, resolved.served);
      const auto equilibria = EnumerateSubgameEquilibria(instance, s);
      bool ok = !equilibria.empty();
      for (const ActionProfile& eq : equilibria) {
        ok = ok && SubgamePayoffs(instance, s, eq) == resolved.utilities &&
             WithoutIndifferent(instance, s,
                                EquilibriumServed(instance, s, eq)) ==
                 expected;
      }
      ++checked;
      if (!ok && mismatches++ == 0) {
        first_mismatch = {{"instance", ToJson(instance)}, {"s", ToJson(s)}};
      }
    }
  }
  std::ostringstream detail;
  detail << checked << " (instance, site) pairs, " << mismatches
         << " mismatches";
  return {mismatches == 0, detail.str(),
          {{"pairs", checked},
           {"mismatches", mismatches},
           {"first_mismatch", first_mismatch}}};
}

Outcome SinglePeakedness() {
  const GridSpec grid(6);
  int curves = 0;
  int violations = 0;
  for (const Instance& instance : SeededInstances(101, 500, 5, 6)) {
    for (int agent = 1; agent <= instance.size(); ++agent) {
      const std::vector<Rational> u =
          UtilityCurve(instance, agent, grid.points());
      const Location& x = instance.location(agent);
      for (int j = 0; j + 1 < grid.size(); ++j) {
        const bool left_of_peak = grid.point(j + 1) <= x;
        const bool right_of_peak = x <= grid.point(j);
        if ((left_of_peak && u[j] > u[j + 1]) ||
            (right_of_peak && u[j] < u[j + 1])) {
          ++violations;
        }
      }
      ++curves;
    }
  }
  std::ostringstream detail;
  detail << curves << " curves, " << violations << " violations";
  return {violations == 0, detail.str(),
          {{"curves", curves}, {"violations", violations}}};
}

Outcome SnapDictatorAudit() {
  const MechanismSpec snap = SnapDictatorMechanism{};
  const MechanismFn fn = AsFunction(snap);
  const GridSpec grid(8);
  bool passed = true;
  std::ostringstream detail;
  Json artifact;

  const AuditVerdict full = AuditDicAtCapacityN(snap, 4, grid);
  passed = passed && full.passed;
  detail << "k=4 " << (full.passed ? "passes" : "fails");
  artifact["capacity_n"] = ToJson(full);

  // The profile from the worked example: agent 1 at 3/8, everyone else
  // truthfully at 1/4. Snapping sends the facility to 1/4, where the three
  // others crowd agent 1 out; reporting 5/8 moves it to 3/4.
  const std::vector<Location> truth = Pts({"3/8", "1/4", "1/4", "1/4"});
  std::vector<Location> lie = truth;
  lie[0] = Pt("5/8");
  for (int k = 1; k <= 3; ++k) {
    const AuditVerdict v = AuditDic(snap, 4, k, grid);
    artifact["k" + std::to_string(k)] = ToJson(v);
    const bool witness_gain =
        !v.passed && v.witness &&
        v.witness->deviating_utility - v.witness->truthful_utility ==
            Rational(5, 8) &&
        v.witness->true_location == Pt("3/8") &&
        VerifyDicWitness(fn, k, *v.witness);

    DicWitness example;
    example.agent = 1;
    example.true_location = truth[0];
    example.deviation = lie[0];
    example.others_reports = {truth.begin() + 1, truth.end()};
    example.others_true = example.others_reports;
    example.truthful_site = fn(truth);
    example.deviating_site = fn(lie);
    example.truthful_utility =
        EquilibriumUtility(truth, k, 1, example.truthful_site);
    example.deviating_utility =
        EquilibriumUtility(truth, k, 1, example.deviating_site);
    const Rational gain =
        example.deviating_utility - example.truthful_utility;
    const bool example_ok =
        gain == Rational(5, 8) && VerifyDicWitness(fn, k, example);
    artifact["example_k" + std::to_string(k)] = ToJson(example);

    passed = passed && witness_gain && example_ok;
    detail << "; k=" << k << " "
           << (v.passed ? "passes" : "fails") << " gain "
           << (v.witness ? FormatRational(v.witness->deviating_utility -
                                          v.witness->truthful_utility)
                         : "-")
           << ", example gain " << FormatRational(gain);
  }
  return {passed, detail.str(), artifact};
}

Outcome GmmEquivalence() {
  const EquivalenceSummary s =
      EquivalenceExperiment(3, 2, GridSpec(4), 100, 2026);
  std::ostringstream detail;
  detail << s.gmm_dic_passed << "/" << s.gmm_sampled << " GMMs pass, "
         << s.table_dic_failed << "/" << s.table_sampled
         << " non-uncompromising tables fail";
  const bool passed = s.gmm_sampled == 100 && s.gmm_dic_passed == 100 &&
                      s.table_sampled == 100 && s.table_dic_failed == 100;
  return {passed, detail.str(), ToJson(s)};
}

Outcome OptimumAgainstFineGrid() {
  const GridSpec fine(60);
  int violations = 0;
  int unresolved = 0;
  int mismatches = 0;
  for (const Instance& instance : SeededInstances(505, 300, 8, 60)) {
    const CheckedOptimum checked = OptimalLocationChecked(instance, fine);
    const auto [site, grid_welfare] = oracle::GridOptimum(
        instance.locations(), instance.capacity(), fine.denominator());
    if (checked.structure_violation) {
      ++violations;
      if (checked.solution.welfare < checked.grid_best.welfare) ++unresolved;
    }
    if (checked.solution.welfare != grid_welfare ||
        Welfare(instance, checked.solution.site) != grid_welfare) {
      ++mismatches;
    }
  }
  std::ostringstream detail;
  detail << "300 instances, " << mismatches << " welfare mismatches, "
         << violations << " structure diagnostics (" << unresolved
         << " without fallback)";
  return {mismatches == 0 && unresolved == 0, detail.str(),
          {{"mismatches", mismatches},
           {"diagnostics", violations},
           {"unresolved", unresolved}}};
}

Outcome MisreportWitness() {
  const OptimalMisreport m = BuildOptimalMisreport(4, 2, Rational(1, 100));
  const Rational target(99, 100);
  std::ostringstream detail;
  detail << "truthful utility " << FormatRational(m.truthful_utility)
         << ", deviating utility " << FormatRational(m.deviating_utility)
         << " (required 0 and " << FormatRational(target) << ")";
  return {m.truthful_utility == 0 && m.deviating_utility == target,
          detail.str(), ToJson(m)};
}

Outcome MedianSearch() {
  SearchOptions options;
  options.refine_steps = 3;
  const GridSpec grid(8);
  bool passed = true;
  std::ostringstream detail;
  Json artifact;
  const std::pair<int, Rational> targets[] = {{2, Rational(4, 3)},
                                              {3, Rational(3, 2)}};
  for (const auto& [k, target] : targets) {
    const WorstCaseResult r =
        WorstCaseSearch(MedianMechanism{}, 5, k, grid, options);
    const Rational floor = target - kSearchSlack;
    const bool ok = r.ratio >= ApproximationRatio::Finite(floor);
    passed = passed && ok;
    if (k != 2) detail << "; ";
    detail << "k=" << k << " ratio " << r.ratio.ToString() << " vs >= "
           << FormatRational(floor);
    artifact["k" + std::to_string(k)] = ToJson(r);
  }
  return {passed, detail.str(), artifact};
}

Outcome BoundSandwich() {
  bool passed = true;
  std::ostringstream detail;
  Json artifact;
  const std::pair<int, int> settings[] = {{5, 8}, {10, 4}};
  for (const auto& [n, q] : settings) {
    const BoundCurve curve = RatioCurve(n, GridSpec(q));
    artifact["n" + std::to_string(n)] = CurveToCsv(curve);
    int bad = 0;
    for (const CurveRow& row : curve.rows) {
      const bool ok =
          row.empirical && row.upper_bound &&
          *row.empirical >=
              ApproximationRatio::Finite(row.lower_bound - kSearchSlack) &&
          *row.empirical <= ApproximationRatio::Finite(*row.upper_bound);
      if (!ok) {
        ++bad;
        detail << "n=" << n << " k=" << row.k << " outside; ";
      }
    }
    passed = passed && bad == 0;
    detail << "n=" << n << " q=" << q << ": " << curve.rows.size() - bad
           << "/" << curve.rows.size() << " rows inside";
    if (n == 5) detail << "; ";
  }
  return {passed, detail.str(), artifact};
}

Outcome CurveSpotValues() {
  SearchOptions options;
  options.budget = 1'000'000;  // the n=100 search is skipped, as in the CLI
  const BoundCurve curve = RatioCurve(100, GridSpec(8), options);
  struct Spot {
    int k;
    Rational lower;
    Rational upper;
  };
  const Spot spots[] = {{1, Rational(1), Rational(1)},
                        {25, Rational(25, 13), Rational(25, 13)},
                        {50, Rational(100, 51), Rational(100, 51)},
                        {75, Rational(99, 76), Rational(75, 38)},
                        {100, Rational(1), Rational(50, 49)}};
  bool passed = curve.rows.size() == 100;
  std::ostringstream detail;
  for (const Spot& spot : spots) {
    const CurveRow& row = curve.rows.at(spot.k - 1);
    const bool ok = row.k == spot.k && row.lower_bound == spot.lower &&
                    row.upper_bound == spot.upper;
    passed = passed && ok;
    detail << (spot.k == 1 ? "" : "; ") << "k=" << spot.k << " "
           << FormatRational(row.lower_bound) << ".."
           << (row.upper_bound ? FormatRational(*row.upper_bound) : "-")
           << (ok ? "" : " MISMATCH");
  }
  return {passed, detail.str(), CurveToCsv(curve)};
}

Outcome AllocationSweepCriterion() {
  const AllocationSweep sweep = SweepAnonymousAllocations(
      3, 2, Pts({"1/2", "3/4"}), DefaultBudget());
  std::ostringstream detail;
  detail << sweep.anonymous_tables << " anonymous tables of "
         << sweep.tables_enumerated << ", " << sweep.anonymous_dic_passing
         << " pass DIC";
  const bool passed =
      sweep.anonymous_tables > 0 && sweep.anonymous_dic_passing == 0 &&
      sweep.tables_enumerated == sweep.tables_closed_form;
  return {passed, detail.str(), ToJson(sweep)};
}

using Criterion = std::function<Outcome()>;

struct Entry {
  int number;
  const char* name;
  Criterion run;
};

const std::vector<Entry>& Criteria() {
  static const std::vector<Entry> kCriteria = {
      {1, "equilibrium oracle equivalence", EquilibriumEquivalence},
      {2, "utility single-peakedness", SinglePeakedness},
      {3, "snap dictator audit", SnapDictatorAudit},
      {4, "GMM / uncompromising sampling", GmmEquivalence},
      {5, "optimal location vs 1/60 grid", OptimumAgainstFineGrid},
      {6, "optimal-location misreport witness", MisreportWitness},
      {7, "median worst-case search", MedianSearch},
      {8, "median bound sandwich", BoundSandwich},
      {9, "n=100 bound curve spot values", CurveSpotValues},
      {10, "anonymous allocation sweep", AllocationSweepCriterion},
  };
  return kCriteria;
}

Outcome Guarded(const Criterion& run) {
  try {
    return run();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what(), nullptr};
  }
}

void Report(int number, const char* name, const Outcome& outcome,
            double seconds) {
  std::printf("%s criterion %d (%s): %s [%.1fs]\n",
              outcome.passed ? "PASS" : "FAIL", number, name,
              outcome.detail.c_str(), seconds);
  std::fflush(stdout);
}

int Main() {
  using Clock = std::chrono::steady_clock;
  bool all_passed = true;
  std::vector<std::string> artifacts;
  for (const Entry& entry : Criteria()) {
    const auto start = Clock::now();
    const Outcome outcome = Guarded(entry.run);
    const std::chrono::duration<double> elapsed = Clock::now() - start;
    Report(entry.number, entry.name, outcome, elapsed.count());
    all_passed = all_passed && outcome.passed;
    artifacts.push_back(DumpJson(outcome.artifact));
  }

  const auto start = Clock::now();
  int differing = 0;
  std::ostringstream which;
  for (std::size_t i = 0; i < Criteria().size(); ++i) {
    const std::string again = DumpJson(Guarded(Criteria()[i].run).artifact);
    if (again != artifacts[i]) {
      which << " " << Criteria()[i].number;
      ++differing;
    }
  }
  Outcome determinism;
  determinism.passed = differing == 0;
  determinism.detail = differing == 0
                           ? "artifacts of criteria 1-10 byte-identical"
                           : "artifacts differ for criteria" + which.str();
  const std::chrono::duration<double> elapsed = Clock::now() - start;
  Report(11, "determinism", determinism, elapsed.count());
  all_passed = all_passed && determinism.passed;
  return all_passed ? 0 : 1;
}

}  // namespace
}  // namespace capfac

int main() { return capfac::Main(); }
