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

#ifndef CAPFAC_AUDIT_H_
#define CAPFAC_AUDIT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "capfac/enumeration.h"
#include "capfac/location.h"
#include "capfac/mechanisms.h"
#include "capfac/verdict.h"

namespace capfac {

// A profitable misreport: with the others reporting `others_reports` and
// truly located at `others_true`, agent `agent` at `true_location` gains by
// reporting `deviation` instead of the truth.
struct DicWitness {
  int agent = 0;
  Location true_location;
  Location deviation;
  // Profiles of the other agents in id order, skipping `agent`.
  std::vector<Location> others_reports;
  std::vector<Location> others_true;
  Location truthful_site;
  Location deviating_site;
  Rational truthful_utility;
  Rational deviating_utility;
};

using AuditVerdict = Verdict<DicWitness>;

// Which true locations of the other agents an audit quantifies over.
enum class OthersMode {
  // Every grid profile, independently of what the others report. This is
  // the incentive-compatibility notion the characterization is about.
  kArbitrary,
  // Others are truthful (x_{-i} = reports). Exploration only; it is a weaker
  // requirement and passing it says nothing about the characterization.
  kTruthful,
};

struct AuditOptions {
  std::uint64_t budget = DefaultBudget();
  int threads = 1;
  OthersMode others = OthersMode::kArbitrary;
};

// Inserts `own` at position `agent` among the other agents' entries.
std::vector<Location> AssembleProfile(int agent, const Location& own,
                                      std::span<const Location> others);

// Exhaustive incentive-compatibility audit over grid quadruples
// (x_i, x_i', reports of others, true locations of others): passes iff no
// agent ever strictly gains by misreporting. Scan order is agents ascending,
// then x_i, x_i', others' reports, others' true locations, each
// lexicographically on the grid; the first violation is the witness, also
// under parallel execution. The logical size n (q+1)^(2n) is checked
// against the budget (BudgetExceeded).
AuditVerdict AuditDic(const MechanismFn& mechanism, int n, int k,
                      const GridSpec& grid, const AuditOptions& options = {});
AuditVerdict AuditDic(const MechanismSpec& mechanism, int n, int k,
                      const GridSpec& grid, const AuditOptions& options = {});

// The same audit at k = n, where every agent is always served and utility
// is 1 - d(output, x_i) regardless of where the others are. Quantifies
// (x_i, x_i', others' reports); witnesses report the others as truthful.
AuditVerdict AuditDicAtCapacityN(const MechanismFn& mechanism, int n,
                                 const GridSpec& grid,
                                 const AuditOptions& options = {});
AuditVerdict AuditDicAtCapacityN(const MechanismSpec& mechanism, int n,
                                 const GridSpec& grid,
                                 const AuditOptions& options = {});

// Recomputes both sites and both utilities from scratch and confirms the
// strict gain and the recorded values.
bool VerifyDicWitness(const MechanismFn& mechanism, int k,
                      const DicWitness& witness);

struct EquivalenceSummary {
  int gmm_sampled = 0;
  int gmm_dic_passed = 0;
  int gmm_uncompromising_passed = 0;
  int table_sampled = 0;
  int table_dic_failed = 0;
  // Random tables that happened to pass the uncompromising check and were
  // redrawn.
  int table_redraws = 0;
  int anomalies = 0;
  std::vector<std::string> anomaly_notes;
};

// Samples `samples` random explicit GMMs (thresholds on the grid) and
// `samples` random grid table mechanisms that fail the uncompromising check,
// and audits all of them at capacity k < n. Every GMM must pass and every
// table must fail; anything else is counted as an anomaly. Throws
// DomainError unless 1 <= k < n.
EquivalenceSummary EquivalenceExperiment(int n, int k, const GridSpec& grid,
                                         int samples, std::uint64_t seed,
                                         const AuditOptions& options = {});

}  // namespace capfac

#endif  // CAPFAC_AUDIT_H_
