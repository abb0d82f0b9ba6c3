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

#ifndef CAPFAC_ALLOC_EXT_H_
#define CAPFAC_ALLOC_EXT_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "capfac/enumeration.h"
#include "capfac/location.h"
#include "capfac/mechanisms.h"
#include "capfac/verdict.h"

namespace capfac {

// Facility site plus the explicit served set; bit i-1 of `served` is agent i.
struct Allocation {
  Location site;
  std::uint32_t served = 0;

  bool Serves(int agent) const { return (served >> (agent - 1)) & 1u; }
  friend bool operator==(const Allocation&, const Allocation&) = default;
};

std::vector<int> ServedAgents(const Allocation& allocation);

// A location-allocation mechanism given extensionally on domain^n, where the
// domain is a sorted list of distinct points. Entries are indexed like
// ProfileSpace(n, domain.size()) over point indices and may be missing.
class AllocationTable {
 public:
  static constexpr int kMaxAgents = 16;

  // Throws InvalidArgument on an unsorted domain, a wrong table size, or an
  // entry whose served set is empty, larger than `capacity`, or names a
  // nonexistent agent.
  AllocationTable(int agents, int capacity, std::vector<Location> domain,
                  std::vector<std::optional<Allocation>> entries);

  // Tabulates `rule` on every domain profile.
  static AllocationTable Build(
      int agents, int capacity, std::vector<Location> domain,
      const std::function<Allocation(std::span<const Location>)>& rule);

  int agents() const { return agents_; }
  int capacity() const { return capacity_; }
  const std::vector<Location>& domain() const { return domain_; }
  const ProfileSpace& space() const { return space_; }
  const std::vector<std::optional<Allocation>>& entries() const {
    return entries_;
  }

  // Throws DomainIncomplete if a report is off the domain or the entry is
  // missing, ArityMismatch on a wrong-length profile.
  const Allocation& At(std::span<const Location> reports) const;
  const Allocation& AtIndex(std::uint64_t index) const;

 private:
  int agents_;
  int capacity_;
  std::vector<Location> domain_;
  ProfileSpace space_;
  std::vector<std::optional<Allocation>> entries_;
};

// Whether agent's location differs from every other agent's.
bool IsIIdentifiable(std::span<const Location> profile, int agent);

// Allocation rules used as examples and in the revelation-gap check.

// Site from `location_rule`; serves the k reporters closest to it, breaking
// distance ties by lower report and then by lower id among equal reports.
AllocationTable ClosestReportersTable(const MechanismFn& location_rule,
                                      int agents, int capacity,
                                      std::vector<Location> domain);
// Site from `location_rule`; always serves agents 1..k.
AllocationTable FixedServedTable(const MechanismFn& location_rule, int agents,
                                 int capacity, std::vector<Location> domain);
// Site at agent 1's report; always serves agents 1..k.
AllocationTable DictatorialAllocationTable(int agents, int capacity,
                                           std::vector<Location> domain);

struct AnonymityWitness {
  std::vector<Location> profile;
  std::vector<Location> swapped;
  int agent = 0;  // the identifiable agent i
  int other = 0;  // j, who takes over x_i in `swapped`
  bool agent_served = false;
  bool other_served_after_swap = false;
};

using AnonymityVerdict = Verdict<AnonymityWitness>;

// For every i-identifiable domain profile x and every j != i, swapping x_i
// and x_j must carry i's membership in A_x over to j's membership in A_x'.
// Scan order: profiles lexicographically, then i, then j.
AnonymityVerdict CheckAllocationAnonymous(const AllocationTable& mechanism);

struct AllocDicWitness {
  int agent = 0;
  Location true_location;
  Location deviation;
  std::vector<Location> others_reports;
  std::vector<Location> others_true;
  Allocation truthful;
  Allocation deviating;
  Rational truthful_utility;
  Rational deviating_utility;
};

using AllocDicVerdict = Verdict<AllocDicWitness>;

// 1 - d(s, x_i) when served, else 0.
Rational AllocationUtility(const Allocation& allocation, int agent,
                           const Location& true_location);

// Incentive audit over the table's domain in the same quantification order
// as AuditDic. Utility does not depend on the others' true locations, so the
// first violation always has them at the lowest domain profile.
AllocDicVerdict AuditDicAlloc(const AllocationTable& mechanism);

bool VerifyAllocDicWitness(const AllocationTable& mechanism,
                           const AllocDicWitness& witness);

// Replay of the impossibility argument on one mechanism. At the profile with
// everyone at 3/4, i* is the lowest served id and j* the lowest unserved id;
// j* then reports 1/2. If j* is served there, j* gains by that misreport
// (case 1); otherwise i* at 1/2 gains by reporting 3/4 (case 2).
struct ImpossibilityReplay {
  int i_star = 0;
  int j_star = 0;
  Allocation all_high;       // at (3/4, ..., 3/4)
  Allocation j_star_low;     // at j* -> 1/2, others 3/4
  int case_number = 0;       // 1 or 2
  AllocDicWitness witness;
  // Strict gain, confirmed by recomputation from the table.
  bool reverified = false;
};

// Throws DomainError if capacity >= agents or the domain misses 1/2 or 3/4.
ImpossibilityReplay ReplayImpossibility(const AllocationTable& mechanism);

struct AllocationSweep {
  int agents = 0;
  int capacity = 0;
  std::vector<Location> domain;
  // (site, served-set) tables counted, and the closed-form number of them.
  std::uint64_t tables_enumerated = 0;
  std::uint64_t tables_closed_form = 0;
  std::uint64_t served_tables = 0;
  std::uint64_t anonymous_served_tables = 0;
  // Full (site, served-set) tables whose served part is anonymous.
  std::uint64_t anonymous_tables = 0;
  std::uint64_t anonymous_dic_passing = 0;
};

// Enumerates every table with sites and served sets drawn from `domain` and
// the nonempty subsets of size <= capacity. Anonymity depends only on the
// served sets, so sites are enumerated (and audited) only under anonymous
// served-set tables; the others are counted without being visited. Throws
// BudgetExceeded when visited served-set and full tables exceed `budget`,
// and InvalidArgument for more than 4 agents.
AllocationSweep SweepAnonymousAllocations(int agents, int capacity,
                                          std::vector<Location> domain,
                                          std::uint64_t budget,
                                          int threads = 1);

// The median location rule with equilibrium service passes AuditDic while
// its closest-reporters tabulation fails AuditDicAlloc.
struct RevelationGap {
  bool location_rule_passes = false;
  bool table_anonymous = false;
  bool table_fails = false;
  std::optional<AllocDicWitness> witness;
};

RevelationGap CheckRevelationGap(int agents, int capacity,
                                 const GridSpec& grid);

}  // namespace capfac

#endif  // CAPFAC_ALLOC_EXT_H_
