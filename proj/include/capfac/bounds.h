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

#ifndef CAPFAC_BOUNDS_H_
#define CAPFAC_BOUNDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "capfac/core_model.h"
#include "capfac/enumeration.h"
#include "capfac/mechanisms.h"
#include "capfac/welfare.h"

namespace capfac {

// Best ratio any incentive-compatible mechanism can guarantee:
// 2k/(k+1) for k <= ceil((n-1)/2), else max((n-1)/(k+1), 1).
// Throws InvalidArgument unless n >= 2 and 1 <= k <= n.
Rational DicLowerBound(int n, int k);

// Guaranteed ratio of the median mechanism: 2k/(k+1) for k <= floor((n+1)/2),
// else min(2k/(k+1), 1 + 2(n-k+1)/(3k-2n-2)), where the second term is
// ignored when its denominator is not positive. Throws DomainError if n < 5
// and InvalidArgument unless 1 <= k <= n.
Rational MedianUpperBound(int n, int k);

// A profitable misreport against the welfare-optimal mechanism. Agents are
// split into floor(n/k) groups of k plus a remainder group, group t sits at
// t/(floor(n/k)+1) except one agent at y_t - t*eps. Agent `agent` (the
// outlier of group 1) is then moved to y_1 - 3*eps and misreports y_1 - eps.
struct OptimalMisreport {
  Instance truthful;  // true locations, reported honestly
  Instance deviated;  // the same, with `agent` reporting `reported_location`
  int agent = 0;
  Location true_location;
  Location reported_location;
  Location truthful_site;
  Location deviating_site;
  // Both evaluated at the agent's true location.
  Rational truthful_utility;
  Rational deviating_utility;
  Rational gain;
  // True when the misreport is strictly profitable.
  bool confirmed = false;
};

// 1 / (4 (floor(n/k)+1) n).
Rational DefaultMisreportEpsilon(int n, int k);

// Throws DomainError unless 2 <= k <= n-1, or when eps is too large for the
// construction to stay strictly ordered inside (0, 1].
OptimalMisreport BuildOptimalMisreport(
    int n, int k, const std::optional<Rational>& epsilon = std::nullopt);

// One profile of the clustered lower-bound construction together with the
// output that uncompromisingness forces on it.
struct PinnedProfile {
  Instance instance;
  Location forced_site;
};

struct ClusterBoundReport {
  // Clustered profile first, then one profile per relocated agent.
  std::vector<PinnedProfile> profiles;
  // Whether the mechanism actually returned the forced site on every
  // profile.
  bool pinned = true;
  Location mechanism_site;
  Rational optimal_welfare;
  Rational mechanism_welfare;
  ApproximationRatio ratio;
  Rational bound;
};

inline Rational DefaultClusterEpsilon() { return Rational(1, 50); }

// Places n distinct agents inside (1/2 - eps/2, 1/2 + eps/2), reads off
// s = M(x), then moves agents below s to 0 and agents above s to 1 one at a
// time (all to one side when s lies outside the cluster). Reports the ratio
// realized on the final profile next to DicLowerBound(n, k). Throws
// InvalidArgument unless n >= 2, 1 <= k <= n and 0 < eps < 1.
ClusterBoundReport ClusterLowerBound(
    const MechanismFn& mechanism, int n, int k,
    const Rational& epsilon = DefaultClusterEpsilon());
ClusterBoundReport ClusterLowerBound(
    const MechanismSpec& mechanism, int n, int k,
    const Rational& epsilon = DefaultClusterEpsilon());

struct SearchOptions {
  std::uint64_t budget = DefaultBudget();
  int threads = 1;
  int refine_steps = 0;
};

struct WorstCaseResult {
  Instance instance;
  Location mechanism_site;
  Rational optimal_welfare;
  Rational mechanism_welfare;
  ApproximationRatio ratio;
  std::uint64_t profiles_evaluated = 0;
};

// Maximizes optimal/mechanism welfare over all grid profiles (sorted ones
// only, for anonymous mechanisms), then refines around the incumbent:
// each round halves the step and tries every coordinate within +-2 old
// steps. Ties keep the earliest profile. The result is a certified lower
// bound on the worst case. Throws BudgetExceeded when the grid scan does
// not fit the budget.
WorstCaseResult WorstCaseSearch(const MechanismSpec& mechanism, int n, int k,
                                const GridSpec& grid,
                                const SearchOptions& options = {});

struct CurveRow {
  int k = 0;
  Rational lower_bound;
  std::optional<Rational> upper_bound;       // n >= 5 only
  std::optional<ApproximationRatio> empirical;  // absent when over budget
  std::vector<Location> witness;
};

struct BoundCurve {
  int n = 0;
  std::vector<CurveRow> rows;
};

// Bound columns for k = 1..n plus the median's empirical worst case where
// the search fits the budget.
BoundCurve RatioCurve(int n, const GridSpec& grid,
                      const SearchOptions& options = {});

// Header "k,lower_bound,upper_bound,empirical,witness_profile", LF endings;
// the witness is a JSON array of rational strings in a quoted cell.
std::string CurveToCsv(const BoundCurve& curve);

}  // namespace capfac

#endif  // CAPFAC_BOUNDS_H_
