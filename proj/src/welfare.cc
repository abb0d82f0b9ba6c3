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

#include <algorithm>

namespace capfac {

ApproximationRatio ApproximationRatio::Of(const Rational& optimal,
                                          const Rational& achieved) {
  if (achieved == 0) return Infinite();
  return Finite(optimal / achieved);
}

ApproximationRatio ApproximationRatio::Finite(const Rational& value) {
  ApproximationRatio r;
  r.value_ = value;
  return r;
}

ApproximationRatio ApproximationRatio::Infinite() {
  ApproximationRatio r;
  r.infinite_ = true;
  r.value_ = 0;
  return r;
}

std::string ApproximationRatio::ToString() const {
  return infinite_ ? "inf" : FormatRational(value_);
}

std::strong_ordering operator<=>(const ApproximationRatio& a,
                                 const ApproximationRatio& b) {
  if (a.infinite_ || b.infinite_) {
    return static_cast<int>(a.infinite_) <=> static_cast<int>(b.infinite_);
  }
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (b.value_ < a.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational Welfare(const Instance& instance, const Location& s) {
  const EquilibriumOutcome outcome = ResolveEquilibrium(instance, s);
  Rational total(0);
  for (int agent : outcome.served) total += outcome.utilities[agent - 1];
  return total;
}

OptimalSolution OptimalLocation(const Instance& instance) {
  std::vector<Location> sorted = instance.locations();
  std::sort(sorted.begin(), sorted.end());
  const int n = instance.size();
  const int window = std::min(n, instance.capacity());
  const int median_offset = (window + 1) / 2 - 1;

  OptimalSolution best{sorted[median_offset],
                       Welfare(instance, sorted[median_offset])};
  for (int start = 1; start + window <= n; ++start) {
    const Location& candidate = sorted[start + median_offset];
    if (candidate == sorted[start - 1 + median_offset]) continue;
    const Rational w = Welfare(instance, candidate);
    if (w > best.welfare) best = {candidate, w};
  }
  return best;
}

CheckedOptimum OptimalLocationChecked(const Instance& instance,
                                      const GridSpec& oracle_grid) {
  CheckedOptimum checked;
  checked.solution = OptimalLocation(instance);
  checked.grid_best = {oracle_grid.point(0),
                       Welfare(instance, oracle_grid.point(0))};
  for (int i = 1; i < oracle_grid.size(); ++i) {
    const Rational w = Welfare(instance, oracle_grid.point(i));
    if (w > checked.grid_best.welfare) {
      checked.grid_best = {oracle_grid.point(i), w};
    }
  }
  if (checked.grid_best.welfare > checked.solution.welfare) {
    checked.structure_violation = true;
    checked.diagnostic =
        "grid point " + checked.grid_best.site.ToString() + " reaches " +
        FormatRational(checked.grid_best.welfare) +
        " but the best window candidate " +
        checked.solution.site.ToString() + " reaches only " +
        FormatRational(checked.solution.welfare);
    checked.solution = checked.grid_best;
  }
  return checked;
}

WelfareReport RatioReport(const Instance& instance,
                          const MechanismFn& mechanism) {
  WelfareReport report;
  report.mechanism_location = mechanism(instance.locations());
  report.mechanism_welfare = Welfare(instance, report.mechanism_location);
  const OptimalSolution opt = OptimalLocation(instance);
  report.optimal_location = opt.site;
  report.optimal_welfare = opt.welfare;
  report.ratio =
      ApproximationRatio::Of(report.optimal_welfare, report.mechanism_welfare);
  return report;
}

WelfareReport RatioReport(const Instance& instance,
                          const MechanismSpec& mechanism) {
  return RatioReport(instance, AsFunction(mechanism));
}

}  // namespace capfac
