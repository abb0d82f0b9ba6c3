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

#ifndef CAPFAC_WELFARE_H_
#define CAPFAC_WELFARE_H_

#include <compare>
#include <optional>
#include <string>

#include "capfac/core_model.h"
#include "capfac/enumeration.h"
#include "capfac/mechanisms.h"

namespace capfac {

// Pi* / Pi_M, or +infinity when the mechanism's welfare is zero. Infinite
// ratios compare above every finite one so searches can rank them.
class ApproximationRatio {
 public:
  static ApproximationRatio Of(const Rational& optimal,
                               const Rational& achieved);
  static ApproximationRatio Finite(const Rational& value);
  static ApproximationRatio Infinite();

  bool infinite() const { return infinite_; }
  // Meaningful only when finite.
  const Rational& value() const { return value_; }
  // "p/q", or "inf".
  std::string ToString() const;

  friend bool operator==(const ApproximationRatio& a,
                         const ApproximationRatio& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const ApproximationRatio& a,
                                          const ApproximationRatio& b);

 private:
  bool infinite_ = false;
  Rational value_{1};
};

struct WelfareReport {
  Location mechanism_location;
  Rational mechanism_welfare;
  Location optimal_location;
  Rational optimal_welfare;
  ApproximationRatio ratio;
};

struct OptimalSolution {
  Location site;
  Rational welfare;
};

// Sum of equilibrium utilities when the facility sits at s.
Rational Welfare(const Instance& instance, const Location& s);

// Welfare-maximising site. Sorts the agents, slides a window of min(n, k)
// consecutive agents and scores each window's lower median with the full
// equilibrium welfare; the best score wins, the leftmost candidate on ties.
// O(n) candidates, each scored in O(n log n).
OptimalSolution OptimalLocation(const Instance& instance);

struct CheckedOptimum {
  OptimalSolution solution;
  // Best grid point found by the oracle scan.
  OptimalSolution grid_best;
  // Set when a grid point beat every window candidate; `solution` then
  // holds the grid optimum and `diagnostic` says what happened.
  bool structure_violation = false;
  std::string diagnostic;
};

// OptimalLocation cross-checked against every point of `oracle_grid`.
CheckedOptimum OptimalLocationChecked(const Instance& instance,
                                      const GridSpec& oracle_grid);

WelfareReport RatioReport(const Instance& instance,
                          const MechanismSpec& mechanism);
WelfareReport RatioReport(const Instance& instance,
                          const MechanismFn& mechanism);

}  // namespace capfac

#endif  // CAPFAC_WELFARE_H_
