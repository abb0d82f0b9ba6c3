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

#ifndef CAPFAC_MECHANISMS_H_
#define CAPFAC_MECHANISMS_H_

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "capfac/enumeration.h"
#include "capfac/location.h"
#include "capfac/verdict.h"

namespace capfac {

// Generalized median mechanism: M(x) = min over S of max(max_{i in S} x_i,
// a_S), where the S = {} term is a_{}. Thresholds are a dense table indexed
// by subset bitmask (bit i-1 set = agent i in S). No monotonicity is imposed
// on the table.
class GmmSpec {
 public:
  static constexpr int kMaxAgents = 16;

  // Throws InstanceTooLarge if agents > kMaxAgents, InvalidArgument if the
  // table does not have exactly 2^agents entries.
  GmmSpec(int agents, std::vector<Location> thresholds);

  int agents() const { return agents_; }
  const Location& threshold(std::uint32_t subset) const {
    return thresholds_[subset];
  }
  const std::vector<Location>& thresholds() const { return thresholds_; }

  // Throws ArityMismatch unless reports.size() == agents().
  Location Evaluate(std::span<const Location> reports) const;

  friend bool operator==(const GmmSpec&, const GmmSpec&) = default;

 private:
  int agents_;
  std::vector<Location> thresholds_;
};

// The floor((n+1)/2)-th smallest report.
struct MedianMechanism {
  friend bool operator==(const MedianMechanism&,
                         const MedianMechanism&) = default;
};

// Always outputs `site`.
struct ConstantMechanism {
  Location site;
  friend bool operator==(const ConstantMechanism&,
                         const ConstantMechanism&) = default;
};

// Outputs the report of `agent`.
struct DictatorMechanism {
  int agent = 1;
  friend bool operator==(const DictatorMechanism&,
                         const DictatorMechanism&) = default;
};

// Outputs whichever target is closer to `agent`'s report, preferring the
// first target on ties. Uncompromising fails, so it is not a GMM.
struct SnapDictatorMechanism {
  int agent = 1;
  Location first{1, 4};
  Location second{3, 4};
  friend bool operator==(const SnapDictatorMechanism&,
                         const SnapDictatorMechanism&) = default;
};

using MechanismSpec =
    std::variant<GmmSpec, MedianMechanism, ConstantMechanism,
                 DictatorMechanism, SnapDictatorMechanism>;

// Throws ArityMismatch when the reports do not fit the mechanism (empty
// profile, wrong length for an explicit GMM, dictator id beyond n).
Location Evaluate(const MechanismSpec& mechanism,
                  std::span<const Location> reports);

// Explicit threshold table of a named GMM for n agents. Explicit GMMs are
// returned unchanged when their arity matches. Throws InvalidArgument for
// the snap dictator (not a GMM) and InstanceTooLarge for n > max_agents.
GmmSpec GmmEncoding(const MechanismSpec& mechanism, int n,
                    int max_agents = GmmSpec::kMaxAgents);

// True for the variants that are GMMs by construction.
bool IsGmmFamily(const MechanismSpec& mechanism);

// True when the output is invariant under permuting the reports.
bool IsAnonymous(const MechanismSpec& mechanism);

// Short human-readable label ("median", "dictator(2)", ...).
std::string MechanismName(const MechanismSpec& mechanism);

// Thresholds drawn independently and uniformly from the grid points.
GmmSpec RandomGmm(int agents, const GridSpec& grid, std::mt19937_64& rng);

// An arbitrary mechanism given extensionally on grid profiles: one output
// grid index per profile, in ProfileSpace order.
class TableMechanism {
 public:
  TableMechanism(int agents, GridSpec grid, std::vector<int> outputs);

  // Each profile is mapped to an independent uniform grid point.
  static TableMechanism Random(int agents, const GridSpec& grid,
                               std::mt19937_64& rng);

  int agents() const { return agents_; }
  const GridSpec& grid() const { return grid_; }
  const std::vector<int>& outputs() const { return outputs_; }

  // Throws ArityMismatch on a wrong-length profile and DomainIncomplete when
  // a report is not a grid point.
  Location Evaluate(std::span<const Location> reports) const;

 private:
  int agents_;
  GridSpec grid_;
  ProfileSpace space_;
  std::vector<int> outputs_;
};

// Type-erased location-only mechanism, used by the audits.
using MechanismFn = std::function<Location(std::span<const Location>)>;

MechanismFn AsFunction(const MechanismSpec& mechanism);
MechanismFn AsFunction(const TableMechanism& mechanism);

// Output of the mechanism at every grid profile, in ProfileSpace order.
std::vector<Location> TabulateOnGrid(const MechanismFn& mechanism, int n,
                                     const GridSpec& grid);

// A violation of the uncompromising property: agent `agent` at `profile`
// moved its report to `deviation` on its own side of the output, and the
// output changed from `before` to `after`.
struct UncompromisingWitness {
  std::vector<Location> profile;
  int agent = 0;
  Location deviation;
  Location before;
  Location after;
};

using UncompromisingVerdict = Verdict<UncompromisingWitness>;

// Checks the uncompromising conditions on every grid profile: if M(x) = s and
// x_i > s then every grid report x_i' >= s keeps the output at s, and
// symmetrically for x_i < s. Scan order: profiles lexicographically, then
// agents ascending, then deviations ascending. A witness is a genuine
// violation; a pass covers the grid only. Work is n (q+1)^(n+1) checks;
// BudgetExceeded if that exceeds `budget`.
UncompromisingVerdict IsUncompromisingOnGrid(const MechanismFn& mechanism,
                                             int n, const GridSpec& grid,
                                             std::uint64_t budget);
UncompromisingVerdict IsUncompromisingOnGrid(const MechanismSpec& mechanism,
                                             int n, int grid_denominator);

}  // namespace capfac

#endif  // CAPFAC_MECHANISMS_H_
