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

#ifndef CAPFAC_CORE_MODEL_H_
#define CAPFAC_CORE_MODEL_H_

#include <span>
#include <vector>

#include "capfac/location.h"
#include "capfac/rational.h"

namespace capfac {

// Agent ids are 1-based positions in the location profile throughout the
// public API. Vectors indexed by agent store agent i at position i - 1.

// Agent locations on [0,1] together with the facility capacity k.
class Instance {
 public:
  // Throws InvalidArgument unless the profile is nonempty and
  // 1 <= capacity <= size.
  Instance(std::vector<Location> locations, int capacity);

  int size() const { return static_cast<int>(locations_.size()); }
  int capacity() const { return capacity_; }
  const std::vector<Location>& locations() const { return locations_; }
  const Location& location(int agent) const { return locations_[agent - 1]; }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::vector<Location> locations_;
  int capacity_;
};

// An agent's choice in the travel/stay subgame.
enum class Action { kStay, kTravel };
using ActionProfile = std::vector<Action>;

// Distance-based service priority at a facility site: closer agents first,
// equidistant agents by ascending id. Strict total order over agent ids.
class Priority {
 public:
  explicit Priority(std::vector<int> order);

  // Agent ids, highest priority first.
  const std::vector<int>& order() const { return order_; }
  // 0-based rank of an agent in the order.
  int RankOf(int agent) const { return rank_[agent - 1]; }
  bool Precedes(int a, int b) const { return RankOf(a) < RankOf(b); }

 private:
  std::vector<int> order_;
  std::vector<int> rank_;
};

// The utility-unique outcome of the induced subgame.
struct EquilibriumOutcome {
  // Ids of served agents, ascending.
  std::vector<int> served;
  // Ex-post utility per agent (index agent - 1).
  std::vector<Rational> utilities;

  bool IsServed(int agent) const;
};

inline constexpr int kDefaultExhaustiveAgentBound = 12;

// True when agent a is ahead of agent b in the queue at site s.
bool HasPriority(std::span<const Location> locations, const Location& s,
                 int a, int b);

Priority ComputePriority(const Instance& instance, const Location& s);

// Serves the min(n, k) highest-priority agents. This is the outcome every
// ex-post Nash equilibrium of the subgame yields, utility for utility.
EquilibriumOutcome ResolveEquilibrium(const Instance& instance,
                                      const Location& s);

// Whether `agent` is among the k highest-priority agents at s. O(n), no
// sorting; this is the hot path of the audits.
bool IsAmongClosest(std::span<const Location> locations, int capacity,
                    int agent, const Location& s);

// u_i*(s, x, k) for a single agent.
Rational EquilibriumUtility(std::span<const Location> locations, int capacity,
                            int agent, const Location& s);

// Payoffs of one action profile of the subgame: served travellers get
// 1 - d, unserved travellers get -d, stayers get 0. When more than k agents
// travel the k highest-priority travellers are served.
std::vector<Rational> SubgamePayoffs(const Instance& instance,
                                     const Location& s,
                                     const ActionProfile& actions);

// Every pure ex-post Nash equilibrium of the subgame, by checking all 2^n
// action profiles against unilateral deviations. Profiles are returned in
// increasing bitmask order (bit i-1 set = agent i travels). Throws
// InstanceTooLarge when n > max_agents.
std::vector<ActionProfile> EnumerateSubgameEquilibria(
    const Instance& instance, const Location& s,
    int max_agents = kDefaultExhaustiveAgentBound);

// u_agent*(s, x, k) for every s in `grid`. Throws InvalidArgument unless
// the grid is sorted ascending.
std::vector<Rational> UtilityCurve(const Instance& instance, int agent,
                                   std::span<const Location> grid);

}  // namespace capfac

#endif  // CAPFAC_CORE_MODEL_H_
