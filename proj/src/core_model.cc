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

#include "capfac/core_model.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "capfac/errors.h"

namespace capfac {

Instance::Instance(std::vector<Location> locations, int capacity)
    : locations_(std::move(locations)), capacity_(capacity) {
  if (locations_.empty()) {
    throw InvalidArgument("an instance needs at least one agent");
  }
  if (capacity_ < 1 || capacity_ > size()) {
    throw InvalidArgument("capacity " + std::to_string(capacity_) +
                          " outside [1, " + std::to_string(size()) + "]");
  }
}

Priority::Priority(std::vector<int> order)
    : order_(std::move(order)), rank_(order_.size(), -1) {
  const int n = static_cast<int>(order_.size());
  for (int r = 0; r < n; ++r) {
    const int agent = order_[r];
    if (agent < 1 || agent > n || rank_[agent - 1] != -1) {
      throw InvalidArgument("priority order is not a permutation of 1..n");
    }
    rank_[agent - 1] = r;
  }
}

bool EquilibriumOutcome::IsServed(int agent) const {
  return std::binary_search(served.begin(), served.end(), agent);
}

bool HasPriority(std::span<const Location> locations, const Location& s,
                 int a, int b) {
  const Rational da = Distance(s, locations[a - 1]);
  const Rational db = Distance(s, locations[b - 1]);
  if (da != db) return da < db;
  return a < b;
}

Priority ComputePriority(const Instance& instance, const Location& s) {
  const int n = instance.size();
  std::vector<Rational> dist(n);
  for (int i = 0; i < n; ++i) dist[i] = Distance(s, instance.locations()[i]);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 1);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Rational& da = dist[a - 1];
    const Rational& db = dist[b - 1];
    if (da != db) return da < db;
    return a < b;
  });
  return Priority(std::move(order));
}

EquilibriumOutcome ResolveEquilibrium(const Instance& instance,
                                      const Location& s) {
  const int n = instance.size();
  const Priority priority = ComputePriority(instance, s);
  const int served_count = std::min(n, instance.capacity());

  EquilibriumOutcome outcome;
  outcome.utilities.assign(n, Rational(0));
  outcome.served.assign(priority.order().begin(),
                        priority.order().begin() + served_count);
  std::sort(outcome.served.begin(), outcome.served.end());
  for (int agent : outcome.served) {
    outcome.utilities[agent - 1] = 1 - Distance(s, instance.location(agent));
  }
  return outcome;
}

bool IsAmongClosest(std::span<const Location> locations, int capacity,
                    int agent, const Location& s) {
  const int n = static_cast<int>(locations.size());
  if (capacity >= n) return true;
  const Rational own = Distance(s, locations[agent - 1]);
  int ahead = 0;
  for (int j = 1; j <= n; ++j) {
    if (j == agent) continue;
    const Rational d = Distance(s, locations[j - 1]);
    if (d < own || (d == own && j < agent)) {
      if (++ahead >= capacity) return false;
    }
  }
  return true;
}

Rational EquilibriumUtility(std::span<const Location> locations, int capacity,
                            int agent, const Location& s) {
  if (!IsAmongClosest(locations, capacity, agent, s)) return Rational(0);
  return 1 - Distance(s, locations[agent - 1]);
}

std::vector<Rational> SubgamePayoffs(const Instance& instance,
                                     const Location& s,
                                     const ActionProfile& actions) {
  const int n = instance.size();
  if (static_cast<int>(actions.size()) != n) {
    throw InvalidArgument("action profile length differs from agent count");
  }
  std::vector<int> travellers;
  for (int i = 1; i <= n; ++i) {
    if (actions[i - 1] == Action::kTravel) travellers.push_back(i);
  }
  const auto& x = instance.locations();
  if (static_cast<int>(travellers.size()) > instance.capacity()) {
    std::sort(travellers.begin(), travellers.end(),
              [&](int a, int b) { return HasPriority(x, s, a, b); });
  }

  std::vector<Rational> payoffs(n, Rational(0));
  for (std::size_t r = 0; r < travellers.size(); ++r) {
    const int agent = travellers[r];
    const Rational d = Distance(s, x[agent - 1]);
    payoffs[agent - 1] =
        static_cast<int>(r) < instance.capacity() ? 1 - d : -d;
  }
  return payoffs;
}

std::vector<ActionProfile> EnumerateSubgameEquilibria(
    const Instance& instance, const Location& s, int max_agents) {
  const int n = instance.size();
  if (n > max_agents) {
    throw InstanceTooLarge("subgame enumeration supports at most " +
                           std::to_string(max_agents) + " agents, got " +
                           std::to_string(n));
  }

  std::vector<ActionProfile> equilibria;
  const std::uint32_t profiles = 1u << n;
  ActionProfile actions(n);
  for (std::uint32_t mask = 0; mask < profiles; ++mask) {
    for (int i = 0; i < n; ++i) {
      actions[i] = (mask >> i) & 1u ? Action::kTravel : Action::kStay;
    }
    const std::vector<Rational> payoffs = SubgamePayoffs(instance, s, actions);
    bool stable = true;
    for (int i = 0; i < n && stable; ++i) {
      ActionProfile deviation = actions;
      deviation[i] =
          actions[i] == Action::kTravel ? Action::kStay : Action::kTravel;
      const Rational deviating = SubgamePayoffs(instance, s, deviation)[i];
      if (deviating > payoffs[i]) stable = false;
    }
    if (stable) equilibria.push_back(actions);
  }
  return equilibria;
}

std::vector<Rational> UtilityCurve(const Instance& instance, int agent,
                                   std::span<const Location> grid) {
  if (agent < 1 || agent > instance.size()) {
    throw InvalidArgument("agent id " + std::to_string(agent) +
                          " out of range");
  }
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw InvalidArgument("utility curve grid must be sorted ascending");
  }
  std::vector<Rational> curve;
  curve.reserve(grid.size());
  for (const Location& s : grid) {
    curve.push_back(EquilibriumUtility(instance.locations(),
                                       instance.capacity(), agent, s));
  }
  return curve;
}

}  // namespace capfac
