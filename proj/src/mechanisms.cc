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

#include "capfac/mechanisms.h"

#include <algorithm>
#include <bit>
#include <string>
#include <utility>

#include "capfac/errors.h"

namespace capfac {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void CheckAgent(int agent, std::size_t n, const char* what) {
  if (agent < 1 || static_cast<std::size_t>(agent) > n) {
    throw ArityMismatch(std::string(what) + " agent " +
                        std::to_string(agent) + " does not exist among " +
                        std::to_string(n) + " reports");
  }
}

Location MedianOf(std::span<const Location> reports) {
  std::vector<Location> sorted(reports.begin(), reports.end());
  const std::size_t rank = (sorted.size() + 1) / 2 - 1;
  std::nth_element(sorted.begin(), sorted.begin() + rank, sorted.end());
  return sorted[rank];
}

}  // namespace

GmmSpec::GmmSpec(int agents, std::vector<Location> thresholds)
    : agents_(agents), thresholds_(std::move(thresholds)) {
  if (agents < 1) {
    throw InvalidArgument("a GMM needs at least one agent");
  }
  if (agents > kMaxAgents) {
    throw InstanceTooLarge("explicit GMM tables support at most " +
                           std::to_string(kMaxAgents) + " agents, got " +
                           std::to_string(agents));
  }
  if (thresholds_.size() != (std::size_t{1} << agents)) {
    throw InvalidArgument("GMM table for " + std::to_string(agents) +
                          " agents needs " +
                          std::to_string(std::size_t{1} << agents) +
                          " thresholds, got " +
                          std::to_string(thresholds_.size()));
  }
}

Location GmmSpec::Evaluate(std::span<const Location> reports) const {
  if (static_cast<int>(reports.size()) != agents_) {
    throw ArityMismatch("GMM over " + std::to_string(agents_) +
                        " agents got " + std::to_string(reports.size()) +
                        " reports");
  }
  // subset_max[S] = max report in S, built from S minus its lowest agent.
  const std::uint32_t subsets = 1u << agents_;
  std::vector<const Location*> subset_max(subsets, nullptr);
  const Location* best = &thresholds_[0];
  for (std::uint32_t s = 1; s < subsets; ++s) {
    const int low = __builtin_ctz(s);
    const Location* rest = subset_max[s & (s - 1)];
    const Location* top = &reports[low];
    if (rest != nullptr && *rest > *top) top = rest;
    subset_max[s] = top;
    const Location* term = *top > thresholds_[s] ? top : &thresholds_[s];
    if (*term < *best) best = term;
  }
  return *best;
}

Location Evaluate(const MechanismSpec& mechanism,
                  std::span<const Location> reports) {
  if (reports.empty()) throw ArityMismatch("empty report profile");
  return std::visit(
      Overloaded{
          [&](const GmmSpec& gmm) { return gmm.Evaluate(reports); },
          [&](const MedianMechanism&) { return MedianOf(reports); },
          [&](const ConstantMechanism& c) { return c.site; },
          [&](const DictatorMechanism& d) {
            CheckAgent(d.agent, reports.size(), "dictator");
            return reports[d.agent - 1];
          },
          [&](const SnapDictatorMechanism& d) {
            CheckAgent(d.agent, reports.size(), "snap dictator");
            const Location& report = reports[d.agent - 1];
            return Distance(d.second, report) < Distance(d.first, report)
                       ? d.second
                       : d.first;
          },
      },
      mechanism);
}

GmmSpec GmmEncoding(const MechanismSpec& mechanism, int n, int max_agents) {
  if (n < 1) throw InvalidArgument("GMM encoding needs n >= 1");
  if (n > max_agents || n > GmmSpec::kMaxAgents) {
    throw InstanceTooLarge("GMM encoding supports at most " +
                           std::to_string(std::min(max_agents,
                                                   GmmSpec::kMaxAgents)) +
                           " agents, got " + std::to_string(n));
  }
  const std::uint32_t subsets = 1u << n;
  const Location one(1, 1);
  const Location zero(0, 1);
  std::vector<Location> table(subsets, one);

  std::visit(
      Overloaded{
          [&](const GmmSpec& gmm) {
            if (gmm.agents() != n) {
              throw ArityMismatch("explicit GMM has " +
                                  std::to_string(gmm.agents()) +
                                  " agents, requested " + std::to_string(n));
            }
            table = gmm.thresholds();
          },
          [&](const MedianMechanism&) {
            const int quorum = (n + 1) / 2;
            for (std::uint32_t s = 0; s < subsets; ++s) {
              if (std::popcount(s) >= quorum) table[s] = zero;
            }
          },
          [&](const ConstantMechanism& c) { table[0] = c.site; },
          [&](const DictatorMechanism& d) {
            CheckAgent(d.agent, n, "dictator");
            table[1u << (d.agent - 1)] = zero;
          },
          [&](const SnapDictatorMechanism&) {
            throw InvalidArgument(
                "the snap dictator is not a generalized median mechanism");
          },
      },
      mechanism);
  return GmmSpec(n, std::move(table));
}

bool IsGmmFamily(const MechanismSpec& mechanism) {
  return !std::holds_alternative<SnapDictatorMechanism>(mechanism);
}

bool IsAnonymous(const MechanismSpec& mechanism) {
  return std::holds_alternative<MedianMechanism>(mechanism) ||
         std::holds_alternative<ConstantMechanism>(mechanism);
}

std::string MechanismName(const MechanismSpec& mechanism) {
  return std::visit(
      Overloaded{
          [](const GmmSpec& g) {
            return "gmm(n=" + std::to_string(g.agents()) + ")";
          },
          [](const MedianMechanism&) { return std::string("median"); },
          [](const ConstantMechanism& c) {
            return "constant(" + c.site.ToString() + ")";
          },
          [](const DictatorMechanism& d) {
            return "dictator(" + std::to_string(d.agent) + ")";
          },
          [](const SnapDictatorMechanism& d) {
            return "snap_dictator(" + std::to_string(d.agent) + ")";
          },
      },
      mechanism);
}

GmmSpec RandomGmm(int agents, const GridSpec& grid, std::mt19937_64& rng) {
  std::vector<Location> table;
  const std::uint32_t subsets = 1u << agents;
  table.reserve(subsets);
  for (std::uint32_t s = 0; s < subsets; ++s) {
    const auto index = static_cast<int>(UniformBelow(rng, grid.size()));
    table.push_back(grid.point(index));
  }
  return GmmSpec(agents, std::move(table));
}

TableMechanism::TableMechanism(int agents, GridSpec grid,
                               std::vector<int> outputs)
    : agents_(agents),
      grid_(std::move(grid)),
      space_(agents, grid_.size()),
      outputs_(std::move(outputs)) {
  if (outputs_.size() != space_.size()) {
    throw InvalidArgument("table mechanism needs one output per profile");
  }
  for (int o : outputs_) {
    if (o < 0 || o >= grid_.size()) {
      throw InvalidArgument("table mechanism output is not a grid index");
    }
  }
}

TableMechanism TableMechanism::Random(int agents, const GridSpec& grid,
                                      std::mt19937_64& rng) {
  const ProfileSpace space(agents, grid.size());
  std::vector<int> outputs(space.size());
  for (auto& o : outputs) {
    o = static_cast<int>(UniformBelow(rng, grid.size()));
  }
  return TableMechanism(agents, grid, std::move(outputs));
}

Location TableMechanism::Evaluate(std::span<const Location> reports) const {
  if (static_cast<int>(reports.size()) != agents_) {
    throw ArityMismatch("table mechanism over " + std::to_string(agents_) +
                        " agents got " + std::to_string(reports.size()) +
                        " reports");
  }
  std::uint64_t index = 0;
  const Rational q(grid_.denominator());
  for (const Location& r : reports) {
    const Rational scaled = r.value() * q;
    if (scaled.denominator() != 1) {
      throw DomainIncomplete("report " + r.ToString() +
                             " is not on the table's grid");
    }
    index = index * grid_.size() + scaled.numerator();
  }
  return grid_.point(outputs_[index]);
}

MechanismFn AsFunction(const MechanismSpec& mechanism) {
  return [mechanism](std::span<const Location> reports) {
    return Evaluate(mechanism, reports);
  };
}

MechanismFn AsFunction(const TableMechanism& mechanism) {
  return [mechanism](std::span<const Location> reports) {
    return mechanism.Evaluate(reports);
  };
}

std::vector<Location> TabulateOnGrid(const MechanismFn& mechanism, int n,
                                     const GridSpec& grid) {
  const ProfileSpace space(n, grid.size());
  std::vector<Location> outputs;
  outputs.reserve(space.size());
  std::vector<int> digits(n, 0);
  std::vector<Location> profile(n, grid.point(0));
  for (std::uint64_t p = 0; p < space.size(); ++p) {
    space.Decode(p, digits);
    for (int a = 0; a < n; ++a) profile[a] = grid.point(digits[a]);
    outputs.push_back(mechanism(profile));
  }
  return outputs;
}

UncompromisingVerdict IsUncompromisingOnGrid(const MechanismFn& mechanism,
                                             int n, const GridSpec& grid,
                                             std::uint64_t budget) {
  const int g = grid.size();
  const std::uint64_t work =
      SaturatingMul(SaturatingMul(SaturatingPow(g, n), n), g);
  if (work > budget) {
    throw BudgetExceeded("uncompromising check needs " +
                         std::to_string(work) + " checks, budget is " +
                         std::to_string(budget));
  }

  const ProfileSpace space(n, g);
  const std::vector<Location> outputs = TabulateOnGrid(mechanism, n, grid);
  std::vector<int> digits(n, 0);

  UncompromisingVerdict verdict;
  for (std::uint64_t p = 0; p < space.size(); ++p) {
    space.Decode(p, digits);
    const Location& s = outputs[p];
    for (int agent = 1; agent <= n; ++agent) {
      const int own = digits[agent - 1];
      const Location& xi = grid.point(own);
      const std::uint64_t base = p - own * space.stride(agent);
      for (int dev = 0; dev < g; ++dev) {
        ++verdict.instances_checked;
        const Location& xd = grid.point(dev);
        const bool same_side = (xi > s && xd >= s) || (xi < s && xd <= s);
        if (!same_side) continue;
        const Location& moved = outputs[base + dev * space.stride(agent)];
        if (moved == s) continue;
        std::vector<Location> profile(n);
        for (int a = 0; a < n; ++a) profile[a] = grid.point(digits[a]);
        verdict.passed = false;
        verdict.witness = UncompromisingWitness{std::move(profile), agent, xd,
                                                s, moved};
        return verdict;
      }
    }
  }
  return verdict;
}

UncompromisingVerdict IsUncompromisingOnGrid(const MechanismSpec& mechanism,
                                             int n, int grid_denominator) {
  return IsUncompromisingOnGrid(AsFunction(mechanism), n,
                                GridSpec(grid_denominator), DefaultBudget());
}

}  // namespace capfac
