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

#include "capfac/alloc_ext.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <numeric>
#include <string>
#include <utility>

#include "capfac/audit.h"
#include "capfac/errors.h"
#include "capfac/parallel.h"

namespace capfac {
namespace {

void CheckDomain(const std::vector<Location>& domain) {
  if (domain.empty()) throw InvalidArgument("empty allocation domain");
  for (std::size_t i = 1; i < domain.size(); ++i) {
    if (!(domain[i - 1] < domain[i])) {
      throw InvalidArgument("allocation domain must be sorted and distinct");
    }
  }
}

int DomainIndex(const std::vector<Location>& domain, const Location& x) {
  auto it = std::lower_bound(domain.begin(), domain.end(), x);
  if (it == domain.end() || *it != x) {
    throw DomainIncomplete("report " + x.ToString() +
                           " is outside the table domain");
  }
  return static_cast<int>(it - domain.begin());
}

std::vector<Location> DecodeProfile(const AllocationTable& table,
                                    std::uint64_t index) {
  std::vector<int> digits(table.agents());
  table.space().Decode(index, digits);
  std::vector<Location> out;
  out.reserve(digits.size());
  for (int d : digits) out.push_back(table.domain()[d]);
  return out;
}

std::vector<Location> Without(const std::vector<Location>& profile,
                              int agent) {
  std::vector<Location> out = profile;
  out.erase(out.begin() + (agent - 1));
  return out;
}

std::uint32_t FirstAgents(int count) {
  return count >= 32 ? ~0u : (1u << count) - 1;
}

}  // namespace

std::vector<int> ServedAgents(const Allocation& allocation) {
  std::vector<int> out;
  for (int a = 1; a <= 32; ++a) {
    if (allocation.Serves(a)) out.push_back(a);
  }
  return out;
}

AllocationTable::AllocationTable(int agents, int capacity,
                                 std::vector<Location> domain,
                                 std::vector<std::optional<Allocation>> entries)
    : agents_(agents),
      capacity_(capacity),
      domain_(std::move(domain)),
      space_((CheckDomain(domain_),
              agents >= 1 && agents <= kMaxAgents
                  ? ProfileSpace(agents, static_cast<int>(domain_.size()))
                  : throw InvalidArgument("allocation table needs 1..16 "
                                          "agents"))),
      entries_(std::move(entries)) {
  if (capacity < 1 || capacity > agents) {
    throw InvalidArgument("capacity outside [1, n]");
  }
  if (entries_.size() != space_.size()) {
    throw InvalidArgument("allocation table has " +
                          std::to_string(entries_.size()) + " entries, need " +
                          std::to_string(space_.size()));
  }
  const std::uint32_t everyone = FirstAgents(agents);
  for (const auto& entry : entries_) {
    if (!entry) continue;
    const int size = std::popcount(entry->served);
    if (size == 0 || size > capacity || (entry->served & ~everyone) != 0) {
      throw InvalidArgument("served set must be a nonempty set of at most k "
                            "agents");
    }
  }
}

AllocationTable AllocationTable::Build(
    int agents, int capacity, std::vector<Location> domain,
    const std::function<Allocation(std::span<const Location>)>& rule) {
  CheckDomain(domain);
  const ProfileSpace space(agents, static_cast<int>(domain.size()));
  std::vector<std::optional<Allocation>> entries(space.size());
  std::vector<int> digits(agents);
  std::vector<Location> profile(agents);
  for (std::uint64_t p = 0; p < space.size(); ++p) {
    space.Decode(p, digits);
    for (int a = 0; a < agents; ++a) profile[a] = domain[digits[a]];
    entries[p] = rule(profile);
  }
  return AllocationTable(agents, capacity, std::move(domain),
                         std::move(entries));
}

const Allocation& AllocationTable::At(
    std::span<const Location> reports) const {
  if (static_cast<int>(reports.size()) != agents_) {
    throw ArityMismatch("expected " + std::to_string(agents_) +
                        " reports, got " + std::to_string(reports.size()));
  }
  std::vector<int> digits(agents_);
  for (int a = 0; a < agents_; ++a) {
    digits[a] = DomainIndex(domain_, reports[a]);
  }
  return AtIndex(space_.Encode(digits));
}

const Allocation& AllocationTable::AtIndex(std::uint64_t index) const {
  const auto& entry = entries_.at(index);
  if (!entry) {
    throw DomainIncomplete("no allocation entry for profile index " +
                           std::to_string(index));
  }
  return *entry;
}

bool IsIIdentifiable(std::span<const Location> profile, int agent) {
  const Location& own = profile[agent - 1];
  for (int j = 1; j <= static_cast<int>(profile.size()); ++j) {
    if (j != agent && profile[j - 1] == own) return false;
  }
  return true;
}

AllocationTable ClosestReportersTable(const MechanismFn& location_rule,
                                      int agents, int capacity,
                                      std::vector<Location> domain) {
  auto rule = [&](std::span<const Location> x) {
    const Location s = location_rule(x);
    std::vector<int> order(x.size());
    std::iota(order.begin(), order.end(), 1);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const Rational da = Distance(x[a - 1], s);
      const Rational db = Distance(x[b - 1], s);
      if (da != db) return da < db;
      if (x[a - 1] != x[b - 1]) return x[a - 1] < x[b - 1];
      return a < b;
    });
    Allocation out{s, 0};
    for (int i = 0; i < capacity; ++i) out.served |= 1u << (order[i] - 1);
    return out;
  };
  return AllocationTable::Build(agents, capacity, std::move(domain), rule);
}

AllocationTable FixedServedTable(const MechanismFn& location_rule, int agents,
                                 int capacity, std::vector<Location> domain) {
  auto rule = [&](std::span<const Location> x) {
    return Allocation{location_rule(x), FirstAgents(capacity)};
  };
  return AllocationTable::Build(agents, capacity, std::move(domain), rule);
}

AllocationTable DictatorialAllocationTable(int agents, int capacity,
                                           std::vector<Location> domain) {
  auto rule = [&](std::span<const Location> x) {
    return Allocation{x[0], FirstAgents(capacity)};
  };
  return AllocationTable::Build(agents, capacity, std::move(domain), rule);
}

AnonymityVerdict CheckAllocationAnonymous(const AllocationTable& mechanism) {
  const int n = mechanism.agents();
  const ProfileSpace& space = mechanism.space();
  std::vector<int> digits(n);
  AnonymityVerdict verdict;
  for (std::uint64_t p = 0; p < space.size(); ++p) {
    space.Decode(p, digits);
    for (int i = 1; i <= n; ++i) {
      bool identifiable = true;
      for (int j = 1; j <= n; ++j) {
        if (j != i && digits[j - 1] == digits[i - 1]) identifiable = false;
      }
      if (!identifiable) continue;
      for (int j = 1; j <= n; ++j) {
        if (j == i) continue;
        ++verdict.instances_checked;
        std::vector<int> swapped = digits;
        std::swap(swapped[i - 1], swapped[j - 1]);
        const std::uint64_t q = space.Encode(swapped);
        const bool before = mechanism.AtIndex(p).Serves(i);
        const bool after = mechanism.AtIndex(q).Serves(j);
        if (before == after) continue;
        verdict.passed = false;
        verdict.witness = AnonymityWitness{DecodeProfile(mechanism, p),
                                           DecodeProfile(mechanism, q),
                                           i,
                                           j,
                                           before,
                                           after};
        return verdict;
      }
    }
  }
  return verdict;
}

Rational AllocationUtility(const Allocation& allocation, int agent,
                           const Location& true_location) {
  if (!allocation.Serves(agent)) return Rational(0);
  return Rational(1) - Distance(allocation.site, true_location);
}

AllocDicVerdict AuditDicAlloc(const AllocationTable& mechanism) {
  const int n = mechanism.agents();
  const int g = static_cast<int>(mechanism.domain().size());
  const ProfileSpace& space = mechanism.space();
  const std::uint64_t others = space.size() / g;
  const std::vector<Location>& domain = mechanism.domain();

  AllocDicVerdict verdict;
  std::vector<int> digits(n);
  for (int agent = 1; agent <= n; ++agent) {
    const std::uint64_t stride = space.stride(agent);
    for (int own = 0; own < g; ++own) {
      for (int dev = 0; dev < g; ++dev) {
        for (std::uint64_t rhat = 0; rhat < others; ++rhat) {
          if (dev == own) continue;
          // Full-profile index with the agent's digit zeroed: split rhat
          // around the agent's position.
          const std::uint64_t high = rhat / stride;
          const std::uint64_t low = rhat % stride;
          const std::uint64_t base = high * stride * g + low;
          const Allocation& honest = mechanism.AtIndex(base + own * stride);
          const Allocation& lying = mechanism.AtIndex(base + dev * stride);
          const Rational u = AllocationUtility(honest, agent, domain[own]);
          const Rational v = AllocationUtility(lying, agent, domain[own]);
          if (!(v > u)) continue;
          const std::uint64_t position =
              ((((static_cast<std::uint64_t>(agent - 1) * g + own) * g + dev) *
                    others +
                rhat) *
               others);
          const std::vector<Location> reports =
              Without(DecodeProfile(mechanism, base + own * stride), agent);
          verdict.passed = false;
          verdict.instances_checked = position + 1;
          verdict.witness = AllocDicWitness{
              agent,  domain[own], domain[dev], reports,
              std::vector<Location>(n - 1, domain[0]),
              honest, lying,       u,           v};
          return verdict;
        }
      }
    }
  }
  verdict.instances_checked = SaturatingMul(
      SaturatingMul(static_cast<std::uint64_t>(n), space.size()), space.size());
  return verdict;
}

bool VerifyAllocDicWitness(const AllocationTable& mechanism,
                           const AllocDicWitness& w) {
  const std::vector<Location> honest =
      AssembleProfile(w.agent, w.true_location, w.others_reports);
  const std::vector<Location> lying =
      AssembleProfile(w.agent, w.deviation, w.others_reports);
  const Allocation& a = mechanism.At(honest);
  const Allocation& b = mechanism.At(lying);
  const Rational u = AllocationUtility(a, w.agent, w.true_location);
  const Rational v = AllocationUtility(b, w.agent, w.true_location);
  return v > u && a == w.truthful && b == w.deviating &&
         u == w.truthful_utility && v == w.deviating_utility;
}

ImpossibilityReplay ReplayImpossibility(const AllocationTable& mechanism) {
  const int n = mechanism.agents();
  if (mechanism.capacity() >= n) {
    throw DomainError("impossibility needs k < n");
  }
  const Location low(1, 2);
  const Location high(3, 4);
  const auto& domain = mechanism.domain();
  if (!std::binary_search(domain.begin(), domain.end(), low) ||
      !std::binary_search(domain.begin(), domain.end(), high)) {
    throw DomainError("table domain must contain 1/2 and 3/4");
  }

  ImpossibilityReplay replay;
  const std::vector<Location> all_high(n, high);
  replay.all_high = mechanism.At(all_high);
  for (int a = n; a >= 1; --a) {
    if (replay.all_high.Serves(a)) {
      replay.i_star = a;
    } else {
      replay.j_star = a;
    }
  }
  std::vector<Location> moved = all_high;
  moved[replay.j_star - 1] = low;
  replay.j_star_low = mechanism.At(moved);

  AllocDicWitness& w = replay.witness;
  if (replay.j_star_low.Serves(replay.j_star)) {
    replay.case_number = 1;
    w.agent = replay.j_star;
    w.true_location = high;
    w.deviation = low;
    w.truthful = replay.all_high;
    w.deviating = replay.j_star_low;
  } else {
    replay.case_number = 2;
    std::vector<Location> swapped = all_high;
    swapped[replay.i_star - 1] = low;
    w.agent = replay.i_star;
    w.true_location = low;
    w.deviation = high;
    w.truthful = mechanism.At(swapped);
    w.deviating = replay.all_high;
  }
  w.others_reports.assign(n - 1, high);
  w.others_true = w.others_reports;
  w.truthful_utility = AllocationUtility(w.truthful, w.agent, w.true_location);
  w.deviating_utility =
      AllocationUtility(w.deviating, w.agent, w.true_location);
  replay.reverified = VerifyAllocDicWitness(mechanism, w);
  return replay;
}

AllocationSweep SweepAnonymousAllocations(int agents, int capacity,
                                          std::vector<Location> domain,
                                          std::uint64_t budget, int threads) {
  if (agents < 1 || agents > 4) {
    throw InvalidArgument("allocation sweep supports 1..4 agents");
  }
  if (capacity < 1 || capacity > agents) {
    throw InvalidArgument("capacity outside [1, n]");
  }
  CheckDomain(domain);
  const int n = agents;
  const int g = static_cast<int>(domain.size());
  const ProfileSpace space(n, g);
  const int profiles = static_cast<int>(space.size());

  std::vector<std::uint32_t> subsets;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (std::popcount(mask) <= capacity) subsets.push_back(mask);
  }
  const int m = static_cast<int>(subsets.size());
  const std::uint64_t served_tables = SaturatingPow(m, profiles);
  const std::uint64_t site_tables = SaturatingPow(g, profiles);
  if (served_tables > budget) {
    throw BudgetExceeded("sweep needs " + std::to_string(served_tables) +
                         " served-set tables, budget is " +
                         std::to_string(budget));
  }

  // Anonymity constraints: A[p] has i iff A[q] has j.
  struct Swap {
    int p, i, q, j;
  };
  std::vector<Swap> swaps;
  std::vector<int> digits(n);
  for (int p = 0; p < profiles; ++p) {
    space.Decode(p, digits);
    for (int i = 0; i < n; ++i) {
      bool identifiable = true;
      for (int j = 0; j < n; ++j) {
        if (j != i && digits[j] == digits[i]) identifiable = false;
      }
      if (!identifiable) continue;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        std::vector<int> swapped = digits;
        std::swap(swapped[i], swapped[j]);
        swaps.push_back({p, i, static_cast<int>(space.Encode(swapped)), j});
      }
    }
  }

  // Utilities as ranks: utility[site][truth] when served, rank 0 otherwise.
  std::vector<Rational> levels{Rational(0)};
  for (const Location& s : domain) {
    for (const Location& x : domain) levels.push_back(1 - Distance(s, x));
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<int> served_rank(g * g);
  for (int s = 0; s < g; ++s) {
    for (int x = 0; x < g; ++x) {
      served_rank[s * g + x] = static_cast<int>(
          std::lower_bound(levels.begin(), levels.end(),
                           1 - Distance(domain[s], domain[x])) -
          levels.begin());
    }
  }
  const int unserved_rank = 0;

  // Misreport checks: agent, true digit, honest and lying profile indices.
  struct Check {
    int agent, own, honest, lying;
  };
  std::vector<Check> checks;
  for (int a = 1; a <= n; ++a) {
    const int stride = static_cast<int>(space.stride(a));
    for (int p = 0; p < profiles; ++p) {
      space.Decode(p, digits);
      const int own = digits[a - 1];
      for (int dev = 0; dev < g; ++dev) {
        if (dev == own) continue;
        checks.push_back({a, own, p, p + (dev - own) * stride});
      }
    }
  }

  const std::uint64_t per_table_sites = site_tables;
  std::atomic<std::uint64_t> visited{0};
  const int workers = ResolveThreadCount(threads);
  const std::size_t chunks =
      static_cast<std::size_t>(std::min<std::uint64_t>(served_tables, 64));
  struct Tally {
    std::uint64_t served = 0, anonymous = 0, passing = 0;
  };
  std::vector<Tally> tallies(chunks);

  ParallelFor(chunks, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> served(profiles);
    std::vector<int> sites(profiles);
    for (std::size_t c = begin; c < end; ++c) {
      const std::uint64_t lo = served_tables * c / chunks;
      const std::uint64_t hi = served_tables * (c + 1) / chunks;
      Tally& tally = tallies[c];
      for (std::uint64_t t = lo; t < hi; ++t) {
        std::uint64_t rest = t;
        for (int p = profiles - 1; p >= 0; --p) {
          served[p] = subsets[rest % m];
          rest /= m;
        }
        ++tally.served;
        bool anonymous = true;
        for (const Swap& s : swaps) {
          if (((served[s.p] >> s.i) & 1u) != ((served[s.q] >> s.j) & 1u)) {
            anonymous = false;
            break;
          }
        }
        if (!anonymous) continue;
        ++tally.anonymous;
        const std::uint64_t seen =
            visited.fetch_add(per_table_sites) + per_table_sites;
        if (served_tables + seen > budget) {
          throw BudgetExceeded("sweep exceeded its budget of " +
                               std::to_string(budget) + " tables");
        }
        for (std::uint64_t st = 0; st < per_table_sites; ++st) {
          std::uint64_t r = st;
          for (int p = profiles - 1; p >= 0; --p) {
            sites[p] = static_cast<int>(r % g);
            r /= g;
          }
          bool dic = true;
          for (const Check& ch : checks) {
            const std::uint32_t bit = 1u << (ch.agent - 1);
            const int u = (served[ch.honest] & bit)
                              ? served_rank[sites[ch.honest] * g + ch.own]
                              : unserved_rank;
            const int v = (served[ch.lying] & bit)
                              ? served_rank[sites[ch.lying] * g + ch.own]
                              : unserved_rank;
            if (v > u) {
              dic = false;
              break;
            }
          }
          if (dic) ++tally.passing;
        }
      }
    }
  });

  AllocationSweep sweep;
  sweep.agents = n;
  sweep.capacity = capacity;
  sweep.domain = std::move(domain);
  for (const Tally& tally : tallies) {
    sweep.served_tables += tally.served;
    sweep.anonymous_served_tables += tally.anonymous;
    sweep.anonymous_dic_passing += tally.passing;
    sweep.tables_enumerated =
        sweep.tables_enumerated + SaturatingMul(tally.served, site_tables);
  }
  sweep.anonymous_tables =
      SaturatingMul(sweep.anonymous_served_tables, site_tables);
  sweep.tables_closed_form =
      SaturatingPow(static_cast<std::uint64_t>(g) * m, profiles);
  return sweep;
}

RevelationGap CheckRevelationGap(int agents, int capacity,
                                 const GridSpec& grid) {
  RevelationGap gap;
  const MechanismFn median = AsFunction(MechanismSpec(MedianMechanism{}));
  gap.location_rule_passes = AuditDic(median, agents, capacity, grid).passed;
  const AllocationTable table =
      ClosestReportersTable(median, agents, capacity, grid.points());
  gap.table_anonymous = CheckAllocationAnonymous(table).passed;
  AllocDicVerdict verdict = AuditDicAlloc(table);
  gap.table_fails = !verdict.passed;
  gap.witness = std::move(verdict.witness);
  return gap;
}

}  // namespace capfac
