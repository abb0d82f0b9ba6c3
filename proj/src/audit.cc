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

#include "capfac/audit.h"

#include <algorithm>
#include <atomic>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "capfac/core_model.h"
#include "capfac/errors.h"
#include "capfac/parallel.h"

namespace capfac {
namespace {

constexpr std::int64_t kUnknown = -2;
constexpr std::int64_t kNone = -1;

// A violation found inside one (agent, x_i) block, as grid digits.
struct BlockHit {
  int deviation = 0;
  std::uint64_t reports = 0;
  std::uint64_t truth = 0;
};

struct AuditPlan {
  int n = 0;
  int k = 0;
  int g = 0;
  bool collapse_others = false;  // x_{-i} := reports of the others
  std::uint64_t others_size = 1;
};

std::uint64_t OthersSize(int n, int g) {
  return n == 1 ? 1 : ProfileSpace(n - 1, g).size();
}

void DecodeOthers(int n, int g, std::uint64_t index, std::span<int> digits) {
  for (int j = n - 2; j >= 0; --j) {
    digits[j] = static_cast<int>(index % g);
    index /= g;
  }
}

std::vector<Location> OthersOnGrid(int n, const GridSpec& grid,
                                   std::uint64_t index) {
  std::vector<int> digits(n - 1);
  DecodeOthers(n, grid.size(), index, digits);
  std::vector<Location> out;
  out.reserve(digits.size());
  for (int d : digits) out.push_back(grid.point(d));
  return out;
}

// Scans one (agent, x_i) block in lexicographic order of
// (x_i', others' reports, others' truth).
std::optional<BlockHit> ScanBlock(const AuditPlan& plan, const GridSpec& grid,
                                  const ProfileSpace& space,
                                  const std::vector<int>& output_index,
                                  const std::vector<Location>& sites,
                                  int agent, int own) {
  const int n = plan.n;
  const int g = plan.g;
  const std::uint64_t others = plan.others_size;
  const std::size_t distinct = sites.size();

  // Full-profile index of each others-profile with agent's digit zeroed.
  std::vector<std::uint64_t> base(others);
  std::vector<std::vector<int>> other_digits(others, std::vector<int>(n - 1));
  for (std::uint64_t r = 0; r < others; ++r) {
    DecodeOthers(n, g, r, other_digits[r]);
    std::uint64_t index = 0;
    int j = 0;
    for (int a = 1; a <= n; ++a) {
      if (a == agent) continue;
      index += other_digits[r][j++] * space.stride(a);
    }
    base[r] = index;
  }

  std::vector<Location> truth(n);
  truth[agent - 1] = grid.point(own);
  auto utility = [&](std::size_t site, std::uint64_t r) {
    int j = 0;
    for (int a = 1; a <= n; ++a) {
      if (a == agent) continue;
      truth[a - 1] = grid.point(other_digits[r][j++]);
    }
    const Location& s = sites[site];
    if (!IsAmongClosest(truth, plan.k, agent, s)) return Rational(0);
    return Rational(1) - Distance(s, truth[agent - 1]);
  };

  // Utilities per site over all true others-profiles, filled on first use.
  std::vector<std::vector<Rational>> curve(distinct);
  auto curve_for = [&](std::size_t site) -> const std::vector<Rational>& {
    std::vector<Rational>& c = curve[site];
    if (c.empty()) {
      c.resize(others);
      for (std::uint64_t r = 0; r < others; ++r) c[r] = utility(site, r);
    }
    return c;
  };
  // First true others-profile at which moving site a to site b pays off.
  std::vector<std::int64_t> first(distinct * distinct, kUnknown);

  const std::uint64_t own_offset = own * space.stride(agent);
  for (int dev = 0; dev < g; ++dev) {
    const std::uint64_t dev_offset = dev * space.stride(agent);
    for (std::uint64_t rhat = 0; rhat < others; ++rhat) {
      const int s = output_index[base[rhat] + own_offset];
      const int t = output_index[base[rhat] + dev_offset];
      if (s == t) continue;
      if (plan.collapse_others) {
        if (utility(t, rhat) > utility(s, rhat)) {
          return BlockHit{dev, rhat, rhat};
        }
        continue;
      }
      std::int64_t& hit = first[s * distinct + t];
      if (hit == kUnknown) {
        const std::vector<Rational>& us = curve_for(s);
        const std::vector<Rational>& ut = curve_for(t);
        hit = kNone;
        for (std::uint64_t r = 0; r < others; ++r) {
          if (ut[r] > us[r]) {
            hit = static_cast<std::int64_t>(r);
            break;
          }
        }
      }
      if (hit != kNone) {
        return BlockHit{dev, rhat, static_cast<std::uint64_t>(hit)};
      }
    }
  }
  return std::nullopt;
}

AuditVerdict RunAudit(const MechanismFn& mechanism, const AuditPlan& plan,
                      const GridSpec& grid, const AuditOptions& options) {
  const int n = plan.n;
  const int g = plan.g;
  const std::uint64_t per_block =
      plan.collapse_others ? SaturatingMul(g, plan.others_size)
                           : SaturatingMul(SaturatingMul(g, plan.others_size),
                                           plan.others_size);
  const std::uint64_t blocks = static_cast<std::uint64_t>(n) * g;
  const std::uint64_t total = SaturatingMul(blocks, per_block);
  if (total > options.budget) {
    throw BudgetExceeded("incentive audit needs " + std::to_string(total) +
                         " checks, budget is " +
                         std::to_string(options.budget));
  }

  const ProfileSpace space(n, g);
  const std::vector<Location> outputs = TabulateOnGrid(mechanism, n, grid);
  std::vector<Location> sites = outputs;
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  std::vector<int> output_index(outputs.size());
  for (std::size_t p = 0; p < outputs.size(); ++p) {
    output_index[p] = static_cast<int>(
        std::lower_bound(sites.begin(), sites.end(), outputs[p]) -
        sites.begin());
  }

  std::vector<std::optional<BlockHit>> hits(blocks);
  std::atomic<std::uint64_t> earliest{
      std::numeric_limits<std::uint64_t>::max()};
  ParallelFor(blocks, ResolveThreadCount(options.threads),
              [&](std::size_t begin, std::size_t end) {
                for (std::size_t b = begin; b < end; ++b) {
                  if (b > earliest.load()) return;
                  const int agent = static_cast<int>(b / g) + 1;
                  const int own = static_cast<int>(b % g);
                  hits[b] = ScanBlock(plan, grid, space, output_index, sites,
                                      agent, own);
                  if (hits[b]) {
                    std::uint64_t seen = earliest.load();
                    while (b < seen &&
                           !earliest.compare_exchange_weak(seen, b)) {
                    }
                    return;
                  }
                }
              });

  AuditVerdict verdict;
  const std::uint64_t b = earliest.load();
  if (b == std::numeric_limits<std::uint64_t>::max()) {
    verdict.instances_checked = total;
    return verdict;
  }
  const BlockHit& hit = *hits[b];
  const int agent = static_cast<int>(b / g) + 1;
  const int own = static_cast<int>(b % g);

  std::uint64_t position = b * g + hit.deviation;
  position = position * plan.others_size + hit.reports;
  if (!plan.collapse_others) {
    position = position * plan.others_size + hit.truth;
  }

  DicWitness w;
  w.agent = agent;
  w.true_location = grid.point(own);
  w.deviation = grid.point(hit.deviation);
  w.others_reports = OthersOnGrid(n, grid, hit.reports);
  w.others_true = OthersOnGrid(n, grid, hit.truth);
  w.truthful_site =
      mechanism(AssembleProfile(agent, w.true_location, w.others_reports));
  w.deviating_site =
      mechanism(AssembleProfile(agent, w.deviation, w.others_reports));
  const std::vector<Location> truth =
      AssembleProfile(agent, w.true_location, w.others_true);
  w.truthful_utility =
      EquilibriumUtility(truth, plan.k, agent, w.truthful_site);
  w.deviating_utility =
      EquilibriumUtility(truth, plan.k, agent, w.deviating_site);

  verdict.passed = false;
  verdict.witness = std::move(w);
  verdict.instances_checked = position + 1;
  return verdict;
}

void CheckShape(int n, int k) {
  if (n < 1) throw InvalidArgument("audit needs at least one agent");
  if (k < 1 || k > n) throw InvalidArgument("audit needs 1 <= k <= n");
}

}  // namespace

std::vector<Location> AssembleProfile(int agent, const Location& own,
                                      std::span<const Location> others) {
  const int n = static_cast<int>(others.size()) + 1;
  if (agent < 1 || agent > n) {
    throw InvalidArgument("agent " + std::to_string(agent) + " out of range");
  }
  std::vector<Location> profile;
  profile.reserve(n);
  profile.insert(profile.end(), others.begin(), others.begin() + (agent - 1));
  profile.push_back(own);
  profile.insert(profile.end(), others.begin() + (agent - 1), others.end());
  return profile;
}

AuditVerdict AuditDic(const MechanismFn& mechanism, int n, int k,
                      const GridSpec& grid, const AuditOptions& options) {
  CheckShape(n, k);
  AuditPlan plan{n, k, grid.size(), options.others == OthersMode::kTruthful,
                 OthersSize(n, grid.size())};
  return RunAudit(mechanism, plan, grid, options);
}

AuditVerdict AuditDic(const MechanismSpec& mechanism, int n, int k,
                      const GridSpec& grid, const AuditOptions& options) {
  return AuditDic(AsFunction(mechanism), n, k, grid, options);
}

AuditVerdict AuditDicAtCapacityN(const MechanismFn& mechanism, int n,
                                 const GridSpec& grid,
                                 const AuditOptions& options) {
  CheckShape(n, n);
  AuditPlan plan{n, n, grid.size(), true, OthersSize(n, grid.size())};
  return RunAudit(mechanism, plan, grid, options);
}

AuditVerdict AuditDicAtCapacityN(const MechanismSpec& mechanism, int n,
                                 const GridSpec& grid,
                                 const AuditOptions& options) {
  return AuditDicAtCapacityN(AsFunction(mechanism), n, grid, options);
}

bool VerifyDicWitness(const MechanismFn& mechanism, int k,
                      const DicWitness& w) {
  if (w.others_reports.size() != w.others_true.size()) return false;
  const std::vector<Location> honest =
      AssembleProfile(w.agent, w.true_location, w.others_reports);
  const std::vector<Location> lying =
      AssembleProfile(w.agent, w.deviation, w.others_reports);
  const std::vector<Location> truth =
      AssembleProfile(w.agent, w.true_location, w.others_true);
  if (k < 1 || k > static_cast<int>(truth.size())) return false;
  const Location s = mechanism(honest);
  const Location t = mechanism(lying);
  const Rational u = EquilibriumUtility(truth, k, w.agent, s);
  const Rational v = EquilibriumUtility(truth, k, w.agent, t);
  return v > u && s == w.truthful_site && t == w.deviating_site &&
         u == w.truthful_utility && v == w.deviating_utility;
}

EquivalenceSummary EquivalenceExperiment(int n, int k, const GridSpec& grid,
                                         int samples, std::uint64_t seed,
                                         const AuditOptions& options) {
  if (n < 2 || k < 1 || k >= n) {
    throw DomainError("equivalence experiment needs 1 <= k < n");
  }
  if (samples < 0) throw InvalidArgument("negative sample count");
  std::mt19937_64 rng(seed);
  EquivalenceSummary summary;
  auto note = [&summary](std::string text) {
    ++summary.anomalies;
    summary.anomaly_notes.push_back(std::move(text));
  };

  for (int i = 0; i < samples; ++i) {
    const GmmSpec gmm = RandomGmm(n, grid, rng);
    const MechanismFn fn = AsFunction(MechanismSpec(gmm));
    ++summary.gmm_sampled;
    if (IsUncompromisingOnGrid(fn, n, grid, options.budget).passed) {
      ++summary.gmm_uncompromising_passed;
    } else {
      note("gmm sample " + std::to_string(i) + " is not uncompromising");
    }
    if (AuditDic(fn, n, k, grid, options).passed) {
      ++summary.gmm_dic_passed;
    } else {
      note("gmm sample " + std::to_string(i) + " failed the audit");
    }
  }

  const int max_redraws = 1000 * std::max(samples, 1);
  for (int i = 0; i < samples; ++i) {
    std::optional<TableMechanism> table;
    while (!table) {
      TableMechanism candidate = TableMechanism::Random(n, grid, rng);
      if (IsUncompromisingOnGrid(AsFunction(candidate), n, grid,
                                 options.budget)
              .passed) {
        if (++summary.table_redraws > max_redraws) {
          throw BudgetExceeded("could not draw a compromising table");
        }
        continue;
      }
      table.emplace(std::move(candidate));
    }
    ++summary.table_sampled;
    if (!AuditDic(AsFunction(*table), n, k, grid, options).passed) {
      ++summary.table_dic_failed;
    } else {
      note("table sample " + std::to_string(i) + " passed the audit");
    }
  }
  return summary;
}

}  // namespace capfac
