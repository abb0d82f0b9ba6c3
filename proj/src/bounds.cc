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

#include "capfac/bounds.h"

#include <algorithm>
#include <functional>
#include <sstream>
#include <utility>

#include "capfac/errors.h"
#include "capfac/parallel.h"

namespace capfac {
namespace {

void CheckCapacity(int n, int k) {
  if (k < 1 || k > n) {
    throw InvalidArgument("capacity " + std::to_string(k) +
                          " outside [1, " + std::to_string(n) + "]");
  }
}

Rational TwoKOverKPlusOne(int k) { return Rational(2 * k, k + 1); }

struct Scored {
  std::vector<Location> profile;
  Location site;
  Rational optimal;
  Rational achieved;
  ApproximationRatio ratio;
};

Scored Score(const MechanismFn& mechanism, std::vector<Location> profile,
             int k) {
  const Instance instance(profile, k);
  const Location site = mechanism(profile);
  const Rational optimal = OptimalLocation(instance).welfare;
  const Rational achieved = Welfare(instance, site);
  return Scored{std::move(profile), site, optimal, achieved,
                ApproximationRatio::Of(optimal, achieved)};
}

// Replaces the incumbent only on a strictly larger ratio.
void Offer(std::optional<Scored>& best, Scored candidate) {
  if (!best || candidate.ratio > best->ratio) best = std::move(candidate);
}

std::optional<Scored> ScanProduct(const MechanismFn& mechanism, int n, int k,
                                  const GridSpec& grid, int threads) {
  const ProfileSpace space(n, grid.size());
  const int workers = ResolveThreadCount(threads);
  const std::size_t chunks =
      std::min<std::uint64_t>(space.size(),
                              static_cast<std::uint64_t>(workers) * 8);
  std::vector<std::optional<Scored>> partial(chunks);
  ParallelFor(chunks, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<int> digits(n);
    std::vector<Location> profile(n);
    for (std::size_t c = begin; c < end; ++c) {
      const std::uint64_t lo = space.size() * c / chunks;
      const std::uint64_t hi = space.size() * (c + 1) / chunks;
      for (std::uint64_t p = lo; p < hi; ++p) {
        space.Decode(p, digits);
        for (int a = 0; a < n; ++a) profile[a] = grid.point(digits[a]);
        Offer(partial[c], Score(mechanism, profile, k));
      }
    }
  });
  std::optional<Scored> best;
  for (auto& part : partial) {
    if (part) Offer(best, std::move(*part));
  }
  return best;
}

std::optional<Scored> ScanSorted(const MechanismFn& mechanism, int n, int k,
                                 const GridSpec& grid) {
  std::vector<int> digits(n, 0);
  std::vector<Location> profile(n);
  std::optional<Scored> best;
  do {
    for (int a = 0; a < n; ++a) profile[a] = grid.point(digits[a]);
    Offer(best, Score(mechanism, profile, k));
  } while (NextNonDecreasing(digits, grid.size()));
  return best;
}

// Number of tuples picking one entry per list, non-decreasing when
// `sorted_only`. Saturates.
std::uint64_t CountTuples(const std::vector<std::vector<Rational>>& lists,
                          bool sorted_only) {
  if (!sorted_only) {
    std::uint64_t total = 1;
    for (const auto& list : lists) total = SaturatingMul(total, list.size());
    return total;
  }
  std::vector<std::uint64_t> ways(lists.back().size(), 1);
  for (int i = static_cast<int>(lists.size()) - 2; i >= 0; --i) {
    const auto& next = lists[i + 1];
    std::vector<std::uint64_t> here(lists[i].size(), 0);
    for (std::size_t a = 0; a < lists[i].size(); ++a) {
      std::uint64_t sum = 0;
      for (std::size_t b = 0; b < next.size(); ++b) {
        if (next[b] < lists[i][a]) continue;
        sum += ways[b];
        if (sum < ways[b]) sum = ~std::uint64_t{0};
      }
      here[a] = sum;
    }
    ways = std::move(here);
  }
  std::uint64_t total = 0;
  for (std::uint64_t w : ways) {
    total += w;
    if (total < w) return ~std::uint64_t{0};
  }
  return total;
}

using ProfileVisitor = std::function<void(const std::vector<Location>&)>;

void EnumerateTuples(const std::vector<std::vector<Rational>>& lists,
                     bool sorted_only, std::size_t depth,
                     std::vector<Location>& profile,
                     const ProfileVisitor& visit) {
  if (depth == lists.size()) {
    visit(profile);
    return;
  }
  for (const Rational& value : lists[depth]) {
    if (sorted_only && depth > 0 && value < profile[depth - 1].value()) {
      continue;
    }
    profile[depth] = Location(value);
    EnumerateTuples(lists, sorted_only, depth + 1, profile, visit);
  }
}

std::vector<Rational> Neighbourhood(const Rational& center,
                                    const Rational& step) {
  std::vector<Rational> out;
  for (int j = -4; j <= 4; ++j) {
    const Rational v = center + step * j;
    if (v < 0 || v > 1) continue;
    out.push_back(v);
  }
  return out;
}

}  // namespace

Rational DicLowerBound(int n, int k) {
  if (n < 2) throw InvalidArgument("lower bound needs n >= 2");
  CheckCapacity(n, k);
  if (k <= n / 2) return TwoKOverKPlusOne(k);  // n/2 == ceil((n-1)/2)
  return std::max(Rational(n - 1, k + 1), Rational(1));
}

Rational MedianUpperBound(int n, int k) {
  if (n < 5) throw DomainError("median bound holds for n >= 5");
  CheckCapacity(n, k);
  const Rational first = TwoKOverKPlusOne(k);
  if (k <= (n + 1) / 2) return first;
  const int denominator = 3 * k - 2 * n - 2;
  if (denominator <= 0) return first;
  return std::min(first, Rational(1) + Rational(2 * (n - k + 1), denominator));
}

Rational DefaultMisreportEpsilon(int n, int k) {
  CheckCapacity(n, k);
  return Rational(1, 4 * (n / k + 1) * static_cast<std::int64_t>(n));
}

OptimalMisreport BuildOptimalMisreport(int n, int k,
                                       const std::optional<Rational>& epsilon) {
  if (k < 2 || k > n - 1) {
    throw DomainError("misreport construction needs 2 <= k <= n-1");
  }
  const int groups = n / k;
  const int positions = groups + 1;
  const Rational eps = epsilon.value_or(DefaultMisreportEpsilon(n, k));
  if (eps <= 0 || eps * positions * positions >= 1 ||
      eps * 3 * positions >= 1) {
    throw DomainError("epsilon " + FormatRational(eps) +
                      " too large for the construction");
  }

  std::vector<Location> reports;
  reports.reserve(n);
  const int remainder = n - k * groups;
  for (int t = 1; t <= positions; ++t) {
    const int size = t <= groups ? k : remainder;
    const Rational y(t, positions);
    for (int j = 0; j < size; ++j) {
      reports.push_back(Location(j == 0 ? y - eps * t : y));
    }
  }

  const int agent = 1;
  const Rational y1(1, positions);
  const Location reported(y1 - eps);
  const Location actual(y1 - eps * 3);
  std::vector<Location> truth = reports;
  truth[agent - 1] = actual;

  Instance truthful(truth, k);
  Instance deviated(reports, k);
  const Location s = OptimalLocation(truthful).site;
  const Location t = OptimalLocation(deviated).site;
  const Rational u = EquilibriumUtility(truth, k, agent, s);
  const Rational v = EquilibriumUtility(truth, k, agent, t);
  return OptimalMisreport{std::move(truthful), std::move(deviated), agent,
                          actual, reported, s, t, u, v, v - u, v > u};
}

ClusterBoundReport ClusterLowerBound(const MechanismFn& mechanism, int n,
                                     int k, const Rational& epsilon) {
  if (n < 2) throw InvalidArgument("cluster construction needs n >= 2");
  CheckCapacity(n, k);
  if (epsilon <= 0 || epsilon >= 1) {
    throw InvalidArgument("epsilon must lie in (0, 1)");
  }
  std::vector<Location> profile;
  profile.reserve(n);
  const Rational left = Rational(1, 2) - epsilon / 2;
  for (int j = 1; j <= n; ++j) {
    profile.push_back(Location(left + epsilon * j / (n + 1)));
  }

  ClusterBoundReport report;
  const Location s = mechanism(profile);
  report.profiles.push_back({Instance(profile, k), s});
  for (int a = 0; a < n; ++a) {
    if (profile[a] == s) continue;
    profile[a] = profile[a] < s ? Location(0, 1) : Location(1, 1);
    report.profiles.push_back({Instance(profile, k), s});
  }
  for (const PinnedProfile& p : report.profiles) {
    if (mechanism(p.instance.locations()) != p.forced_site) {
      report.pinned = false;
    }
  }

  const Instance& last = report.profiles.back().instance;
  report.mechanism_site = mechanism(last.locations());
  report.optimal_welfare = OptimalLocation(last).welfare;
  report.mechanism_welfare = Welfare(last, report.mechanism_site);
  report.ratio =
      ApproximationRatio::Of(report.optimal_welfare, report.mechanism_welfare);
  report.bound = DicLowerBound(n, k);
  return report;
}

ClusterBoundReport ClusterLowerBound(const MechanismSpec& mechanism, int n,
                                     int k, const Rational& epsilon) {
  return ClusterLowerBound(AsFunction(mechanism), n, k, epsilon);
}

WorstCaseResult WorstCaseSearch(const MechanismSpec& mechanism, int n, int k,
                                const GridSpec& grid,
                                const SearchOptions& options) {
  if (n < 1) throw InvalidArgument("search needs at least one agent");
  CheckCapacity(n, k);
  if (options.refine_steps < 0) {
    throw InvalidArgument("negative refinement count");
  }
  const bool sorted_only = IsAnonymous(mechanism);
  const std::uint64_t profiles = sorted_only
                                     ? MultisetCount(n, grid.size())
                                     : SaturatingPow(grid.size(), n);
  if (profiles > options.budget) {
    throw BudgetExceeded("worst-case search needs " +
                         std::to_string(profiles) + " profiles, budget is " +
                         std::to_string(options.budget));
  }
  const MechanismFn fn = AsFunction(mechanism);
  std::optional<Scored> best =
      sorted_only ? ScanSorted(fn, n, k, grid)
                  : ScanProduct(fn, n, k, grid, options.threads);
  std::uint64_t evaluated = profiles;

  Rational step(1, grid.denominator());
  for (int round = 0; round < options.refine_steps; ++round) {
    step /= 2;
    std::vector<std::vector<Rational>> lists;
    lists.reserve(n);
    for (const Location& x : best->profile) {
      lists.push_back(Neighbourhood(x.value(), step));
    }
    auto visit = [&](const std::vector<Location>& candidate) {
      ++evaluated;
      Offer(best, Score(fn, candidate, k));
    };
    if (CountTuples(lists, sorted_only) <= options.budget) {
      std::vector<Location> profile(n);
      EnumerateTuples(lists, sorted_only, 0, profile, visit);
    } else {
      // Too many combinations: move one coordinate at a time.
      const std::vector<Location> center = best->profile;
      for (int a = 0; a < n; ++a) {
        for (const Rational& v : lists[a]) {
          std::vector<Location> candidate = center;
          candidate[a] = Location(v);
          if (sorted_only) std::sort(candidate.begin(), candidate.end());
          visit(candidate);
        }
      }
    }
  }

  return WorstCaseResult{Instance(best->profile, k), best->site,
                         best->optimal, best->achieved, best->ratio,
                         evaluated};
}

BoundCurve RatioCurve(int n, const GridSpec& grid,
                      const SearchOptions& options) {
  BoundCurve curve;
  curve.n = n;
  for (int k = 1; k <= n; ++k) {
    CurveRow row;
    row.k = k;
    row.lower_bound = DicLowerBound(n, k);
    if (n >= 5) row.upper_bound = MedianUpperBound(n, k);
    try {
      const WorstCaseResult found =
          WorstCaseSearch(MedianMechanism{}, n, k, grid, options);
      row.empirical = found.ratio;
      row.witness = found.instance.locations();
    } catch (const BudgetExceeded&) {
      // Left blank; the closed-form columns are still reported.
    }
    curve.rows.push_back(std::move(row));
  }
  return curve;
}

std::string CurveToCsv(const BoundCurve& curve) {
  std::ostringstream out;
  out << "k,lower_bound,upper_bound,empirical,witness_profile\n";
  for (const CurveRow& row : curve.rows) {
    out << row.k << ',' << FormatRational(row.lower_bound) << ',';
    if (row.upper_bound) out << FormatRational(*row.upper_bound);
    out << ',';
    if (row.empirical) out << row.empirical->ToString();
    out << ',';
    if (!row.witness.empty()) {
      out << "\"[";
      for (std::size_t i = 0; i < row.witness.size(); ++i) {
        if (i > 0) out << ',';
        out << "\"\"" << row.witness[i].ToString() << "\"\"";
      }
      out << "]\"";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace capfac
