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

#include "oracles.h"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

#include "capfac/enumeration.h"

namespace capfac::oracle {

Location Pt(std::string_view text) { return Location::Parse(text); }

Profile Pts(std::initializer_list<std::string_view> texts) {
  Profile out;
  for (std::string_view t : texts) out.push_back(Pt(t));
  return out;
}

std::vector<bool> ServedBySorting(const Profile& x, int k, const Location& s) {
  const int n = static_cast<int>(x.size());
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
    return Distance(x[a], s) < Distance(x[b], s);
  });
  std::vector<bool> served(n, false);
  for (int i = 0; i < std::min(n, k); ++i) served[ids[i]] = true;
  return served;
}

std::vector<Rational> Utilities(const Profile& x, int k, const Location& s) {
  const std::vector<bool> served = ServedBySorting(x, k, s);
  std::vector<Rational> out(x.size(), Rational(0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (served[i]) out[i] = 1 - Distance(x[i], s);
  }
  return out;
}

Rational WelfareAt(const Profile& x, int k, const Location& s) {
  Rational total(0);
  for (const Rational& u : Utilities(x, k, s)) total += u;
  return total;
}

std::pair<Location, Rational> GridOptimum(const Profile& x, int k, int q) {
  Location best_site;
  Rational best(-1);
  for (int i = 0; i <= q; ++i) {
    const Location s(i, q);
    const Rational w = WelfareAt(x, k, s);
    if (w > best) {
      best = w;
      best_site = s;
    }
  }
  return {best_site, best};
}

Rational BestAgentSiteWelfare(const Profile& x, int k) {
  Rational best(0);
  for (const Location& s : x) best = std::max(best, WelfareAt(x, k, s));
  return best;
}

Location GmmByDefinition(const std::vector<Location>& thresholds,
                         const Profile& x) {
  const int n = static_cast<int>(x.size());
  std::optional<Location> best;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Location value = thresholds[mask];
    for (int i = 0; i < n; ++i) {
      if ((mask >> i) & 1u) value = std::max(value, x[i]);
    }
    if (!best || value < *best) best = value;
  }
  return *best;
}

Location LowerMedian(Profile x) {
  std::sort(x.begin(), x.end());
  return x[(x.size() - 1) / 2];
}

std::vector<Profile> AllProfiles(int n, int q) {
  std::vector<Profile> out{Profile{}};
  for (int a = 0; a < n; ++a) {
    std::vector<Profile> next;
    for (const Profile& p : out) {
      for (int i = 0; i <= q; ++i) {
        Profile longer = p;
        longer.push_back(Location(i, q));
        next.push_back(std::move(longer));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::optional<Violation> FirstDicViolation(const Rule& rule, int n, int k,
                                           int q) {
  const std::vector<Profile> others = AllProfiles(n - 1, q);
  auto with = [](Profile rest, int agent, const Location& own) {
    rest.insert(rest.begin() + (agent - 1), own);
    return rest;
  };
  for (int agent = 1; agent <= n; ++agent) {
    for (int a = 0; a <= q; ++a) {
      const Location own(a, q);
      for (int b = 0; b <= q; ++b) {
        const Location dev(b, q);
        for (const Profile& reports : others) {
          const Location s = rule(with(reports, agent, own));
          const Location t = rule(with(reports, agent, dev));
          for (const Profile& truth : others) {
            const Profile x = with(truth, agent, own);
            const Rational u = Utilities(x, k, s)[agent - 1];
            const Rational v = Utilities(x, k, t)[agent - 1];
            if (v > u) return Violation{agent, own, dev, reports, truth, u, v};
          }
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<Rational> WorstRatio(const Rule& rule, int n, int k, int q) {
  Rational worst(1);
  for (const Profile& x : AllProfiles(n, q)) {
    const Rational opt = BestAgentSiteWelfare(x, k);
    const Rational got = WelfareAt(x, k, rule(x));
    if (got == 0) {
      if (opt > 0) return std::nullopt;
      continue;
    }
    worst = std::max(worst, opt / got);
  }
  return worst;
}

std::uint64_t AnonymousServedTableCount(int n, int k, int d) {
  std::vector<std::uint32_t> subsets;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (std::popcount(mask) <= k) subsets.push_back(mask);
  }
  // Group profiles (digit vectors) by their sorted digits.
  std::map<std::vector<int>, std::vector<std::vector<int>>> orbits;
  std::vector<std::vector<int>> all{{}};
  for (int a = 0; a < n; ++a) {
    std::vector<std::vector<int>> next;
    for (const auto& p : all) {
      for (int v = 0; v < d; ++v) {
        auto longer = p;
        longer.push_back(v);
        next.push_back(longer);
      }
    }
    all = std::move(next);
  }
  for (const auto& p : all) {
    auto key = p;
    std::sort(key.begin(), key.end());
    orbits[key].push_back(p);
  }

  std::uint64_t total = 1;
  for (const auto& [key, members] : orbits) {
    const int size = static_cast<int>(members.size());
    auto index_of = [&](const std::vector<int>& p) {
      return static_cast<int>(std::find(members.begin(), members.end(), p) -
                              members.begin());
    };
    std::uint64_t valid = 0;
    std::vector<int> choice(size, 0);
    while (true) {
      bool ok = true;
      for (int m = 0; m < size && ok; ++m) {
        const auto& p = members[m];
        for (int i = 0; i < n && ok; ++i) {
          if (std::count(p.begin(), p.end(), p[i]) != 1) continue;
          for (int j = 0; j < n && ok; ++j) {
            if (j == i) continue;
            auto swapped = p;
            std::swap(swapped[i], swapped[j]);
            const int other = index_of(swapped);
            const bool before = (subsets[choice[m]] >> i) & 1u;
            const bool after = (subsets[choice[other]] >> j) & 1u;
            ok = before == after;
          }
        }
      }
      if (ok) ++valid;
      int pos = size - 1;
      while (pos >= 0 && ++choice[pos] == static_cast<int>(subsets.size())) {
        choice[pos--] = 0;
      }
      if (pos < 0) break;
    }
    total *= valid;
  }
  return total;
}

Profile RandomGridProfile(std::mt19937_64& rng, int n, int q) {
  Profile out;
  for (int i = 0; i < n; ++i) {
    const auto numerator = static_cast<std::int64_t>(UniformBelow(rng, q + 1));
    out.push_back(Location(numerator, q));
  }
  return out;
}

}  // namespace capfac::oracle
