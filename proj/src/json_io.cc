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

#include "capfac/json_io.h"

#include <algorithm>
#include <charconv>
#include <string>
#include <system_error>
#include <utility>
#include <variant>

#include "capfac/errors.h"

namespace capfac {
namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

const Json& Field(const Json& object, const char* name) {
  if (!object.is_object() || !object.contains(name)) {
    throw ParseError(std::string("missing field \"") + name + "\"");
  }
  return object.at(name);
}

int IntFromJson(const Json& value, const char* what) {
  if (!value.is_number_integer()) {
    throw ParseError(std::string(what) + " must be an integer");
  }
  return value.get<int>();
}

std::string SubsetKey(std::uint32_t subset, int agents) {
  std::string key;
  for (int a = 1; a <= agents; ++a) {
    if (!((subset >> (a - 1)) & 1u)) continue;
    if (agents >= 10 && !key.empty()) key += ',';
    key += std::to_string(a);
  }
  return key;
}

std::uint32_t SubsetFromKey(const std::string& key, int agents) {
  std::vector<int> ids;
  if (key.find(',') != std::string::npos || agents >= 10) {
    std::size_t start = 0;
    while (start <= key.size() && !key.empty()) {
      const std::size_t end = std::min(key.find(',', start), key.size());
      int id = 0;
      const auto [ptr, ec] =
          std::from_chars(key.data() + start, key.data() + end, id);
      if (ec != std::errc() || ptr != key.data() + end) {
        throw ParseError("bad subset key \"" + key + "\"");
      }
      ids.push_back(id);
      start = end + 1;
    }
  } else {
    for (char c : key) {
      if (c < '1' || c > '9') {
        throw ParseError("bad subset key \"" + key + "\"");
      }
      ids.push_back(c - '0');
    }
  }
  std::uint32_t subset = 0;
  for (int id : ids) {
    if (id < 1 || id > agents) {
      throw ParseError("subset key \"" + key + "\" names agent " +
                       std::to_string(id) + " out of range");
    }
    subset |= 1u << (id - 1);
  }
  return subset;
}

Json OptionalProfile(const std::vector<Location>& profile) {
  return ToJson(std::span<const Location>(profile));
}

}  // namespace

Json ParseJsonText(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

std::string DumpJson(const Json& value, int indent) {
  return value.dump(indent) + "\n";
}

Json ToJson(const Rational& value) { return FormatRational(value); }

Rational RationalFromJson(const Json& value) {
  if (value.is_string()) return ParseRational(value.get<std::string>());
  if (value.is_number_integer()) {
    return Rational(value.get<std::int64_t>());
  }
  if (value.is_number_float()) {
    // Shortest round-trip text, so 0.2 reads as 1/5.
    char buffer[64];
    const auto [end, ec] =
        std::to_chars(buffer, buffer + sizeof(buffer), value.get<double>(),
                      std::chars_format::fixed);
    if (ec != std::errc()) throw ParseError("unprintable number");
    return ParseRational(std::string_view(buffer, end - buffer));
  }
  throw ParseError("expected a rational, got " + value.dump());
}

Json ToJson(const Location& value) { return value.ToString(); }

Location LocationFromJson(const Json& value) {
  return Location(RationalFromJson(value));
}

Json ToJson(std::span<const Location> profile) {
  Json out = Json::array();
  for (const Location& x : profile) out.push_back(ToJson(x));
  return out;
}

std::vector<Location> ProfileFromJson(const Json& value) {
  if (!value.is_array()) throw ParseError("expected an array of locations");
  std::vector<Location> out;
  out.reserve(value.size());
  for (const Json& x : value) out.push_back(LocationFromJson(x));
  return out;
}

Json ToJson(const Instance& instance) {
  return Json{{"locations", OptionalProfile(instance.locations())},
              {"k", instance.capacity()}};
}

Instance InstanceFromJson(const Json& value) {
  return Instance(ProfileFromJson(Field(value, "locations")),
                  IntFromJson(Field(value, "k"), "k"));
}

Json ToJson(const MechanismSpec& mechanism) {
  return std::visit(
      Overloaded{
          [](const MedianMechanism&) { return Json{{"variant", "median"}}; },
          [](const ConstantMechanism& m) {
            return Json{{"variant", "constant"}, {"s", ToJson(m.site)}};
          },
          [](const DictatorMechanism& m) {
            return Json{{"variant", "dictator"}, {"agent", m.agent}};
          },
          [](const SnapDictatorMechanism& m) {
            return Json{{"variant", "snap_dictator"},
                        {"agent", m.agent},
                        {"targets", {ToJson(m.first), ToJson(m.second)}}};
          },
          [](const GmmSpec& m) {
            Json a = Json::object();
            const std::uint32_t count = 1u << m.agents();
            for (std::uint32_t s = 0; s < count; ++s) {
              a[SubsetKey(s, m.agents())] = ToJson(m.threshold(s));
            }
            return Json{{"variant", "gmm"}, {"n", m.agents()}, {"a", a}};
          },
      },
      mechanism);
}

MechanismSpec MechanismFromJson(const Json& value) {
  const Json& variant = Field(value, "variant");
  if (!variant.is_string()) throw ParseError("variant must be a string");
  const std::string name = variant.get<std::string>();
  if (name == "median") return MedianMechanism{};
  if (name == "constant") {
    return ConstantMechanism{LocationFromJson(Field(value, "s"))};
  }
  if (name == "dictator") {
    return DictatorMechanism{IntFromJson(Field(value, "agent"), "agent")};
  }
  if (name == "snap_dictator") {
    SnapDictatorMechanism m;
    m.agent = IntFromJson(Field(value, "agent"), "agent");
    if (value.contains("targets")) {
      const std::vector<Location> targets =
          ProfileFromJson(value.at("targets"));
      if (targets.size() != 2) {
        throw ParseError("snap_dictator needs exactly two targets");
      }
      m.first = targets[0];
      m.second = targets[1];
    }
    return m;
  }
  if (name == "gmm") {
    const int n = IntFromJson(Field(value, "n"), "n");
    if (n < 1 || n > GmmSpec::kMaxAgents) {
      throw ParseError("gmm n must lie in [1, 16]");
    }
    const Json& a = Field(value, "a");
    if (!a.is_object()) throw ParseError("gmm thresholds must be an object");
    const std::uint32_t count = 1u << n;
    std::vector<std::optional<Location>> slots(count);
    for (const auto& [key, threshold] : a.items()) {
      const std::uint32_t subset = SubsetFromKey(key, n);
      if (slots[subset]) {
        throw ParseError("duplicate gmm subset \"" + key + "\"");
      }
      slots[subset] = LocationFromJson(threshold);
    }
    std::vector<Location> thresholds;
    thresholds.reserve(count);
    for (std::uint32_t s = 0; s < count; ++s) {
      if (!slots[s]) {
        throw ParseError("gmm threshold missing for subset \"" +
                         SubsetKey(s, n) + "\"");
      }
      thresholds.push_back(*slots[s]);
    }
    return GmmSpec(n, std::move(thresholds));
  }
  throw ParseError("unknown mechanism variant \"" + name + "\"");
}

Json ToJson(const EquilibriumOutcome& outcome) {
  Json utilities = Json::array();
  for (const Rational& u : outcome.utilities) utilities.push_back(ToJson(u));
  Rational welfare(0);
  for (const Rational& u : outcome.utilities) welfare += u;
  return Json{{"served", outcome.served},
              {"utilities", utilities},
              {"welfare", ToJson(welfare)}};
}

Json ToJson(const OptimalSolution& solution) {
  return Json{{"s", ToJson(solution.site)},
              {"welfare", ToJson(solution.welfare)}};
}

Json ToJson(const ApproximationRatio& ratio) { return ratio.ToString(); }

Json ToJson(const WelfareReport& report) {
  return Json{{"mechanism_location", ToJson(report.mechanism_location)},
              {"mechanism_welfare", ToJson(report.mechanism_welfare)},
              {"optimal_location", ToJson(report.optimal_location)},
              {"optimal_welfare", ToJson(report.optimal_welfare)},
              {"ratio", ToJson(report.ratio)}};
}

Json ToJson(const DicWitness& w) {
  return Json{{"agent", w.agent},
              {"true_location", ToJson(w.true_location)},
              {"deviation", ToJson(w.deviation)},
              {"others_reports", OptionalProfile(w.others_reports)},
              {"others_true", OptionalProfile(w.others_true)},
              {"truthful_site", ToJson(w.truthful_site)},
              {"deviating_site", ToJson(w.deviating_site)},
              {"truthful_utility", ToJson(w.truthful_utility)},
              {"deviating_utility", ToJson(w.deviating_utility)},
              {"gain", ToJson(w.deviating_utility - w.truthful_utility)}};
}

namespace {

Json ToJson(const UncompromisingWitness& w) {
  return Json{{"profile", OptionalProfile(w.profile)},
              {"agent", w.agent},
              {"deviation", ToJson(w.deviation)},
              {"before", ToJson(w.before)},
              {"after", ToJson(w.after)}};
}

Json ToJson(const AnonymityWitness& w) {
  return Json{{"profile", OptionalProfile(w.profile)},
              {"swapped", OptionalProfile(w.swapped)},
              {"agent", w.agent},
              {"other", w.other},
              {"agent_served", w.agent_served},
              {"other_served_after_swap", w.other_served_after_swap}};
}

template <class W>
Json VerdictJson(const Verdict<W>& verdict) {
  Json out{{"passed", verdict.passed},
           {"instances_checked", verdict.instances_checked}};
  out["witness"] = verdict.witness ? ToJson(*verdict.witness) : Json(nullptr);
  return out;
}

}  // namespace

Json ToJson(const AuditVerdict& verdict) { return VerdictJson(verdict); }

Json ToJson(const UncompromisingVerdict& verdict) {
  return VerdictJson(verdict);
}

Json ToJson(const EquivalenceSummary& s) {
  return Json{{"gmm_sampled", s.gmm_sampled},
              {"gmm_dic_passed", s.gmm_dic_passed},
              {"gmm_uncompromising_passed", s.gmm_uncompromising_passed},
              {"table_sampled", s.table_sampled},
              {"table_dic_failed", s.table_dic_failed},
              {"table_redraws", s.table_redraws},
              {"anomalies", s.anomalies},
              {"anomaly_notes", s.anomaly_notes}};
}

Json ToJson(const WorstCaseResult& r) {
  return Json{{"instance", ToJson(r.instance)},
              {"mechanism_location", ToJson(r.mechanism_site)},
              {"optimal_welfare", ToJson(r.optimal_welfare)},
              {"mechanism_welfare", ToJson(r.mechanism_welfare)},
              {"ratio", ToJson(r.ratio)},
              {"profiles_evaluated", r.profiles_evaluated}};
}

Json ToJson(const OptimalMisreport& m) {
  return Json{{"truthful", ToJson(m.truthful)},
              {"deviated", ToJson(m.deviated)},
              {"agent", m.agent},
              {"true_location", ToJson(m.true_location)},
              {"reported_location", ToJson(m.reported_location)},
              {"truthful_site", ToJson(m.truthful_site)},
              {"deviating_site", ToJson(m.deviating_site)},
              {"truthful_utility", ToJson(m.truthful_utility)},
              {"deviating_utility", ToJson(m.deviating_utility)},
              {"gain", ToJson(m.gain)},
              {"confirmed", m.confirmed}};
}

Json ToJson(const ClusterBoundReport& r) {
  Json profiles = Json::array();
  for (const PinnedProfile& p : r.profiles) {
    profiles.push_back(Json{{"instance", ToJson(p.instance)},
                            {"forced_site", ToJson(p.forced_site)}});
  }
  return Json{{"profiles", profiles},
              {"pinned", r.pinned},
              {"mechanism_location", ToJson(r.mechanism_site)},
              {"optimal_welfare", ToJson(r.optimal_welfare)},
              {"mechanism_welfare", ToJson(r.mechanism_welfare)},
              {"ratio", ToJson(r.ratio)},
              {"lower_bound", ToJson(r.bound)}};
}

Json ToJson(const Allocation& allocation) {
  return Json{{"s", ToJson(allocation.site)},
              {"served", ServedAgents(allocation)}};
}

Json ToJson(const AllocDicWitness& w) {
  return Json{{"agent", w.agent},
              {"true_location", ToJson(w.true_location)},
              {"deviation", ToJson(w.deviation)},
              {"others_reports", OptionalProfile(w.others_reports)},
              {"others_true", OptionalProfile(w.others_true)},
              {"truthful", ToJson(w.truthful)},
              {"deviating", ToJson(w.deviating)},
              {"truthful_utility", ToJson(w.truthful_utility)},
              {"deviating_utility", ToJson(w.deviating_utility)}};
}

Json ToJson(const AllocDicVerdict& verdict) { return VerdictJson(verdict); }

Json ToJson(const AnonymityVerdict& verdict) { return VerdictJson(verdict); }

Json ToJson(const ImpossibilityReplay& r) {
  return Json{{"i_star", r.i_star},
              {"j_star", r.j_star},
              {"all_high", ToJson(r.all_high)},
              {"j_star_low", ToJson(r.j_star_low)},
              {"case", r.case_number},
              {"witness", ToJson(r.witness)},
              {"reverified", r.reverified}};
}

Json ToJson(const AllocationSweep& s) {
  return Json{{"agents", s.agents},
              {"capacity", s.capacity},
              {"domain", OptionalProfile(s.domain)},
              {"tables_enumerated", s.tables_enumerated},
              {"tables_closed_form", s.tables_closed_form},
              {"served_tables", s.served_tables},
              {"anonymous_served_tables", s.anonymous_served_tables},
              {"anonymous_tables", s.anonymous_tables},
              {"anonymous_dic_passing", s.anonymous_dic_passing}};
}

Json ToJson(const RevelationGap& g) {
  Json out{{"location_rule_passes", g.location_rule_passes},
           {"table_anonymous", g.table_anonymous},
           {"table_fails", g.table_fails}};
  out["witness"] = g.witness ? ToJson(*g.witness) : Json(nullptr);
  return out;
}

}  // namespace capfac
