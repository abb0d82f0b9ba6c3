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

#ifndef CAPFAC_JSON_IO_H_
#define CAPFAC_JSON_IO_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "capfac/alloc_ext.h"
#include "capfac/audit.h"
#include "capfac/bounds.h"
#include "capfac/core_model.h"
#include "capfac/mechanisms.h"
#include "capfac/welfare.h"

namespace capfac {

using Json = nlohmann::json;

// Throws ParseError on malformed text.
Json ParseJsonText(std::string_view text);
// Compact by default; `indent` >= 0 pretty-prints. Ends with a newline.
std::string DumpJson(const Json& value, int indent = -1);

// Rationals are written as "p/q" strings. Strings (fractions or decimals)
// and plain JSON numbers are accepted on input.
Json ToJson(const Rational& value);
Rational RationalFromJson(const Json& value);
Json ToJson(const Location& value);
Location LocationFromJson(const Json& value);
Json ToJson(std::span<const Location> profile);
std::vector<Location> ProfileFromJson(const Json& value);

// {"locations": [...], "k": k}
Json ToJson(const Instance& instance);
Instance InstanceFromJson(const Json& value);

// {"variant": "median" | "constant" | "dictator" | "snap_dictator" | "gmm",
// ...}. GMM thresholds are keyed by the subset's sorted ids, concatenated
// for n <= 9 and comma separated from n = 10 on.
Json ToJson(const MechanismSpec& mechanism);
MechanismSpec MechanismFromJson(const Json& value);

Json ToJson(const EquilibriumOutcome& outcome);
Json ToJson(const OptimalSolution& solution);
Json ToJson(const WelfareReport& report);
Json ToJson(const ApproximationRatio& ratio);
Json ToJson(const DicWitness& witness);
Json ToJson(const AuditVerdict& verdict);
Json ToJson(const UncompromisingVerdict& verdict);
Json ToJson(const EquivalenceSummary& summary);
Json ToJson(const WorstCaseResult& result);
Json ToJson(const OptimalMisreport& misreport);
Json ToJson(const ClusterBoundReport& report);
Json ToJson(const Allocation& allocation);
Json ToJson(const AllocDicWitness& witness);
Json ToJson(const AllocDicVerdict& verdict);
Json ToJson(const AnonymityVerdict& verdict);
Json ToJson(const ImpossibilityReplay& replay);
Json ToJson(const AllocationSweep& sweep);
Json ToJson(const RevelationGap& gap);

}  // namespace capfac

#endif  // CAPFAC_JSON_IO_H_
