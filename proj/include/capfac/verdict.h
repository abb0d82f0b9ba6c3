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

#ifndef CAPFAC_VERDICT_H_
#define CAPFAC_VERDICT_H_

#include <cstdint>
#include <optional>

namespace capfac {

// Outcome of an exhaustive check. A failed verdict always carries the first
// counterexample found in the check's documented scan order.
template <typename Witness>
struct Verdict {
  bool passed = true;
  std::optional<Witness> witness;
  // Logical number of cases covered (up to and including the witness).
  std::uint64_t instances_checked = 0;
};

}  // namespace capfac

#endif  // CAPFAC_VERDICT_H_
