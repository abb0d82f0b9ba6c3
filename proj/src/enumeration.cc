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

#include "capfac/enumeration.h"

#include <cstdlib>
#include <limits>
#include <string>

#include "capfac/errors.h"

namespace capfac {

GridSpec::GridSpec(int denominator) : denominator_(denominator) {
  if (denominator < 1) {
    throw InvalidArgument("grid denominator must be positive, got " +
                          std::to_string(denominator));
  }
  points_.reserve(denominator + 1);
  for (int i = 0; i <= denominator; ++i) {
    points_.emplace_back(i, denominator);
  }
}

ProfileSpace::ProfileSpace(int agents, int radix)
    : agents_(agents), radix_(radix), strides_(agents) {
  if (agents < 1 || radix < 1) {
    throw InvalidArgument("profile space needs positive agents and radix");
  }
  size_ = SaturatingPow(radix, agents);
  if (size_ > (std::uint64_t{1} << 62)) {
    throw InstanceTooLarge("profile space " + std::to_string(radix) + "^" +
                           std::to_string(agents) + " is too large");
  }
  std::uint64_t stride = 1;
  for (int a = agents - 1; a >= 0; --a) {
    strides_[a] = stride;
    stride *= radix;
  }
}

void ProfileSpace::Decode(std::uint64_t index, std::span<int> digits) const {
  for (int a = agents_ - 1; a >= 0; --a) {
    digits[a] = static_cast<int>(index % radix_);
    index /= radix_;
  }
}

std::uint64_t ProfileSpace::Encode(std::span<const int> digits) const {
  std::uint64_t index = 0;
  for (int a = 0; a < agents_; ++a) index = index * radix_ + digits[a];
  return index;
}

std::uint64_t SaturatingMul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t SaturatingPow(std::uint64_t base, int exponent) {
  std::uint64_t result = 1;
  for (int i = 0; i < exponent; ++i) result = SaturatingMul(result, base);
  return result;
}

std::uint64_t MultisetCount(int n, int radix) {
  // C(n + radix - 1, n), built incrementally so every prefix is integral.
  std::uint64_t result = 1;
  for (int i = 1; i <= n; ++i) {
    const std::uint64_t factor = static_cast<std::uint64_t>(radix - 1 + i);
    if (result > std::numeric_limits<std::uint64_t>::max() / factor) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = result * factor / i;
  }
  return result;
}

std::uint64_t DefaultBudget() {
  if (const char* env = std::getenv("CAPFAC_BUDGET")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return value;
  }
  return kDefaultBudget;
}

bool NextNonDecreasing(std::span<int> digits, int radix) {
  const int n = static_cast<int>(digits.size());
  int pos = n - 1;
  while (pos >= 0 && digits[pos] == radix - 1) --pos;
  if (pos < 0) return false;
  const int value = digits[pos] + 1;
  for (int i = pos; i < n; ++i) digits[i] = value;
  return true;
}

std::uint64_t UniformBelow(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("UniformBelow needs a positive bound");
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

}  // namespace capfac
