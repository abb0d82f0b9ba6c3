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

#ifndef CAPFAC_ENUMERATION_H_
#define CAPFAC_ENUMERATION_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "capfac/location.h"

namespace capfac {

// The uniform grid {0, 1/q, ..., 1}.
class GridSpec {
 public:
  // Throws InvalidArgument unless denominator >= 1.
  explicit GridSpec(int denominator);

  int denominator() const { return denominator_; }
  int size() const { return denominator_ + 1; }
  const Location& point(int index) const { return points_[index]; }
  const std::vector<Location>& points() const { return points_; }

 private:
  int denominator_;
  std::vector<Location> points_;
};

// Mixed-radix indexing of profiles (d_1, ..., d_n) with digits in [0, radix).
// Agent 1 is the most significant digit, so increasing index is
// lexicographic order over profiles.
class ProfileSpace {
 public:
  // Throws InstanceTooLarge if radix^agents does not fit in 62 bits.
  ProfileSpace(int agents, int radix);

  int agents() const { return agents_; }
  int radix() const { return radix_; }
  std::uint64_t size() const { return size_; }
  // Weight of the digit of 1-based `agent`.
  std::uint64_t stride(int agent) const { return strides_[agent - 1]; }

  void Decode(std::uint64_t index, std::span<int> digits) const;
  std::uint64_t Encode(std::span<const int> digits) const;

 private:
  int agents_;
  int radix_;
  std::uint64_t size_;
  std::vector<std::uint64_t> strides_;
};

// Saturating helpers for budget arithmetic.
std::uint64_t SaturatingMul(std::uint64_t a, std::uint64_t b);
std::uint64_t SaturatingPow(std::uint64_t base, int exponent);
// Number of non-decreasing length-n sequences over `radix` symbols.
std::uint64_t MultisetCount(int n, int radix);

// Default cap on enumerated work units (profiles, audit quadruples).
inline constexpr std::uint64_t kDefaultBudget = 250'000'000;

// kDefaultBudget, unless the CAPFAC_BUDGET environment variable holds a
// positive integer.
std::uint64_t DefaultBudget();

// Advances `digits` to the next non-decreasing sequence over [0, radix).
// Returns false after the last one.
bool NextNonDecreasing(std::span<int> digits, int radix);

// Uniform integer in [0, bound) by rejection sampling, so seeded streams are
// identical across standard library implementations.
std::uint64_t UniformBelow(std::mt19937_64& rng, std::uint64_t bound);

}  // namespace capfac

#endif  // CAPFAC_ENUMERATION_H_
