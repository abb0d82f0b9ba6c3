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

#ifndef CAPFAC_LOCATION_H_
#define CAPFAC_LOCATION_H_

#include <compare>
#include <string>
#include <string_view>

#include "capfac/rational.h"

namespace capfac {

// A point of the unit interval [0,1], held exactly.
class Location {
 public:
  Location() = default;

  // Throws DomainError unless 0 <= value <= 1.
  explicit Location(const Rational& value);
  Location(std::int64_t numerator, std::int64_t denominator);

  // Accepts anything ParseRational accepts.
  static Location Parse(std::string_view text);

  const Rational& value() const { return value_; }
  std::string ToString() const { return FormatRational(value_); }

  friend bool operator==(const Location& a, const Location& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Location& a,
                                          const Location& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  Rational value_{0};
};

// |a - b|, exact.
inline Rational Distance(const Location& a, const Location& b) {
  return AbsDiff(a.value(), b.value());
}

}  // namespace capfac

#endif  // CAPFAC_LOCATION_H_
