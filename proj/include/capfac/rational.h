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

#ifndef CAPFAC_RATIONAL_H_
#define CAPFAC_RATIONAL_H_

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

// Under C++20 the reversed-operand rewrite makes Boost 1.74's templated
// rational == integer overloads call each other forever. Exact non-template
// overloads win overload resolution and break the cycle.
namespace boost {

inline bool operator==(const rational<std::int64_t>& a, std::int64_t b) {
  return a.denominator() == 1 && a.numerator() == b;
}
inline bool operator==(const rational<std::int64_t>& a, int b) {
  return a == static_cast<std::int64_t>(b);
}

}  // namespace boost

namespace capfac {

// Exact rational used for every location, distance, utility and welfare.
using Rational = boost::rational<std::int64_t>;

// Parses "p", "p/q" or a finite decimal such as "0.375" into an exact
// rational. A leading '-' is accepted. Throws ParseError.
Rational ParseRational(std::string_view text);

// Canonical text form: "p" when the denominator is 1, otherwise "p/q".
std::string FormatRational(const Rational& value);

inline Rational AbsDiff(const Rational& a, const Rational& b) {
  return a < b ? b - a : a - b;
}

inline double ToDouble(const Rational& value) {
  return boost::rational_cast<double>(value);
}

}  // namespace capfac

#endif  // CAPFAC_RATIONAL_H_
