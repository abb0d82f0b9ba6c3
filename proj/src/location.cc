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

#include "capfac/location.h"

#include "capfac/errors.h"

namespace capfac {

Location::Location(const Rational& value) : value_(value) {
  if (value < 0 || value > 1) {
    throw DomainError("location " + FormatRational(value) +
                      " lies outside [0,1]");
  }
}

Location::Location(std::int64_t numerator, std::int64_t denominator)
    : Location(Rational(numerator, denominator)) {}

Location Location::Parse(std::string_view text) {
  return Location(ParseRational(text));
}

}  // namespace capfac
