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

#include "capfac/rational.h"

#include <charconv>
#include <limits>
#include <string>

#include "capfac/errors.h"

namespace capfac {
namespace {

std::int64_t ParseInteger(std::string_view digits, std::string_view whole) {
  if (digits.empty()) {
    throw ParseError("malformed rational literal \"" + std::string(whole) +
                     "\"");
  }
  std::int64_t value = 0;
  auto [end, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec == std::errc::result_out_of_range) {
    throw ParseError("rational literal out of range \"" + std::string(whole) +
                     "\"");
  }
  if (ec != std::errc() || end != digits.data() + digits.size()) {
    throw ParseError("malformed rational literal \"" + std::string(whole) +
                     "\"");
  }
  return value;
}

bool AllDigits(std::string_view text) {
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  const std::string_view whole = text;
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) {
    throw ParseError("empty rational literal");
  }

  Rational result;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num_text = text.substr(0, slash);
    const auto den_text = text.substr(slash + 1);
    if (!AllDigits(num_text) || !AllDigits(den_text)) {
      throw ParseError("malformed rational literal \"" + std::string(whole) +
                       "\"");
    }
    const std::int64_t num = ParseInteger(num_text, whole);
    const std::int64_t den = ParseInteger(den_text, whole);
    if (den == 0) {
      throw ParseError("zero denominator in \"" + std::string(whole) + "\"");
    }
    result = Rational(num, den);
  } else if (const auto dot = text.find('.');
             dot != std::string_view::npos) {
    const auto int_text = text.substr(0, dot);
    const auto frac_text = text.substr(dot + 1);
    if (!AllDigits(int_text) || !AllDigits(frac_text) ||
        (int_text.empty() && frac_text.empty())) {
      throw ParseError("malformed decimal literal \"" + std::string(whole) +
                       "\"");
    }
    if (frac_text.size() > 18) {
      throw ParseError("too many decimal places in \"" + std::string(whole) +
                       "\"");
    }
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_text.size(); ++i) scale *= 10;
    const std::int64_t int_part =
        int_text.empty() ? 0 : ParseInteger(int_text, whole);
    const std::int64_t frac_part =
        frac_text.empty() ? 0 : ParseInteger(frac_text, whole);
    if (int_part > (std::numeric_limits<std::int64_t>::max() - frac_part) /
                       scale) {
      throw ParseError("decimal literal out of range \"" +
                       std::string(whole) + "\"");
    }
    result = Rational(int_part * scale + frac_part, scale);
  } else {
    if (!AllDigits(text)) {
      throw ParseError("malformed rational literal \"" + std::string(whole) +
                       "\"");
    }
    result = Rational(ParseInteger(text, whole));
  }
  return negative ? -result : result;
}

std::string FormatRational(const Rational& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" +
         std::to_string(value.denominator());
}

}  // namespace capfac
