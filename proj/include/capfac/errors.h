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

#ifndef CAPFAC_ERRORS_H_
#define CAPFAC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace capfac {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments that violate a type invariant (capacity out of range,
// agent id out of range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A value lies outside the domain an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration would exceed the structural size bound.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

// Report profile length differs from the mechanism's agent count.
class ArityMismatch : public Error {
 public:
  using Error::Error;
};

// Enumeration would exceed the configured work budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// A table mechanism lacks an entry that an audit needs.
class DomainIncomplete : public Error {
 public:
  using Error::Error;
};

// Text input (rational literal, JSON document) could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace capfac

#endif  // CAPFAC_ERRORS_H_
