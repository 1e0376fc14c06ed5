// Copyright 2026 The gridcoal Authors
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

#ifndef GRIDCOAL_ERRORS_HPP
#define GRIDCOAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gridcoal {

// Argument outside the supported domain of an operation (sizes, ids).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A configuration object violates one of its invariants. `field()` names the
// offending key so callers can report it.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class CapacityExceededError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Coalition demand exceeds coalition capacity, or no (partition, action)
// pair satisfies the price band.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace gridcoal

#endif  // GRIDCOAL_ERRORS_HPP
