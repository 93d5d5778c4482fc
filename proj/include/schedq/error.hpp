// Copyright 2026 The schedq Authors.
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

#ifndef SCHEDQ_ERROR_HPP_
#define SCHEDQ_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace schedq {

// Argument outside an operation's admissible set (alpha <= 1, rho > 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed request: reversed interval, query outside a path window, etc.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// No truncation index reaches the requested tolerance within the index budget.
class NoFiniteTruncation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problems with a configuration document. `kind()` separates documents that
// do not parse from documents that parse but fail validation.
class ConfigError : public std::runtime_error {
 public:
  enum class Kind { kMissingFile, kParse, kValidation };

  ConfigError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace schedq

#endif  // SCHEDQ_ERROR_HPP_
