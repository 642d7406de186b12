// Copyright 2026 The Chronos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHRONOS_COMMON_ERROR_H_
#define CHRONOS_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace chronos {

// Invalid argument or configuration value.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite or otherwise unusable numerical state.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A stability condition of a stochastic process is violated (e.g. a Hawkes
// branching ratio >= 1).
class StabilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An input breaks a documented contract, e.g. private data handed to a
// public-only routine.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws ParameterError with `message` unless `condition` holds.
inline void Require(bool condition, const std::string& message) {
  if (!condition) throw ParameterError(message);
}

}  // namespace chronos

#endif  // CHRONOS_COMMON_ERROR_H_
