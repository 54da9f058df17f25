/*
 Copyright 2026 The invstep Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef INVSTEP_ERROR_HPP
#define INVSTEP_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace invstep {

enum class ErrorKind {
  NotSymmetric,
  NoConvergence,
  Overflow,
  SingularShift,
  DimensionMismatch,
  InvalidArgument,
  InconsistentPair,
  DegenerateCone,
  SamplingExhausted,
  NotInSet,
  BranchPreconditionFailed,
  NotFlowInvariant,
  PredicateFalseAtZero,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this exception; kind() lets
// callers (and the CLI exit-code mapping) dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace invstep

#endif  // INVSTEP_ERROR_HPP
