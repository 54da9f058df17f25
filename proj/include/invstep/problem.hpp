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

#ifndef INVSTEP_PROBLEM_HPP
#define INVSTEP_PROBLEM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "invstep/dynsys.hpp"
#include "invstep/sets.hpp"

namespace invstep {

struct ProblemSpec {
  Matrix A;
  SetSpec set;
  std::string example;  // built-in name, empty for user input
  std::optional<Method> method;
  std::optional<Vector> point;
  std::optional<double> dt;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
};

/// Names accepted by system.example.
bool is_builtin_example(std::string_view name);

/// The system matrix and invariant set of a built-in example.
ProblemSpec builtin_example(std::string_view name);

/// Throws ParseError naming the offending field, or ValidationError listing
/// every violated set invariant.
ProblemSpec parse_spec(const nlohmann::json& doc, double tol = kMembershipTol);

/// As above from JSON text; syntax errors report line and column.
ProblemSpec parse_spec_text(std::string_view text,
                            double tol = kMembershipTol);

/// Reads from a file, or from stdin when path is "-".
ProblemSpec load_spec(const std::string& path, double tol = kMembershipTol);

std::optional<Method> parse_method(std::string_view name);

}  // namespace invstep

#endif  // INVSTEP_PROBLEM_HPP
