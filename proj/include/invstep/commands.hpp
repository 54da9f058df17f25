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

#ifndef INVSTEP_COMMANDS_HPP
#define INVSTEP_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "invstep/problem.hpp"
#include "invstep/report.hpp"

namespace invstep {

// Flag values override the matching fields of the problem document.
struct CommandOptions {
  double tol = kMembershipTol;
  double tol_dt = kDefaultTolDt;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<std::size_t> steps;
};

struct CommandResult {
  Report report;
  int exit_code = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

bool is_command(std::string_view name);

/// validate | check | threshold | simulate | verify
CommandResult run_command(const ProblemSpec& spec, std::string_view command,
                          const CommandOptions& opts = {});

int exit_code_for(ErrorKind kind);

/// Report body for a failure that prevented the command from running.
Report error_report(std::string_view command, const Error& e);

}  // namespace invstep

#endif  // INVSTEP_COMMANDS_HPP
