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

#ifndef INVSTEP_REPORT_HPP
#define INVSTEP_REPORT_HPP

#include <string>

#include "json.hpp"

#include "invstep/invariance.hpp"
#include "invstep/oracle.hpp"
#include "invstep/sets.hpp"
#include "invstep/thresholds.hpp"

namespace invstep {

// Reports are ordered JSON trees. Non-finite numbers are stored as the
// strings "inf", "-inf" and "nan" so that the tree stays valid JSON.
using Report = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Report number(double v);
Report to_json(const Vector& v);
Report to_json(const Matrix& m);  // row-major nested arrays
Report to_json(const Verdict& v, double tol);
Report to_json(const ThresholdReport& t, double tol);
Report to_json(const oracle::SampleReport& r, double tol);
Report to_json(const ValidationReport& r);

/// Numbers with 17 significant digits; keys in insertion order; two-space
/// indentation; trailing newline.
std::string emit_json(const Report& r);

/// Indented key: value listing for humans.
std::string emit_text(const Report& r);

/// Inverse of number(): accepts a number or one of the non-finite strings.
double read_number(const Report& v);

}  // namespace invstep

#endif  // INVSTEP_REPORT_HPP
