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

#ifndef INVSTEP_LINPROG_HPP
#define INVSTEP_LINPROG_HPP

#include "invstep/numkernel.hpp"

namespace invstep::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  Vector x;
  double objective = 0.0;
};

// Dense two-phase simplex with Bland's rule:
//   maximize c'x  s.t.  a_ub x <= b_ub,  a_eq x = b_eq,  x >= 0.
// Either constraint block may have zero rows. Sized for the handful of
// variables that membership and feasibility probes need.
Result maximize(const Vector& c, const Matrix& a_ub, const Vector& b_ub,
                const Matrix& a_eq, const Vector& b_eq);

// Same, with x free (split internally into positive and negative parts).
Result maximize_free(const Vector& c, const Matrix& a_ub, const Vector& b_ub,
                     const Matrix& a_eq, const Vector& b_eq);

}  // namespace invstep::lp

#endif  // INVSTEP_LINPROG_HPP
