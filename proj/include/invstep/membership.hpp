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

#ifndef INVSTEP_MEMBERSHIP_HPP
#define INVSTEP_MEMBERSHIP_HPP

#include "invstep/sets.hpp"

namespace invstep {

// classify_point() with the per-set norms and factorizations computed once.
// Used in the sampling and oracle hot loops.
class MembershipTester {
 public:
  MembershipTester(const SetSpec& s, double tol = kMembershipTol);

  Classification operator()(const Vector& x) const;

  double tol() const { return tol_; }

 private:
  Classification from_margin(double margin) const;
  double v_margin(const VPolyhedron& v, const Vector& x) const;

  const SetSpec* set_;
  double tol_;
  int dim_;
  double q_norm_ = 0.0;   // |Q| for the Lorenz cone
  Vector q_axis_;         // Q * axis
  double q_axis_norm_ = 0.0;
  Vector row_norms_;      // polyhedral cone facet norms
};

}  // namespace invstep

#endif  // INVSTEP_MEMBERSHIP_HPP
