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

#ifndef INVSTEP_THRESHOLDS_HPP
#define INVSTEP_THRESHOLDS_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "invstep/dynsys.hpp"
#include "invstep/invariance.hpp"
#include "invstep/sets.hpp"

namespace invstep {

inline constexpr double kDefaultTolDt = 1e-9;

enum class ThresholdKind { Local, UniformCertified, UniformOptimal, Empirical };

std::string_view to_string(ThresholdKind k);

struct ThresholdReport {
  ThresholdKind kind = ThresholdKind::UniformCertified;
  double value = 0.0;  // may be +inf
  bool inclusive = false;
  std::string basis;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> tags;
  std::string norm = "spectral";
};

/// Supremum of dt with I - dt A nonsingular on [0, dt]: 1 / (largest real
/// positive eigenvalue), or +inf. Open at the endpoint.
ThresholdReport tau_bar(const Matrix& a);

/// Local backward-Euler threshold at a point x of an ellipsoid or Lorenz
/// cone. Dispatches on interior / strict boundary / tangential boundary and
/// reports the branch in `tags`. The value is the open bound gamma_i.
ThresholdReport local_backward_euler(const Matrix& a, const Ellipsoid& e,
                                     const Vector& x,
                                     double tol = kMembershipTol);
ThresholdReport local_backward_euler(const Matrix& a, const LorenzCone& c,
                                     const Vector& x,
                                     double tol = kMembershipTol);

/// Ratio test over the generators; exact and closed for forward Euler.
ThresholdReport forward_euler_uniform_polyhedron(const Matrix& a,
                                                 const PolyhedronPair& p,
                                                 double tol = kMembershipTol);
ThresholdReport forward_euler_uniform_polyhedron(const Matrix& a,
                                                 const PolyhedralCone& c,
                                                 double tol = kMembershipTol);

/// Certified uniform backward-Euler threshold: +inf for ellipsoids, tau_bar
/// for polyhedra and cones. Throws NotFlowInvariant when the continuous
/// check fails. For Lorenz cones flow invariance is a caller assertion; only
/// the necessary boundary test is run.
ThresholdReport backward_euler_uniform(const Matrix& a, const SetSpec& s,
                                       double tol = kMembershipTol);

struct OptimalOptions {
  std::optional<double> dt_max;  // default 10 * max(1, tau_bar or 1)
  double tol_dt = kDefaultTolDt;
  double tol = kMembershipTol;
  int scan_points = 100;
  LorenzSearchOptions lorenz;
};

/// Largest dt in [0, dt_max] for which the exact discrete check of the step
/// matrix holds, by bisection. The interval shape of the feasible set is
/// assumed and then checked on a grid below the result and above it.
ThresholdReport optimal_uniform(const Matrix& a, const SetSpec& s, Method m,
                                const OptimalOptions& opts = {});

}  // namespace invstep

#endif  // INVSTEP_THRESHOLDS_HPP
