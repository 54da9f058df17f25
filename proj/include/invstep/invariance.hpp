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

#ifndef INVSTEP_INVARIANCE_HPP
#define INVSTEP_INVARIANCE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "invstep/numkernel.hpp"
#include "invstep/sets.hpp"

namespace invstep {

enum class Outcome { Holds, Fails, Inconclusive };

std::string_view to_string(Outcome o);

// A Fails verdict always carries a witness point of the set whose image
// (discrete checks) or velocity (continuous checks) violates the condition
// by more than the tolerance.
struct Verdict {
  Outcome outcome = Outcome::Inconclusive;
  double margin = 0.0;
  std::optional<Vector> witness;
  std::string certificate;
  std::optional<double> multiplier;  // S-procedure multiplier, Lorenz checks
  std::size_t samples = 0;           // sampling-based checks only

  bool holds() const { return outcome == Outcome::Holds; }
  bool fails() const { return outcome == Outcome::Fails; }
};

/// Holds iff A'Q + QA is negative semidefinite; margin = -lambda_max.
Verdict continuous_ellipsoid(const Matrix& a, const Ellipsoid& e,
                             double tol = kDefaultEigTol);

/// Holds iff M'QM - Q is negative semidefinite; margin = -lambda_max.
Verdict discrete_ellipsoid(const Matrix& m, const Ellipsoid& e,
                           double tol = kDefaultEigTol);

/// Sub-tangentiality of A at the generators: for every vertex and active
/// row, g'Av <= tol; for every ray r and row with g'r = 0, g'Ar <= tol.
Verdict continuous_polyhedron(const Matrix& a, const PolyhedronPair& p,
                              double tol = kMembershipTol);

/// Holds iff every vertex image satisfies G(Mv) <= b + tol and every ray
/// image lies in the recession cone.
Verdict discrete_polyhedron(const Matrix& m, const PolyhedronPair& p,
                            double tol = kMembershipTol);

/// Cross-positivity of A on the cone, evaluated on orthogonal pairs of an
/// extreme ray r and an (outward) facet normal f: requires -f'Ar >= -tol.
Verdict cross_positive_polyhedral(const Matrix& a, const PolyhedralCone& c,
                                  double tol = kMembershipTol);

/// M maps the polyhedral cone into itself iff every ray image satisfies
/// F(Mr) <= tol.
Verdict discrete_polyhedral_cone(const Matrix& m, const PolyhedralCone& c,
                                 double tol = kMembershipTol);

struct LorenzSearchOptions {
  int grid_points = 1000;
  double bracket_rel_width = 1e-10;
  bool find_witness = true;
  int witness_samples = 4096;
  std::uint64_t witness_seed = 0x5eed;
};

/// M C subset of C via the lossless S-procedure (exists lambda >= 0 with
/// M'QM - lambda Q NSD, found by a bounded 1-D search) plus an orientation
/// test on the axis.
Verdict discrete_lorenz(const Matrix& m, const LorenzCone& c,
                        double tol = kDefaultEigTol,
                        const LorenzSearchOptions& opts = {});

/// Necessary condition for flow invariance of a Lorenz cone: on sampled
/// boundary points x'(A'Q + QA)x <= tol. Never returns Holds.
Verdict continuous_lorenz_necessary(const Matrix& a, const LorenzCone& c,
                                    std::size_t n_samples, std::uint64_t seed,
                                    double tol = kMembershipTol);

/// Continuous-time check matching the set type. Lorenz cones use the
/// necessary test with the given sample budget; plain H- or V-polyhedra
/// have no exact test and yield Inconclusive.
Verdict continuous_check(const Matrix& a, const SetSpec& s,
                         std::size_t samples = 10000,
                         std::uint64_t seed = 1, double tol = kMembershipTol);

/// Discrete check of a step matrix matching the set type. Throws
/// InvalidArgument for set types without an exact discrete test.
Verdict discrete_check(const Matrix& m, const SetSpec& s,
                       double tol = kMembershipTol,
                       const LorenzSearchOptions& lorenz = {});

bool has_exact_discrete_check(const SetSpec& s);

}  // namespace invstep

#endif  // INVSTEP_INVARIANCE_HPP
