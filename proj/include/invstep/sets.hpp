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

#ifndef INVSTEP_SETS_HPP
#define INVSTEP_SETS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "invstep/numkernel.hpp"

namespace invstep {

// Absolute tolerance on normalized membership margins.
inline constexpr double kMembershipTol = 1e-9;

/// {x : G x <= b}
struct HPolyhedron {
  Matrix G;
  Vector b;
};

/// conv(vertices) + cone(rays); generators are stored as columns.
struct VPolyhedron {
  Matrix vertices;
  Matrix rays;
};

/// Both descriptions of one polyhedron. Consistency is checked by
/// validate_set(), never synthesized.
struct PolyhedronPair {
  HPolyhedron h;
  VPolyhedron v;
};

/// {x : x' Q x <= 1} with Q symmetric positive definite.
struct Ellipsoid {
  Matrix Q;
};

/// {x : x' Q x <= 0, x' Q axis <= 0} where Q has inertia (n-1, 0, 1) and
/// axis is the unit eigenvector of its negative eigenvalue. The axis lies in
/// the cone, so its sign selects the nappe.
struct LorenzCone {
  Matrix Q;
  Vector axis;

  /// Builds the cone from Q alone, orienting the axis so that its entry of
  /// largest magnitude is positive. Throws InvalidArgument when Q does not
  /// have exactly one negative eigenvalue.
  static LorenzCone from_matrix(const Matrix& q, double tol = kDefaultEigTol);
};

/// cone(rays) = {x : normals x <= 0}. Rays are columns; normals are rows and
/// point outward.
struct PolyhedralCone {
  Matrix rays;
  Matrix normals;
};

using SetSpec = std::variant<HPolyhedron, VPolyhedron, PolyhedronPair,
                             Ellipsoid, LorenzCone, PolyhedralCone>;

int dimension(const SetSpec& s);
std::string_view set_type_name(const SetSpec& s);
bool is_cone(const SetSpec& s);

/// A polyhedral cone viewed as the polyhedron with the single vertex 0.
PolyhedronPair as_polyhedron_pair(const PolyhedralCone& c);

enum class Location { Inside, Boundary, Outside };

std::string_view to_string(Location loc);

struct Classification {
  Location location = Location::Outside;
  double margin = 0.0;  // signed; positive inside
};

/// Membership with a signed margin:
///   ellipsoid        1 - x'Qx
///   H-polyhedron     min(b - Gx)
///   Lorenz cone      min(-x'Qx / (|Q| |x|^2), -x'Q axis / (|Q axis| |x|))
///   polyhedral cone  min_j(-f_j'x / (|f_j| |x|))
///   V-polyhedron     largest attainable minimum generator weight, or minus
///                    the l1 residual of the best representation if outside
/// The cone margins are degree-0 homogeneous; the apex is Boundary.
Classification classify_point(const SetSpec& s, const Vector& x,
                              double tol = kMembershipTol);

struct ValidationFailure {
  std::string invariant;
  double margin = 0.0;
};

struct ValidationReport {
  std::vector<ValidationFailure> failures;
  std::optional<Inertia> inertia;
  std::optional<Vector> interior_point;

  bool passed() const { return failures.empty(); }
};

ValidationReport validate_set(const SetSpec& s, double tol = kMembershipTol);

/// Throws ValidationError listing every failed invariant.
void require_valid(const SetSpec& s, double tol = kMembershipTol);

/// The base {x : normal'x = 1} intersected with the cone is a compact slice
/// meeting every ray once.
struct ConeBase {
  Vector normal;
};

ConeBase cone_base(const LorenzCone& c);
ConeBase cone_base(const PolyhedralCone& c, double tol = kMembershipTol);

struct SampledPoint {
  Vector x;
  Location location = Location::Inside;
};

struct SampleOptions {
  // Cones only: keep samples on the base slice instead of rescaling them
  // along their rays.
  bool cone_on_base = false;
  // Cones only: rescale factors are exp(U(-spread, spread)).
  double cone_scale_spread = 1.0;
};

/// Interior points first, then boundary points. Deterministic per seed.
std::vector<SampledPoint> sample_points(const SetSpec& s, std::size_t n_interior,
                                        std::size_t n_boundary,
                                        std::uint64_t seed,
                                        double tol = kMembershipTol,
                                        const SampleOptions& opts = {});

}  // namespace invstep

#endif  // INVSTEP_SETS_HPP
