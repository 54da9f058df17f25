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

#include "invstep/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "invstep/membership.hpp"

namespace invstep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_flow_invariant(const Verdict& v, const char* what) {
  if (v.fails()) {
    throw Error(ErrorKind::NotFlowInvariant,
                std::string(what) + ": " + v.certificate);
  }
}

// The three local bounds, in units of 1/|A|.
double gamma1(double beta) { return 1.0 - 1.0 / std::sqrt(1.0 + beta); }
double gamma2(double beta) {
  return (2.0 * beta + 3.0 - std::sqrt(4.0 * beta + 9.0)) / (2.0 * beta + 4.0);
}
double gamma3(double beta) {
  return (beta + 2.0 - std::sqrt(beta + 4.0)) / (beta + 3.0);
}

// Shared by the ellipsoid and the Lorenz cone; `level` is 1 for the
// ellipsoid and 0 for the cone.
ThresholdReport local_quadratic(const Matrix& a, const Matrix& q,
                                const Vector& x, Location loc, double level,
                                double tol) {
  ThresholdReport r;
  r.kind = ThresholdKind::Local;
  r.inclusive = false;
  const double a_norm = spectral_norm(a);
  const double q_norm = spectral_norm(q);
  const double x2 = x.squaredNorm();
  r.diagnostics["norm_A"] = a_norm;
  r.diagnostics["norm_Q"] = q_norm;
  if (a_norm == 0.0) {
    r.value = kInf;
    r.basis = "A = 0: the step is the identity";
    r.tags.push_back("zero-matrix");
    return r;
  }
  if (loc == Location::Inside) {
    const double delta1 = x.dot(q * x);
    const double beta1 = x2 > 0.0 ? (level - delta1) / (q_norm * x2) : kInf;
    r.value = (std::isinf(beta1) ? 1.0 : gamma1(beta1)) / a_norm;
    r.basis = "gamma1 = (1/|A|)(1 - 1/sqrt(1 + beta1))";
    r.tags.push_back("interior");
    r.diagnostics["delta1"] = delta1;
    r.diagnostics["beta1"] = beta1;
    return r;
  }
  const Vector ax = a * x;
  const double tangency = ax.dot(q * x);
  const double scale = a_norm * q_norm * x2;
  r.diagnostics["tangency"] = tangency;
  if (tangency > tol * scale) {
    throw Error(ErrorKind::BranchPreconditionFailed,
                "(Ax)'Qx = " + std::to_string(tangency) +
                    " > 0 at a boundary point; the set is not flow invariant "
                    "there");
  }
  if (std::abs(tangency) > tol * scale) {
    const double delta2 = -x.dot((a.transpose() * q + q * a) * x);
    const double beta2 = delta2 / scale;
    r.value = gamma2(beta2) / a_norm;
    r.basis = "gamma2 = (1/|A|)(2 beta2 + 3 - sqrt(4 beta2 + 9))/(2 beta2 + 4)";
    r.tags.push_back("boundary-strict");
    r.diagnostics["delta2"] = delta2;
    r.diagnostics["beta2"] = beta2;
    return r;
  }
  const Matrix a2 = a * a;
  const double delta3 =
      -x.dot((a2.transpose() * q + a.transpose() * q * a + q * a2) * x);
  const double beta3 = delta3 / (a_norm * a_norm * q_norm * x2);
  r.diagnostics["delta3"] = delta3;
  r.diagnostics["beta3"] = beta3;
  if (beta3 <= tol) {
    throw Error(ErrorKind::BranchPreconditionFailed,
                "tangential boundary point with delta3 = " +
                    std::to_string(delta3) +
                    " <= 0; the third-order bound does not apply");
  }
  r.value = gamma3(beta3) / a_norm;
  r.basis = "gamma3 = (1/|A|)(beta3 + 2 - sqrt(beta3 + 4))/(beta3 + 3)";
  r.tags.push_back("boundary-tangential");
  return r;
}

Classification require_member(const SetSpec& s, const Vector& x, double tol) {
  const Classification c = classify_point(s, x, tol);
  if (c.location == Location::Outside) {
    throw Error(ErrorKind::NotInSet,
                "point has margin " + std::to_string(c.margin));
  }
  return c;
}

}  // namespace

std::string_view to_string(ThresholdKind k) {
  switch (k) {
    case ThresholdKind::Local: return "Local";
    case ThresholdKind::UniformCertified: return "UniformCertified";
    case ThresholdKind::UniformOptimal: return "UniformOptimal";
    case ThresholdKind::Empirical: return "Empirical";
  }
  return "Unknown";
}

ThresholdReport tau_bar(const Matrix& a) {
  require_square(a, "A");
  require_finite(a, "A");
  ThresholdReport r;
  r.kind = ThresholdKind::UniformCertified;
  r.inclusive = false;
  r.basis = "tau_bar = 1 / (largest real positive eigenvalue of A)";
  r.value = kInf;
  const Spectrum sp = general_spectrum(a);
  const double scale = std::max(1.0, spectral_norm(a));
  double lam_max = 0.0;
  for (const auto& z : sp.values) {
    if (std::abs(z.imag()) > kDefaultEigTol * scale) continue;
    if (z.real() > lam_max) lam_max = z.real();
  }
  if (lam_max > 0.0) {
    r.value = 1.0 / lam_max;
    r.diagnostics["blocking_eigenvalue"] = lam_max;
  } else {
    r.tags.push_back("no-real-positive-eigenvalue");
  }
  return r;
}

ThresholdReport local_backward_euler(const Matrix& a, const Ellipsoid& e,
                                     const Vector& x, double tol) {
  const SetSpec s{e};
  require_square(a, "A");
  if (a.rows() != e.Q.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "A and Q differ in dimension");
  }
  const Classification c = require_member(s, x, tol);
  return local_quadratic(a, e.Q, x, c.location, 1.0, tol);
}

ThresholdReport local_backward_euler(const Matrix& a, const LorenzCone& cone,
                                     const Vector& x, double tol) {
  const SetSpec s{cone};
  require_square(a, "A");
  if (a.rows() != cone.Q.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "A and Q differ in dimension");
  }
  const Classification c = require_member(s, x, tol);
  if (x.norm() == 0.0) {
    ThresholdReport r;
    r.kind = ThresholdKind::Local;
    r.value = kInf;
    r.basis = "the apex is a fixed point of every linear step";
    r.tags.push_back("apex");
    return r;
  }
  // Inside the cone the quadratic slack is measured against level 0.
  return local_quadratic(a, cone.Q, x, c.location, 0.0, tol);
}

ThresholdReport forward_euler_uniform_polyhedron(const Matrix& a,
                                                 const PolyhedronPair& p,
                                                 double tol) {
  require_flow_invariant(continuous_polyhedron(a, p, tol),
                         "polyhedron is not flow invariant");
  const Matrix& g = p.h.G;
  ThresholdReport r;
  r.kind = ThresholdKind::UniformCertified;
  r.inclusive = true;
  r.basis = "ratio test over vertices and rays";
  r.value = kInf;
  for (Eigen::Index i = 0; i < p.v.vertices.cols(); ++i) {
    const Vector v = p.v.vertices.col(i);
    const Vector rate = g * (a * v);
    const Vector slack = p.h.b - g * v;
    for (Eigen::Index j = 0; j < g.rows(); ++j) {
      if (rate(j) > tol) {
        r.value = std::min(r.value, std::max(0.0, slack(j)) / rate(j));
      }
    }
  }
  for (Eigen::Index k = 0; k < p.v.rays.cols(); ++k) {
    const Vector d = p.v.rays.col(k);
    const Vector rate = g * (a * d);
    const Vector slack = -(g * d);
    for (Eigen::Index j = 0; j < g.rows(); ++j) {
      if (rate(j) > tol * d.norm()) {
        r.value = std::min(r.value, std::max(0.0, slack(j)) / rate(j));
      }
    }
  }
  if (std::isinf(r.value)) r.tags.push_back("no-binding-constraint");
  return r;
}

ThresholdReport forward_euler_uniform_polyhedron(const Matrix& a,
                                                 const PolyhedralCone& c,
                                                 double tol) {
  require_flow_invariant(cross_positive_polyhedral(a, c, tol),
                         "cone is not flow invariant");
  ThresholdReport r = forward_euler_uniform_polyhedron(a, as_polyhedron_pair(c),
                                                       tol);
  r.basis = "ratio test over extreme rays";
  return r;
}

ThresholdReport backward_euler_uniform(const Matrix& a, const SetSpec& s,
                                       double tol) {
  if (const auto* e = std::get_if<Ellipsoid>(&s)) {
    require_flow_invariant(continuous_ellipsoid(a, *e),
                           "ellipsoid is not flow invariant");
    ThresholdReport r;
    r.kind = ThresholdKind::UniformCertified;
    r.value = kInf;
    r.inclusive = true;
    r.basis = "A'Q + QA - t A'QA is NSD for every t >= 0";
    return r;
  }
  ThresholdReport r = tau_bar(a);
  if (const auto* p = std::get_if<PolyhedronPair>(&s)) {
    require_flow_invariant(continuous_polyhedron(a, *p, tol),
                           "polyhedron is not flow invariant");
    r.basis = "polyhedron: every dt in [0, tau_bar)";
  } else if (const auto* c = std::get_if<PolyhedralCone>(&s)) {
    require_flow_invariant(cross_positive_polyhedral(a, *c, tol),
                           "cone is not flow invariant");
    r.basis = "proper cone: every dt in [0, tau_bar)";
  } else if (const auto* c = std::get_if<LorenzCone>(&s)) {
    require_flow_invariant(continuous_lorenz_necessary(a, *c, 2048, 1, tol),
                           "Lorenz cone is not flow invariant");
    r.basis = "proper cone: every dt in [0, tau_bar)";
    r.tags.push_back("flow-invariance-assumed");
  } else {
    throw Error(ErrorKind::InvalidArgument,
                "no uniform threshold for a " + std::string(set_type_name(s)) +
                    " without both descriptions");
  }
  return r;
}

ThresholdReport optimal_uniform(const Matrix& a, const SetSpec& s, Method m,
                                const OptimalOptions& opts) {
  if (!has_exact_discrete_check(s)) {
    throw Error(ErrorKind::InvalidArgument,
                "no exact discrete check for a " +
                    std::string(set_type_name(s)));
  }
  const LinearSystem sys(a);
  if (sys.dim() != dimension(s)) {
    throw Error(ErrorKind::DimensionMismatch, "A and set differ in dimension");
  }
  require_valid(s, opts.tol);
  const double tb = tau_bar(a).value;
  const double dt_max =
      opts.dt_max ? *opts.dt_max
                  : 10.0 * std::max(1.0, std::isfinite(tb) ? tb : 1.0);
  if (!(dt_max > 0.0) || !std::isfinite(dt_max)) {
    throw Error(ErrorKind::InvalidArgument, "dt_max must be positive");
  }
  // Witnesses are irrelevant to the predicate; an uncertified S-procedure
  // counts as not holding either way.
  LorenzSearchOptions lorenz = opts.lorenz;
  lorenz.find_witness = false;
  // The defect of a flow-invariant set vanishes like dt as dt -> 0, so a
  // fixed band would accept any second-order defect below sqrt(tol).
  const double norm_a = spectral_norm(a);
  auto band = [&](double dt) {
    if (dt == 0.0 || norm_a == 0.0) return opts.tol;
    return opts.tol * std::min(1.0, dt * norm_a);
  };
  int singular = 0, inconclusive = 0;
  auto holds = [&](double dt) {
    try {
      const Verdict v =
          discrete_check(step_matrix(sys, m, dt), s, band(dt), lorenz);
      if (v.outcome == Outcome::Inconclusive) ++inconclusive;
      return v.holds();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularShift) throw;
      ++singular;
      return false;
    }
  };

  ThresholdReport r;
  r.kind = ThresholdKind::UniformOptimal;
  r.inclusive = true;
  r.basis = "bisection on the exact discrete check of the step matrix";
  r.diagnostics["dt_max"] = dt_max;
  r.diagnostics["tol_dt"] = opts.tol_dt;
  if (!holds(0.0)) {
    throw Error(ErrorKind::PredicateFalseAtZero,
                "discrete check fails at dt = 0");
  }
  double lo = 0.0, hi = dt_max;
  if (holds(dt_max)) {
    lo = dt_max;
    r.tags.push_back("unbounded-within-search");
  } else {
    while (hi - lo > opts.tol_dt) {
      const double mid = 0.5 * (lo + hi);
      (holds(mid) ? lo : hi) = mid;
    }
  }
  r.value = lo;
  r.diagnostics["bracket_hi"] = hi;

  const int n = std::max(opts.scan_points, 2);
  int below_false = 0;
  for (int i = 0; i < n; ++i) {
    if (!holds(r.value * i / (n - 1))) ++below_false;
  }
  int above_true = 0;
  if (r.value < dt_max) {
    for (int i = 1; i <= n; ++i) {
      if (holds(r.value + (dt_max - r.value) * i / n)) ++above_true;
    }
  }
  r.diagnostics["scan_below_failures"] = below_false;
  r.diagnostics["scan_above_holds"] = above_true;
  r.diagnostics["singular_shifts"] = singular;
  r.diagnostics["inconclusive"] = inconclusive;
  if (below_false > 0 || above_true > 0) {
    r.tags.push_back("non-monotone");
  } else {
    r.tags.push_back("interval-verified");
  }
  if (std::isfinite(tb)) r.diagnostics["tau_bar"] = tb;
  return r;
}

}  // namespace invstep
