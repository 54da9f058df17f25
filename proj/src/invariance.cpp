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

#include "invstep/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "invstep/membership.hpp"

namespace invstep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dims(const Matrix& m, int n, const char* what) {
  require_square(m, what);
  if (m.rows() != n) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " has dimension " +
                    std::to_string(m.rows()) + ", set has dimension " +
                    std::to_string(n));
  }
  require_finite(m, what);
}

void require_pair(const PolyhedronPair& p, double tol) {
  const ValidationReport r = validate_set(SetSpec{p}, tol);
  if (!r.passed()) {
    std::ostringstream msg;
    for (const auto& f : r.failures) msg << f.invariant << "; ";
    throw Error(ErrorKind::InconsistentPair, msg.str());
  }
}

void require_cone(const PolyhedralCone& c, double tol) {
  const ValidationReport r = validate_set(SetSpec{c}, tol);
  if (!r.passed()) {
    std::ostringstream msg;
    for (const auto& f : r.failures) msg << f.invariant << "; ";
    throw Error(ErrorKind::InconsistentPair, msg.str());
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

// Top eigenvector of the symmetric S, rescaled onto the boundary of the
// ellipsoid {x'Qx = 1}.
Vector boundary_eigvec(const Matrix& s, const Matrix& q) {
  const SymmetricEigen eig = sym_eigen(sym(s), 1.0);
  Vector v = eig.vectors.col(0);
  return v / std::sqrt(v.dot(q * v));
}

}  // namespace

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Holds: return "Holds";
    case Outcome::Fails: return "Fails";
    case Outcome::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

Verdict continuous_ellipsoid(const Matrix& a, const Ellipsoid& e, double tol) {
  require_dims(a, static_cast<int>(e.Q.rows()), "A");
  const Matrix s = sym(a.transpose() * e.Q + e.Q * a);
  const DefinitenessReport d = definiteness(s, tol);
  Verdict v;
  v.margin = -d.lambda_max;
  if (d.is_nsd()) {
    v.outcome = Outcome::Holds;
    v.certificate = "A'Q + QA is NSD (lambda_max " + fmt(d.lambda_max) +
                    ", zero band " + fmt(d.zero_band) + ")";
    return v;
  }
  const Vector x = boundary_eigvec(s, e.Q);
  v.witness = x;
  v.outcome = Outcome::Fails;
  v.certificate = "A'Q + QA has eigenvalue " + fmt(d.lambda_max) +
                  " > 0; x'(A'Q + QA)x = " + fmt(x.dot(s * x)) +
                  " at the boundary witness";
  return v;
}

Verdict discrete_ellipsoid(const Matrix& m, const Ellipsoid& e, double tol) {
  require_dims(m, static_cast<int>(e.Q.rows()), "M");
  // Expand around the identity: M'QM - Q = D'Q + QD + D'QD with D = M - I
  // avoids cancellation when M is close to I.
  const Matrix inc = m - Matrix::Identity(m.rows(), m.cols());
  const Matrix qd = e.Q * inc;
  const Matrix s = sym(qd + qd.transpose() + inc.transpose() * qd);
  const DefinitenessReport d = definiteness(s, tol);
  Verdict v;
  v.margin = -d.lambda_max;
  if (d.is_nsd()) {
    v.outcome = Outcome::Holds;
    v.certificate = "M'QM - Q is NSD (lambda_max " + fmt(d.lambda_max) +
                    ", zero band " + fmt(d.zero_band) + ")";
    return v;
  }
  const Vector x = boundary_eigvec(s, e.Q);
  const Vector y = m * x;
  const double excess = y.dot(e.Q * y) - 1.0;
  v.witness = x;
  if (excess > kMembershipTol) {
    v.outcome = Outcome::Fails;
    v.certificate = "M'QM - Q has eigenvalue " + fmt(d.lambda_max) +
                    "; boundary witness maps to x'Qx = 1 + " + fmt(excess);
  } else {
    v.outcome = Outcome::Inconclusive;
    v.certificate = "M'QM - Q has eigenvalue " + fmt(d.lambda_max) +
                    " above the zero band but the witness excess " +
                    fmt(excess) + " is within membership tolerance";
  }
  return v;
}

Verdict continuous_polyhedron(const Matrix& a, const PolyhedronPair& p,
                              double tol) {
  require_pair(p, tol);
  require_dims(a, static_cast<int>(p.h.G.cols()), "A");
  const Matrix& g = p.h.G;
  Verdict v;
  v.margin = kInf;
  std::string worst;
  std::optional<Vector> worst_point;
  for (Eigen::Index i = 0; i < p.v.vertices.cols(); ++i) {
    const Vector x = p.v.vertices.col(i);
    const Vector slack = p.h.b - g * x;
    const Vector rate = g * (a * x);
    for (Eigen::Index j = 0; j < g.rows(); ++j) {
      if (std::abs(slack(j)) > tol) continue;
      if (-rate(j) < v.margin) {
        v.margin = -rate(j);
        worst = "vertex " + std::to_string(i) + ", row " + std::to_string(j) +
                ": g'Ax = " + fmt(rate(j));
        worst_point = x;
      }
    }
  }
  for (Eigen::Index k = 0; k < p.v.rays.cols(); ++k) {
    const Vector d = p.v.rays.col(k).normalized();
    const Vector along = g * d;
    const Vector rate = g * (a * d);
    for (Eigen::Index j = 0; j < g.rows(); ++j) {
      if (std::abs(along(j)) > tol) continue;
      if (-rate(j) < v.margin) {
        v.margin = -rate(j);
        worst = "ray " + std::to_string(k) + ", row " + std::to_string(j) +
                ": g'Ar = " + fmt(rate(j));
        worst_point = d;
      }
    }
  }
  if (v.margin >= -tol) {
    v.outcome = Outcome::Holds;
    v.certificate = "A is sub-tangential at every generator";
    if (!worst.empty()) v.certificate += " (tightest " + worst + ")";
  } else {
    v.outcome = Outcome::Fails;
    v.witness = worst_point;
    v.certificate = "velocity leaves the polyhedron at " + worst;
  }
  return v;
}

Verdict discrete_polyhedron(const Matrix& m, const PolyhedronPair& p,
                            double tol) {
  require_pair(p, tol);
  require_dims(m, static_cast<int>(p.h.G.cols()), "M");
  const Matrix& g = p.h.G;
  Verdict v;
  v.margin = kInf;
  Eigen::Index worst_vertex = -1, worst_ray = -1, worst_row = -1;
  // Ties on the worst slack go to the vertex violating the most in total.
  double worst_total = 0.0;
  for (Eigen::Index i = 0; i < p.v.vertices.cols(); ++i) {
    const Vector slack = p.h.b - g * (m * p.v.vertices.col(i));
    Eigen::Index j = 0;
    const double s = slack.minCoeff(&j);
    const double total = (-slack).cwiseMax(0.0).sum();
    const bool tie = std::abs(s - v.margin) <=
                     1e-12 * std::max(1.0, std::abs(s));
    if ((s < v.margin && !tie) || (tie && total > worst_total)) {
      v.margin = std::min(v.margin, s);
      worst_total = total;
      worst_vertex = i;
      worst_ray = -1;
      worst_row = j;
    }
  }
  for (Eigen::Index k = 0; k < p.v.rays.cols(); ++k) {
    const Vector d = p.v.rays.col(k).normalized();
    const Vector slack = -(g * (m * d));
    Eigen::Index j = 0;
    const double s = slack.minCoeff(&j);
    if (s < v.margin) {
      v.margin = s;
      worst_vertex = -1;
      worst_ray = k;
      worst_row = j;
    }
  }
  if (v.margin >= -tol) {
    v.outcome = Outcome::Holds;
    v.certificate = "every vertex image lies in P and every ray image in its "
                    "recession cone";
    return v;
  }
  v.outcome = Outcome::Fails;
  if (worst_vertex >= 0) {
    v.witness = Vector(p.v.vertices.col(worst_vertex));
    v.certificate = "image of vertex " + std::to_string(worst_vertex) +
                    " violates row " + std::to_string(worst_row) + " by " +
                    fmt(-v.margin);
  } else {
    // Push along the ray until the image of vertex 0 + s*ray exits.
    const Vector v0 = p.v.vertices.col(0);
    const Vector d = p.v.rays.col(worst_ray).normalized();
    const double rate = g.row(worst_row).dot(m * d);
    const double base = p.h.b(worst_row) - g.row(worst_row).dot(m * v0);
    const double s = std::max(0.0, base / rate) + 1.0;
    v.witness = Vector(v0 + s * d);
    v.certificate = "image of ray " + std::to_string(worst_ray) +
                    " leaves the recession cone through row " +
                    std::to_string(worst_row);
  }
  return v;
}

Verdict cross_positive_polyhedral(const Matrix& a, const PolyhedralCone& c,
                                  double tol) {
  require_cone(c, tol);
  require_dims(a, static_cast<int>(c.rays.rows()), "A");
  Verdict v;
  v.margin = kInf;
  std::string worst;
  std::optional<Vector> worst_ray;
  int pairs = 0;
  for (Eigen::Index k = 0; k < c.rays.cols(); ++k) {
    const Vector r = c.rays.col(k).normalized();
    const Vector ar = a * r;
    for (Eigen::Index j = 0; j < c.normals.rows(); ++j) {
      const Vector f = c.normals.row(j).transpose().normalized();
      if (std::abs(f.dot(r)) > tol) continue;
      ++pairs;
      // The dual-cone generator is -f.
      const double value = -f.dot(ar);
      if (value < v.margin) {
        v.margin = value;
        worst = "ray " + std::to_string(k) + ", facet " + std::to_string(j) +
                ": y'Ar = " + fmt(value);
        worst_ray = Vector(c.rays.col(k));
      }
    }
  }
  if (v.margin >= -tol) {
    v.outcome = Outcome::Holds;
    v.certificate = "cross-positive on " + std::to_string(pairs) +
                    " orthogonal extreme ray/dual generator pairs";
    if (!worst.empty()) v.certificate += " (tightest " + worst + ")";
  } else {
    v.outcome = Outcome::Fails;
    v.witness = worst_ray;
    v.certificate = "not cross-positive at " + worst;
  }
  return v;
}

Verdict discrete_polyhedral_cone(const Matrix& m, const PolyhedralCone& c,
                                 double tol) {
  require_cone(c, tol);
  require_dims(m, static_cast<int>(c.rays.rows()), "M");
  Verdict v;
  v.margin = kInf;
  Eigen::Index worst = -1;
  const Vector norms = c.normals.rowwise().norm();
  for (Eigen::Index k = 0; k < c.rays.cols(); ++k) {
    const Vector img = m * c.rays.col(k).normalized();
    const double s = (-(c.normals * img).cwiseQuotient(norms)).minCoeff();
    if (s < v.margin) {
      v.margin = s;
      worst = k;
    }
  }
  if (v.margin >= -tol) {
    v.outcome = Outcome::Holds;
    v.certificate = "every ray image lies in the cone";
  } else {
    v.outcome = Outcome::Fails;
    v.witness = Vector(c.rays.col(worst));
    v.certificate = "image of ray " + std::to_string(worst) +
                    " leaves the cone by " + fmt(-v.margin);
  }
  return v;
}

namespace {

struct SProcedure {
  double best_value = kInf;
  double best_lambda = 0.0;
  bool at_upper_end = false;
};

// Minimizes h(l) = lambda_max(P - l Q) / (|P| + l |Q|) over l in [0, l_hi].
// h is continuous but not necessarily unimodal: scan a linear and a
// logarithmic grid, then golden-section refine around the best grid point.
SProcedure s_procedure(const Matrix& p, const Matrix& q,
                       const LorenzSearchOptions& opts) {
  const double p_norm = spectral_norm(p);
  const double q_norm = spectral_norm(q);
  const double q_neg = -sym_eigen(q, 1.0).values(q.rows() - 1);
  const double hi = p_norm > 0.0 ? 10.0 * p_norm / q_neg : 1.0;
  auto h = [&](double l) {
    const double lam = sym_eigen(sym(p - l * q), 1.0).values(0);
    const double scale = p_norm + l * q_norm;
    return scale > 0.0 ? lam / scale : lam;
  };
  std::vector<double> grid;
  const int g = std::max(opts.grid_points, 3);
  grid.reserve(static_cast<size_t>(2 * g));
  for (int i = 0; i < g; ++i) grid.push_back(hi * i / (g - 1));
  for (int i = 0; i < g; ++i) {
    grid.push_back(hi * std::pow(10.0, -12.0 + 12.0 * i / (g - 1)));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  SProcedure out;
  size_t best = 0;
  for (size_t i = 0; i < grid.size(); ++i) {
    const double v = h(grid[i]);
    if (v < out.best_value) {
      out.best_value = v;
      best = i;
    }
  }
  double lo = grid[best > 0 ? best - 1 : 0];
  double up = grid[std::min(best + 1, grid.size() - 1)];
  out.best_lambda = grid[best];
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = up - phi * (up - lo), x2 = lo + phi * (up - lo);
  double f1 = h(x1), f2 = h(x2);
  for (int it = 0; it < 300; ++it) {
    if (up - lo <= opts.bracket_rel_width * std::max(1e-300, 0.5 * (lo + up))) {
      break;
    }
    if (f1 <= f2) {
      up = x2;
      x2 = x1;
      f2 = f1;
      x1 = up - phi * (up - lo);
      f1 = h(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (up - lo);
      f2 = h(x2);
    }
  }
  for (const auto& [x, f] : {std::pair{x1, f1}, std::pair{x2, f2}}) {
    if (f < out.best_value) {
      out.best_value = f;
      out.best_lambda = x;
    }
  }
  out.at_upper_end = out.best_lambda >= grid.back() * (1.0 - 1e-9);
  return out;
}

}  // namespace

Verdict discrete_lorenz(const Matrix& m, const LorenzCone& c, double tol,
                        const LorenzSearchOptions& opts) {
  const int n = static_cast<int>(c.Q.rows());
  require_dims(m, n, "M");
  Verdict v;
  if (m.cwiseAbs().maxCoeff() == 0.0) {
    v.outcome = Outcome::Holds;
    v.margin = 0.0;
    v.certificate = "M = 0 maps the cone to its apex";
    return v;
  }
  const SetSpec set{c};
  const MembershipTester tester(set, kMembershipTol);
  const Matrix p = sym(m.transpose() * c.Q * m);
  const SProcedure sp = s_procedure(p, c.Q, opts);
  v.margin = -sp.best_value;
  v.multiplier = sp.best_lambda;

  // Orientation: the image of an interior reference point must stay in the
  // nappe selected by the axis.
  const Vector u = c.axis.normalized();
  const Vector mu = m * u;
  const bool orientation_ok =
      mu.norm() == 0.0 ||
      mu.dot(c.Q * u) / (mu.norm() * (c.Q * u).norm()) <= tol;

  if (sp.best_value <= tol && orientation_ok) {
    v.outcome = Outcome::Holds;
    v.certificate = "S-procedure: M'QM - " + fmt(sp.best_lambda) +
                    " Q is NSD (normalized lambda_max " +
                    fmt(sp.best_value) + "); axis image keeps orientation";
    return v;
  }
  if (!orientation_ok && tester(mu).location == Location::Outside) {
    v.outcome = Outcome::Fails;
    v.witness = u;
    v.certificate = "axis is mapped into the opposite nappe";
    return v;
  }
  if (sp.at_upper_end) {
    v.outcome = Outcome::Inconclusive;
    v.certificate = "S-procedure search ended at its upper bound";
    return v;
  }
  if (opts.find_witness) {
    SampleOptions so;
    so.cone_on_base = true;
    const auto pts = sample_points(set, static_cast<size_t>(opts.witness_samples / 4),
                                   static_cast<size_t>(opts.witness_samples -
                                                       opts.witness_samples / 4),
                                   opts.witness_seed, kMembershipTol, so);
    double worst = kInf;
    const Vector* arg = nullptr;
    for (const auto& pt : pts) {
      const double mg = tester(m * pt.x).margin;
      if (mg < worst) {
        worst = mg;
        arg = &pt.x;
      }
    }
    if (arg != nullptr && worst < -kMembershipTol) {
      v.outcome = Outcome::Fails;
      v.witness = *arg;
      v.certificate = "no multiplier certifies M'QM - lambda Q NSD (best " +
                      fmt(sp.best_value) + " at lambda " +
                      fmt(sp.best_lambda) + "); witness image margin " +
                      fmt(worst);
      return v;
    }
  }
  v.outcome = Outcome::Inconclusive;
  v.certificate = "S-procedure not certified (best " + fmt(sp.best_value) +
                  ") and no sampled witness leaves the cone";
  return v;
}

Verdict continuous_lorenz_necessary(const Matrix& a, const LorenzCone& c,
                                    std::size_t n_samples, std::uint64_t seed,
                                    double tol) {
  const int n = static_cast<int>(c.Q.rows());
  require_dims(a, n, "A");
  const Matrix s = sym(a.transpose() * c.Q + c.Q * a);
  const double q_norm = spectral_norm(c.Q);
  SampleOptions so;
  so.cone_on_base = true;
  const auto pts = sample_points(SetSpec{c}, 0, n_samples, seed, tol, so);
  Verdict v;
  v.samples = pts.size();
  double worst = -kInf;
  const Vector* arg = nullptr;
  for (const auto& pt : pts) {
    const double val = pt.x.dot(s * pt.x) / (q_norm * pt.x.squaredNorm());
    if (val > worst) {
      worst = val;
      arg = &pt.x;
    }
  }
  v.margin = -worst;
  if (arg != nullptr && worst > tol) {
    v.outcome = Outcome::Fails;
    v.witness = *arg;
    v.certificate = "boundary point with x'(A'Q + QA)x / (|Q||x|^2) = " +
                    fmt(worst) + " > 0";
  } else {
    v.outcome = Outcome::Inconclusive;
    v.certificate = "necessary boundary condition satisfied on " +
                    std::to_string(pts.size()) +
                    " samples; sufficiency is not decided";
  }
  return v;
}

Verdict continuous_check(const Matrix& a, const SetSpec& s,
                         std::size_t samples, std::uint64_t seed, double tol) {
  if (const auto* e = std::get_if<Ellipsoid>(&s)) {
    return continuous_ellipsoid(a, *e, kDefaultEigTol);
  }
  if (const auto* p = std::get_if<PolyhedronPair>(&s)) {
    return continuous_polyhedron(a, *p, tol);
  }
  if (const auto* c = std::get_if<PolyhedralCone>(&s)) {
    return cross_positive_polyhedral(a, *c, tol);
  }
  if (const auto* c = std::get_if<LorenzCone>(&s)) {
    return continuous_lorenz_necessary(a, *c, samples, seed, tol);
  }
  Verdict v;
  v.outcome = Outcome::Inconclusive;
  v.certificate = "no exact continuous test for a " +
                  std::string(set_type_name(s)) +
                  " without both H and V descriptions";
  return v;
}

bool has_exact_discrete_check(const SetSpec& s) {
  return std::holds_alternative<Ellipsoid>(s) ||
         std::holds_alternative<PolyhedronPair>(s) ||
         std::holds_alternative<PolyhedralCone>(s) ||
         std::holds_alternative<LorenzCone>(s);
}

Verdict discrete_check(const Matrix& m, const SetSpec& s, double tol,
                       const LorenzSearchOptions& lorenz) {
  if (const auto* e = std::get_if<Ellipsoid>(&s)) {
    return discrete_ellipsoid(m, *e, tol);
  }
  if (const auto* p = std::get_if<PolyhedronPair>(&s)) {
    return discrete_polyhedron(m, *p, tol);
  }
  if (const auto* c = std::get_if<PolyhedralCone>(&s)) {
    return discrete_polyhedral_cone(m, *c, tol);
  }
  if (const auto* c = std::get_if<LorenzCone>(&s)) {
    return discrete_lorenz(m, *c, tol, lorenz);
  }
  throw Error(ErrorKind::InvalidArgument,
              "no exact discrete test for a " + std::string(set_type_name(s)));
}

}  // namespace invstep
