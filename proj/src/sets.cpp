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

#include "invstep/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "invstep/linprog.hpp"
#include "invstep/membership.hpp"

namespace invstep {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

void fail(ValidationReport& r, std::string what, double margin) {
  r.failures.push_back({std::move(what), margin});
}

bool check_finite(ValidationReport& r, const Matrix& m, const char* name) {
  if (m.size() > 0 && !m.allFinite()) {
    fail(r, std::string(name) + " has non-finite entries", 0.0);
    return false;
  }
  return true;
}

std::optional<Vector> chebyshev_center(const HPolyhedron& h, double* radius) {
  const Eigen::Index m = h.G.rows();
  const Eigen::Index n = h.G.cols();
  Matrix a_ub = Matrix::Zero(m + 1, n + 1);
  Vector b_ub(m + 1);
  a_ub.topLeftCorner(m, n) = h.G;
  a_ub.col(n).head(m) = h.G.rowwise().norm();
  b_ub.head(m) = h.b;
  a_ub(m, n) = 1.0;
  b_ub(m) = 1.0;
  Vector c = Vector::Zero(n + 1);
  c(n) = 1.0;
  const auto res = lp::maximize_free(c, a_ub, b_ub, Matrix(0, n + 1), Vector(0));
  if (res.status != lp::Status::Optimal) return std::nullopt;
  *radius = res.x(n);
  return res.x.head(n);
}

void validate_h(ValidationReport& r, const HPolyhedron& h, double tol) {
  if (h.G.rows() < 1 || h.G.cols() < 1) {
    fail(r, "H-polyhedron needs at least one inequality", 0.0);
    return;
  }
  if (h.b.size() != h.G.rows()) {
    fail(r, "b length must equal the row count of G", 0.0);
    return;
  }
  if (!check_finite(r, h.G, "G") || !check_finite(r, h.b, "b")) return;
  double radius = -kInf;
  const auto center = chebyshev_center(h, &radius);
  if (!center || radius < -tol) {
    fail(r, "H-polyhedron is empty", center ? radius : -kInf);
    return;
  }
  r.interior_point = *center;
}

void validate_v(ValidationReport& r, const VPolyhedron& v) {
  if (v.vertices.cols() < 1 || v.vertices.rows() < 1) {
    fail(r, "V-polyhedron needs at least one vertex", 0.0);
    return;
  }
  if (v.rays.cols() > 0 && v.rays.rows() != v.vertices.rows()) {
    fail(r, "rays and vertices differ in dimension", 0.0);
    return;
  }
  check_finite(r, v.vertices, "vertices");
  check_finite(r, v.rays, "rays");
  for (Eigen::Index j = 0; j < v.rays.cols(); ++j) {
    if (v.rays.col(j).norm() == 0.0) {
      fail(r, "ray " + std::to_string(j) + " is zero", 0.0);
    }
  }
}

void validate_pair_consistency(ValidationReport& r, const HPolyhedron& h,
                               const VPolyhedron& v, double tol) {
  if (h.G.cols() != v.vertices.rows()) {
    fail(r, "H and V descriptions differ in dimension", 0.0);
    return;
  }
  for (Eigen::Index i = 0; i < v.vertices.cols(); ++i) {
    const double slack = (h.b - h.G * v.vertices.col(i)).minCoeff();
    if (slack < -tol) {
      fail(r, "vertex " + std::to_string(i) + " violates G x <= b", slack);
    }
  }
  for (Eigen::Index j = 0; j < v.rays.cols(); ++j) {
    const Vector d = v.rays.col(j).normalized();
    const double slack = (-(h.G * d)).minCoeff();
    if (slack < -tol) {
      fail(r, "ray " + std::to_string(j) + " violates G d <= 0", slack);
    }
  }
}

void validate_symmetric(ValidationReport& r, const Matrix& q, double tol) {
  if (q.rows() < 1 || q.rows() != q.cols()) {
    fail(r, "Q must be square and nonempty", 0.0);
    return;
  }
  if (!check_finite(r, q, "Q")) return;
  if (!is_symmetric(q, tol)) {
    fail(r, "Q not symmetric",
         -(q - q.transpose()).cwiseAbs().maxCoeff());
  }
}

void validate_ellipsoid(ValidationReport& r, const Ellipsoid& e, double tol) {
  validate_symmetric(r, e.Q, tol);
  if (!r.passed()) return;
  const auto d = definiteness(e.Q, kDefaultEigTol);
  if (!d.is_pd()) fail(r, "Q not positive definite", d.lambda_min);
  r.interior_point = Vector::Zero(e.Q.rows());
}

void validate_lorenz(ValidationReport& r, const LorenzCone& c, double tol) {
  validate_symmetric(r, c.Q, tol);
  if (!r.passed()) return;
  const Eigen::Index n = c.Q.rows();
  if (n < 2) {
    fail(r, "Lorenz cone needs dimension >= 2", 0.0);
    return;
  }
  const Inertia in = inertia_of(c.Q, kDefaultEigTol);
  r.inertia = in;
  if (!(in == Inertia{static_cast<int>(n) - 1, 0, 1})) {
    fail(r, "inertia of Q must be (n-1, 0, 1)", 0.0);
    return;
  }
  if (c.axis.size() != n || !c.axis.allFinite() || c.axis.norm() == 0.0) {
    fail(r, "axis must be a nonzero vector of dimension n", 0.0);
    return;
  }
  const SymmetricEigen eig = sym_eigen(c.Q, tol);
  const double lam = eig.values(n - 1);
  const Vector u = c.axis.normalized();
  const double resid = (c.Q * u - lam * u).norm();
  const double qnorm = eig.values.cwiseAbs().maxCoeff();
  if (resid > 1e-6 * qnorm) {
    fail(r, "axis is not the eigenvector of the negative eigenvalue", -resid);
  }
  if (std::abs(c.axis.norm() - 1.0) > 1e-6) {
    fail(r, "axis must have unit length", -std::abs(c.axis.norm() - 1.0));
  }
  r.interior_point = u;
}

void validate_polycone(ValidationReport& r, const PolyhedralCone& c,
                       double tol) {
  if (c.rays.cols() < 1 || c.rays.rows() < 1) {
    fail(r, "polyhedral cone needs at least one ray", 0.0);
    return;
  }
  if (c.normals.rows() < 1 || c.normals.cols() != c.rays.rows()) {
    fail(r, "facet normals must be rows of the cone dimension", 0.0);
    return;
  }
  if (!check_finite(r, c.rays, "rays") ||
      !check_finite(r, c.normals, "normals")) {
    return;
  }
  for (Eigen::Index j = 0; j < c.rays.cols(); ++j) {
    if (c.rays.col(j).norm() == 0.0) {
      fail(r, "ray " + std::to_string(j) + " is zero", 0.0);
    }
  }
  for (Eigen::Index i = 0; i < c.normals.rows(); ++i) {
    if (c.normals.row(i).norm() == 0.0) {
      fail(r, "normal " + std::to_string(i) + " is zero", 0.0);
    }
  }
  if (!r.passed()) return;
  for (Eigen::Index j = 0; j < c.rays.cols(); ++j) {
    const Vector d = c.rays.col(j).normalized();
    for (Eigen::Index i = 0; i < c.normals.rows(); ++i) {
      const double v = c.normals.row(i).normalized().dot(d);
      if (v > tol) {
        fail(r,
             "ray " + std::to_string(j) + " violates facet " +
                 std::to_string(i),
             -v);
      }
    }
  }
  try {
    const ConeBase base = cone_base(c, tol);
    Vector mid = Vector::Zero(c.rays.rows());
    for (Eigen::Index j = 0; j < c.rays.cols(); ++j) {
      mid += c.rays.col(j) / base.normal.dot(c.rays.col(j));
    }
    r.interior_point = mid / static_cast<double>(c.rays.cols());
  } catch (const Error& e) {
    fail(r, "cone is not pointed", 0.0);
  }
}

}  // namespace

LorenzCone LorenzCone::from_matrix(const Matrix& q, double tol) {
  const SymmetricEigen eig = sym_eigen(q, tol);
  const Eigen::Index n = q.rows();
  const Inertia in = inertia_of(q, tol);
  if (n < 2 || !(in == Inertia{static_cast<int>(n) - 1, 0, 1})) {
    throw Error(ErrorKind::InvalidArgument,
                "Lorenz cone matrix must have inertia (n-1, 0, 1)");
  }
  Vector u = eig.vectors.col(n - 1).normalized();
  Eigen::Index k = 0;
  u.cwiseAbs().maxCoeff(&k);
  if (u(k) < 0) u = -u;
  return LorenzCone{0.5 * (q + q.transpose()), u};
}

int dimension(const SetSpec& s) {
  return std::visit(
      overloaded{
          [](const HPolyhedron& h) { return static_cast<int>(h.G.cols()); },
          [](const VPolyhedron& v) {
            return static_cast<int>(v.vertices.rows());
          },
          [](const PolyhedronPair& p) {
            return static_cast<int>(p.h.G.cols());
          },
          [](const Ellipsoid& e) { return static_cast<int>(e.Q.rows()); },
          [](const LorenzCone& c) { return static_cast<int>(c.Q.rows()); },
          [](const PolyhedralCone& c) {
            return static_cast<int>(c.rays.rows());
          },
      },
      s);
}

std::string_view set_type_name(const SetSpec& s) {
  return std::visit(
      overloaded{
          [](const HPolyhedron&) { return std::string_view("h-polyhedron"); },
          [](const VPolyhedron&) { return std::string_view("v-polyhedron"); },
          [](const PolyhedronPair&) {
            return std::string_view("polyhedron-pair");
          },
          [](const Ellipsoid&) { return std::string_view("ellipsoid"); },
          [](const LorenzCone&) { return std::string_view("lorenz-cone"); },
          [](const PolyhedralCone&) {
            return std::string_view("polyhedral-cone");
          },
      },
      s);
}

bool is_cone(const SetSpec& s) {
  return std::holds_alternative<LorenzCone>(s) ||
         std::holds_alternative<PolyhedralCone>(s);
}

PolyhedronPair as_polyhedron_pair(const PolyhedralCone& c) {
  const Eigen::Index n = c.rays.rows();
  return PolyhedronPair{HPolyhedron{c.normals, Vector::Zero(c.normals.rows())},
                        VPolyhedron{Matrix::Zero(n, 1), c.rays}};
}

std::string_view to_string(Location loc) {
  switch (loc) {
    case Location::Inside: return "Inside";
    case Location::Boundary: return "Boundary";
    case Location::Outside: return "Outside";
  }
  return "Unknown";
}

ValidationReport validate_set(const SetSpec& s, double tol) {
  ValidationReport r;
  std::visit(overloaded{
                 [&](const HPolyhedron& h) { validate_h(r, h, tol); },
                 [&](const VPolyhedron& v) { validate_v(r, v); },
                 [&](const PolyhedronPair& p) {
                   validate_h(r, p.h, tol);
                   validate_v(r, p.v);
                   if (r.passed()) validate_pair_consistency(r, p.h, p.v, tol);
                 },
                 [&](const Ellipsoid& e) { validate_ellipsoid(r, e, tol); },
                 [&](const LorenzCone& c) { validate_lorenz(r, c, tol); },
                 [&](const PolyhedralCone& c) { validate_polycone(r, c, tol); },
             },
             s);
  return r;
}

void require_valid(const SetSpec& s, double tol) {
  const ValidationReport r = validate_set(s, tol);
  if (r.passed()) return;
  std::ostringstream msg;
  msg << set_type_name(s) << ":";
  for (const auto& f : r.failures) {
    msg << " [" << f.invariant << ", margin " << f.margin << "]";
  }
  throw Error(ErrorKind::ValidationError, msg.str());
}

Classification classify_point(const SetSpec& s, const Vector& x, double tol) {
  return MembershipTester(s, tol)(x);
}

ConeBase cone_base(const LorenzCone& c) {
  const Vector qa = c.Q * c.axis;
  if (qa.norm() == 0.0) {
    throw Error(ErrorKind::DegenerateCone, "Q*axis vanishes");
  }
  return ConeBase{-qa / qa.norm()};
}

ConeBase cone_base(const PolyhedralCone& c, double tol) {
  const Eigen::Index n = c.rays.rows();
  const Eigen::Index k = c.rays.cols();
  Matrix unit(n, k);
  for (Eigen::Index j = 0; j < k; ++j) unit.col(j) = c.rays.col(j).normalized();
  Vector a = unit.rowwise().sum();
  auto pointed = [&](const Vector& cand) {
    return cand.norm() > 0.0 &&
           (cand.normalized().transpose() * unit).minCoeff() > tol;
  };
  if (!pointed(a)) {
    // Sum of directions is not separating; look for any a with a'r >= 1.
    const Matrix a_ub = -unit.transpose();
    const Vector b_ub = -Vector::Ones(k);
    const auto res = lp::maximize_free(Vector::Zero(n), a_ub, b_ub,
                                       Matrix(0, n), Vector(0));
    if (res.status != lp::Status::Optimal || !pointed(res.x)) {
      throw Error(ErrorKind::DegenerateCone,
                  "no hyperplane separates the cone from the origin");
    }
    a = res.x;
  }
  return ConeBase{a.normalized()};
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

class Sampler {
 public:
  Sampler(const SetSpec& s, std::uint64_t seed, double tol,
          const SampleOptions& opts)
      : set_(s), tester_(s, tol), rng_(seed), tol_(tol), opts_(opts),
        n_(dimension(s)) {}

  std::vector<SampledPoint> run(std::size_t n_in, std::size_t n_bd) {
    std::vector<SampledPoint> out;
    out.reserve(n_in + n_bd);
    collect(out, n_in, Location::Inside);
    collect(out, n_bd, Location::Boundary);
    return out;
  }

 private:
  using Draw = std::optional<Vector>;

  void collect(std::vector<SampledPoint>& out, std::size_t count,
               Location want) {
    std::size_t accepted = 0;
    std::size_t attempts = 0;
    while (accepted < count) {
      ++attempts;
      if (attempts >= 1000 && accepted * 1000 < attempts) {
        throw Error(ErrorKind::SamplingExhausted,
                    std::string("acceptance below 0.1% while sampling ") +
                        std::string(to_string(want)) + " points of " +
                        std::string(set_type_name(set_)));
      }
      Draw x = want == Location::Inside ? draw_interior() : draw_boundary();
      if (!x) continue;
      if (is_cone(set_) && !opts_.cone_on_base) {
        *x *= std::exp(uniform(-opts_.cone_scale_spread,
                               opts_.cone_scale_spread));
      }
      if (tester_(*x).location != want) continue;
      out.push_back({std::move(*x), want});
      ++accepted;
    }
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  Vector direction(Eigen::Index k) {
    std::normal_distribution<double> nd;
    Vector d(k);
    do {
      for (Eigen::Index i = 0; i < k; ++i) d(i) = nd(rng_);
    } while (d.norm() < 1e-12);
    return d.normalized();
  }

  // Uniform point of the unit ball in R^k scaled to radius < 1.
  Vector ball_point(Eigen::Index k) {
    const double r = std::pow(uniform(0.0, 1.0), 1.0 / static_cast<double>(k));
    return direction(k) * r;
  }

  Vector dirichlet(Eigen::Index k) {
    Vector w(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      w(i) = -std::log(uniform(std::numeric_limits<double>::min(), 1.0));
    }
    return w / w.sum();
  }

  Draw draw_interior() {
    return std::visit(
        overloaded{
            [&](const HPolyhedron& h) { return h_interior(h); },
            [&](const VPolyhedron& v) { return v_interior(v); },
            [&](const PolyhedronPair& p) { return v_interior(p.v); },
            [&](const Ellipsoid& e) -> Draw {
              return ellipsoid_map(e) * ball_point(n_);
            },
            [&](const LorenzCone& c) -> Draw {
              return lorenz_base_point(c, /*boundary=*/false);
            },
            [&](const PolyhedralCone& c) -> Draw {
              return polycone_base_point(c, -1);
            },
        },
        set_);
  }

  Draw draw_boundary() {
    return std::visit(
        overloaded{
            [&](const HPolyhedron& h) -> Draw {
              const Draw start = h_interior(h);
              if (!start) return std::nullopt;
              return shoot(h, *start);
            },
            [&](const VPolyhedron& v) -> Draw { return v_boundary(v); },
            [&](const PolyhedronPair& p) -> Draw {
              const Draw start = v_interior(p.v);
              if (!start) return std::nullopt;
              return shoot(p.h, *start);
            },
            [&](const Ellipsoid& e) -> Draw {
              return ellipsoid_map(e) * direction(n_);
            },
            [&](const LorenzCone& c) -> Draw {
              return lorenz_base_point(c, /*boundary=*/true);
            },
            [&](const PolyhedralCone& c) -> Draw {
              std::uniform_int_distribution<Eigen::Index> pick(
                  0, c.normals.rows() - 1);
              return polycone_base_point(c, pick(rng_));
            },
        },
        set_);
  }

  // x = L^{-T} z maps the unit ball onto the ellipsoid when Q = L L'.
  const Matrix& ellipsoid_map(const Ellipsoid& e) {
    if (!ell_map_) {
      Eigen::LLT<Matrix> llt(e.Q);
      if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::InvalidArgument, "Q not positive definite");
      }
      ell_map_ = llt.matrixU().solve(Matrix::Identity(n_, n_));
    }
    return *ell_map_;
  }

  struct HBox {
    Vector lo, hi;
  };

  const HBox& h_box(const HPolyhedron& h) {
    if (!box_) {
      double radius = 0.0;
      const auto center = chebyshev_center(h, &radius);
      if (!center) {
        throw Error(ErrorKind::SamplingExhausted, "H-polyhedron is empty");
      }
      HBox box{Vector(n_), Vector(n_)};
      double extent = std::max(1.0, std::abs(radius));
      std::vector<bool> lo_free(n_, false), hi_free(n_, false);
      for (int i = 0; i < n_; ++i) {
        for (int sgn : {1, -1}) {
          Vector c = Vector::Zero(n_);
          c(i) = sgn;
          const auto res = lp::maximize_free(c, h.G, h.b, Matrix(0, n_),
                                             Vector(0));
          if (res.status == lp::Status::Optimal) {
            (sgn > 0 ? box.hi : box.lo)(i) = res.x(i);
            extent = std::max(extent, std::abs(res.x(i) - (*center)(i)));
          } else {
            (sgn > 0 ? hi_free : lo_free)[static_cast<size_t>(i)] = true;
          }
        }
      }
      // Unbounded directions are clipped to a box around the center.
      for (int i = 0; i < n_; ++i) {
        if (hi_free[static_cast<size_t>(i)]) box.hi(i) = (*center)(i) + 10 * extent;
        if (lo_free[static_cast<size_t>(i)]) box.lo(i) = (*center)(i) - 10 * extent;
      }
      box_ = std::move(box);
    }
    return *box_;
  }

  Draw h_interior(const HPolyhedron& h) {
    const HBox& box = h_box(h);
    Vector x(n_);
    for (int i = 0; i < n_; ++i) x(i) = uniform(box.lo(i), box.hi(i));
    if ((h.b - h.G * x).minCoeff() <= tol_) return std::nullopt;
    return x;
  }

  Draw shoot(const HPolyhedron& h, const Vector& from) {
    const Vector d = direction(n_);
    const Vector gd = h.G * d;
    const Vector slack = h.b - h.G * from;
    double t = kInf;
    for (Eigen::Index j = 0; j < gd.size(); ++j) {
      if (gd(j) > 1e-14) t = std::min(t, slack(j) / gd(j));
    }
    if (!std::isfinite(t)) return std::nullopt;
    return Vector(from + t * d);
  }

  Draw v_interior(const VPolyhedron& v) {
    Vector x = v.vertices * dirichlet(v.vertices.cols());
    if (v.rays.cols() > 0) {
      Vector w(v.rays.cols());
      for (Eigen::Index j = 0; j < w.size(); ++j) {
        w(j) = -std::log(uniform(std::numeric_limits<double>::min(), 1.0));
      }
      x += v.rays * w;
    }
    return x;
  }

  // Bisection along a random direction using LP membership; the polyhedron
  // has no facet description here.
  Draw v_boundary(const VPolyhedron& v) {
    const Draw start = v_interior(v);
    if (!start) return std::nullopt;
    const Vector d = direction(n_);
    double scale = 1.0;
    for (Eigen::Index i = 0; i < v.vertices.cols(); ++i) {
      scale = std::max(scale, (v.vertices.col(i) - *start).norm());
    }
    double hi = scale;
    int doublings = 0;
    while (tester_(*start + hi * d).location != Location::Outside) {
      hi *= 2.0;
      if (++doublings > 40) return std::nullopt;
    }
    double lo = 0.0;
    for (int it = 0; it < 80 && hi - lo > 1e-15 * scale; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (tester_(*start + mid * d).location == Location::Outside) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return Vector(*start + lo * d);
  }

  Draw lorenz_base_point(const LorenzCone& c, bool boundary) {
    if (!lorenz_eig_) lorenz_eig_ = sym_eigen(c.Q, kDefaultEigTol);
    const SymmetricEigen& eig = *lorenz_eig_;
    const Eigen::Index k = n_ - 1;
    const double neg = -eig.values(k);
    const Vector z = boundary ? direction(k) : ball_point(k);
    Vector x = c.axis.normalized();
    for (Eigen::Index i = 0; i < k; ++i) {
      Vector v = eig.vectors.col(i);
      v -= v.dot(x) * x;  // axis is exactly orthogonal in exact arithmetic
      x += std::sqrt(neg / eig.values(i)) * z(i) * v;
    }
    return x;
  }

  // facet < 0: interior combination of every ray; otherwise a combination of
  // the rays lying on that facet.
  Draw polycone_base_point(const PolyhedralCone& c, Eigen::Index facet) {
    if (!poly_base_) poly_base_ = cone_base(c, tol_).normal;
    std::vector<Eigen::Index> use;
    for (Eigen::Index j = 0; j < c.rays.cols(); ++j) {
      if (facet < 0) {
        use.push_back(j);
        continue;
      }
      const double v = c.normals.row(facet).normalized().dot(
          c.rays.col(j).normalized());
      if (std::abs(v) <= 1e-7) use.push_back(j);
    }
    if (use.empty()) return std::nullopt;
    const Vector w = dirichlet(static_cast<Eigen::Index>(use.size()));
    Vector x = Vector::Zero(n_);
    for (size_t i = 0; i < use.size(); ++i) {
      const Vector r = c.rays.col(use[i]);
      x += w(static_cast<Eigen::Index>(i)) * r / poly_base_->dot(r);
    }
    return x;
  }

  const SetSpec& set_;
  MembershipTester tester_;
  std::mt19937_64 rng_;
  double tol_;
  SampleOptions opts_;
  int n_;
  std::optional<Matrix> ell_map_;
  std::optional<HBox> box_;
  std::optional<SymmetricEigen> lorenz_eig_;
  std::optional<Vector> poly_base_;
};

}  // namespace

std::vector<SampledPoint> sample_points(const SetSpec& s, std::size_t n_interior,
                                        std::size_t n_boundary,
                                        std::uint64_t seed, double tol,
                                        const SampleOptions& opts) {
  require_valid(s, tol);
  return Sampler(s, seed, tol, opts).run(n_interior, n_boundary);
}

}  // namespace invstep
