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

#include "invstep/membership.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "invstep/linprog.hpp"

namespace invstep {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

MembershipTester::MembershipTester(const SetSpec& s, double tol)
    : set_(&s), tol_(tol), dim_(dimension(s)) {
  if (const auto* c = std::get_if<LorenzCone>(&s)) {
    q_norm_ = spectral_norm(c->Q);
    q_axis_ = c->Q * c->axis;
    q_axis_norm_ = q_axis_.norm();
  } else if (const auto* pc = std::get_if<PolyhedralCone>(&s)) {
    row_norms_ = pc->normals.rowwise().norm();
  }
}

Classification MembershipTester::from_margin(double margin) const {
  if (margin > tol_) return {Location::Inside, margin};
  if (margin >= -tol_) return {Location::Boundary, margin};
  return {Location::Outside, margin};
}

Classification MembershipTester::operator()(const Vector& x) const {
  if (x.size() != dim_) {
    throw Error(ErrorKind::DimensionMismatch,
                "point of dimension " + std::to_string(x.size()) +
                    " for a set of dimension " + std::to_string(dim_));
  }
  const double margin = std::visit(
      overloaded{
          [&](const HPolyhedron& h) { return (h.b - h.G * x).minCoeff(); },
          [&](const VPolyhedron& v) { return v_margin(v, x); },
          [&](const PolyhedronPair& p) {
            return (p.h.b - p.h.G * x).minCoeff();
          },
          [&](const Ellipsoid& e) { return 1.0 - x.dot(e.Q * x); },
          [&](const LorenzCone& c) {
            const double nx = x.norm();
            if (nx == 0.0) return 0.0;
            const double quad = -x.dot(c.Q * x) / (q_norm_ * nx * nx);
            const double lin = -x.dot(q_axis_) / (q_axis_norm_ * nx);
            return std::min(quad, lin);
          },
          [&](const PolyhedralCone& c) {
            const double nx = x.norm();
            if (nx == 0.0) return 0.0;
            return (-(c.normals * x).cwiseQuotient(row_norms_)).minCoeff() /
                   nx;
          },
      },
      *set_);
  return from_margin(margin);
}

// Inside the polyhedron: the largest t such that x is a combination with
// every generator weight >= t (positive exactly on the relative interior).
// Outside: minus the l1 distance to the nearest representable point.
double MembershipTester::v_margin(const VPolyhedron& v, const Vector& x) const {
  const Eigen::Index n = x.size();
  const Eigen::Index l1 = v.vertices.cols();
  const Eigen::Index l2 = v.rays.cols();
  const Eigen::Index k = l1 + l2;
  {
    // vars: weights (k), t+ , t-
    const Eigen::Index nv = k + 2;
    Matrix a_eq = Matrix::Zero(n + 1, nv);
    a_eq.block(0, 0, n, l1) = v.vertices;
    if (l2 > 0) a_eq.block(0, l1, n, l2) = v.rays;
    a_eq.block(n, 0, 1, l1).setOnes();
    Vector b_eq(n + 1);
    b_eq << x, 1.0;
    Matrix a_ub = Matrix::Zero(k + 1, nv);
    for (Eigen::Index i = 0; i < k; ++i) {
      a_ub(i, i) = -1.0;
      a_ub(i, k) = 1.0;
      a_ub(i, k + 1) = -1.0;
    }
    a_ub(k, k) = 1.0;
    a_ub(k, k + 1) = -1.0;
    Vector b_ub = Vector::Zero(k + 1);
    b_ub(k) = 1.0;
    Vector c = Vector::Zero(nv);
    c(k) = 1.0;
    c(k + 1) = -1.0;
    const auto res = lp::maximize(c, a_ub, b_ub, a_eq, b_eq);
    if (res.status == lp::Status::Optimal) return res.objective;
  }
  // vars: weights (k), e+ (n), e- (n)
  const Eigen::Index nv = k + 2 * n;
  Matrix a_eq = Matrix::Zero(n + 1, nv);
  a_eq.block(0, 0, n, l1) = v.vertices;
  if (l2 > 0) a_eq.block(0, l1, n, l2) = v.rays;
  a_eq.block(0, k, n, n) = Matrix::Identity(n, n);
  a_eq.block(0, k + n, n, n) = -Matrix::Identity(n, n);
  a_eq.block(n, 0, 1, l1).setOnes();
  Vector b_eq(n + 1);
  b_eq << x, 1.0;
  Vector c = Vector::Zero(nv);
  c.tail(2 * n).setConstant(-1.0);
  const auto res = lp::maximize(c, Matrix(0, nv), Vector(0), a_eq, b_eq);
  if (res.status != lp::Status::Optimal) {
    throw Error(ErrorKind::NoConvergence, "V-polyhedron distance LP failed");
  }
  // The primary LP declared x infeasible, so report a strictly negative
  // margin even if the residual is below rounding.
  return std::min(res.objective, -std::numeric_limits<double>::min());
}

}  // namespace invstep
