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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "generators.hpp"
#include "invstep/linprog.hpp"

using namespace invstep;
using namespace invstep::testgen;

namespace {

// Brute force for 2-variable LPs with x >= 0: enumerate intersections of
// every pair of constraint lines (including the axes).
double brute_force_2d(const Vector& c, const Matrix& a, const Vector& b,
                      bool* feasible) {
  Matrix all(a.rows() + 2, 2);
  Vector rhs(a.rows() + 2);
  all << a, -Matrix::Identity(2, 2);
  rhs << b, 0, 0;
  double best = -std::numeric_limits<double>::infinity();
  *feasible = false;
  for (Eigen::Index i = 0; i < all.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < all.rows(); ++j) {
      Eigen::Matrix2d m;
      m << all.row(i), all.row(j);
      if (std::abs(m.determinant()) < 1e-12) continue;
      const Eigen::Vector2d x = m.inverse() * Eigen::Vector2d(rhs(i), rhs(j));
      if (((all * x - rhs).array() > 1e-9).any()) continue;
      *feasible = true;
      best = std::max(best, c.dot(x));
    }
  }
  return best;
}

}  // namespace

TEST(LinProg, TextbookMaximum) {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6).
  const auto r = lp::maximize(vec({3, 5}), rows({{1, 0}, {0, 2}, {3, 2}}),
                              vec({4, 12, 18}), Matrix(0, 2), Vector(0));
  ASSERT_EQ(r.status, lp::Status::Optimal);
  EXPECT_NEAR(r.objective, 36.0, 1e-12);
  EXPECT_NEAR(r.x(0), 2.0, 1e-12);
  EXPECT_NEAR(r.x(1), 6.0, 1e-12);
}

TEST(LinProg, EqualityConstraint) {
  // max x + 2y, x + y = 1 -> 2 at (0, 1).
  const auto r = lp::maximize(vec({1, 2}), Matrix(0, 2), Vector(0),
                              rows({{1, 1}}), vec({1}));
  ASSERT_EQ(r.status, lp::Status::Optimal);
  EXPECT_NEAR(r.objective, 2.0, 1e-12);
}

TEST(LinProg, NegativeRhsNeedsPhaseOne) {
  // x + y >= 2 written as -x - y <= -2; min x + y -> 2.
  const auto r = lp::maximize(vec({-1, -1}), rows({{-1, -1}}), vec({-2}),
                              Matrix(0, 2), Vector(0));
  ASSERT_EQ(r.status, lp::Status::Optimal);
  EXPECT_NEAR(r.objective, -2.0, 1e-12);
}

TEST(LinProg, Infeasible) {
  const auto r = lp::maximize(vec({1, 1}), rows({{1, 1}, {-1, -1}}),
                              vec({1, -2}), Matrix(0, 2), Vector(0));
  EXPECT_EQ(r.status, lp::Status::Infeasible);
}

TEST(LinProg, Unbounded) {
  const auto r = lp::maximize(vec({1, 0}), rows({{0, 1}}), vec({1}),
                              Matrix(0, 2), Vector(0));
  EXPECT_EQ(r.status, lp::Status::Unbounded);
}

TEST(LinProg, FreeVariables) {
  // max -|x - 3| style: max -x s.t. x >= -5 (free x) -> 5 at x = -5.
  const auto r = lp::maximize_free(vec({-1}), rows({{-1}}), vec({5}),
                                   Matrix(0, 1), Vector(0));
  ASSERT_EQ(r.status, lp::Status::Optimal);
  EXPECT_NEAR(r.x(0), -5.0, 1e-12);
}

TEST(LinProg, DegenerateVertexTerminates) {
  // Several constraints through the optimum; Bland's rule must not cycle.
  const auto r = lp::maximize(vec({1, 1}),
                              rows({{1, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 2}}),
                              vec({1, 1, 2, 3, 3}), Matrix(0, 2), Vector(0));
  ASSERT_EQ(r.status, lp::Status::Optimal);
  EXPECT_NEAR(r.objective, 2.0, 1e-12);
}

TEST(LinProg, RandomAgreesWithVertexEnumeration) {
  Gen g(21);
  int optimal = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = g.integer(1, 6);
    const Matrix a = g.gaussian(m, 2);
    Vector b(m);
    for (int i = 0; i < m; ++i) b(i) = g.uniform(-1, 3);
    const Vector c = g.gaussian(2);
    bool feasible = false;
    const double oracle = brute_force_2d(c, a, b, &feasible);
    const auto r = lp::maximize(c, a, b, Matrix(0, 2), Vector(0));
    if (!feasible) {
      EXPECT_EQ(r.status, lp::Status::Infeasible) << "trial " << trial;
      continue;
    }
    if (r.status == lp::Status::Unbounded) {
      // Boxing the problem must then push the objective past every vertex.
      Matrix boxed(m + 2, 2);
      boxed << a, Matrix::Identity(2, 2);
      Vector bb(m + 2);
      bb << b, 1e6, 1e6;
      const auto rb = lp::maximize(c, boxed, bb, Matrix(0, 2), Vector(0));
      ASSERT_EQ(rb.status, lp::Status::Optimal);
      EXPECT_GT(rb.objective, oracle + 1.0) << "trial " << trial;
      continue;
    }
    ASSERT_EQ(r.status, lp::Status::Optimal) << "trial " << trial;
    EXPECT_NEAR(r.objective, oracle, 1e-8 * (1 + std::abs(oracle)))
        << "trial " << trial;
    EXPECT_TRUE(((a * r.x - b).array() <= 1e-8).all());
    EXPECT_TRUE((r.x.array() >= -1e-12).all());
    ++optimal;
  }
  EXPECT_GT(optimal, 50);
}
