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

#include "generators.hpp"
#include "invstep/dynsys.hpp"
#include "invstep/invariance.hpp"
#include "invstep/membership.hpp"

using namespace invstep;
using namespace invstep::testgen;

namespace {

Matrix fe(const Matrix& a, double dt) {
  return step_matrix(LinearSystem(a), Method::ForwardEuler, dt);
}
Matrix be(const Matrix& a, double dt) {
  return step_matrix(LinearSystem(a), Method::BackwardEuler, dt);
}

// Worst image margin over sampled points of the set; an independent check
// of a discrete verdict.
double sampled_worst_image(const Matrix& m, const SetSpec& s, std::size_t n,
                           std::uint64_t seed) {
  SampleOptions so;
  so.cone_on_base = is_cone(s);
  const auto pts = sample_points(s, n / 2, n - n / 2, seed, kMembershipTol, so);
  const MembershipTester t(s);
  double worst = 1e300;
  for (const auto& p : pts) worst = std::min(worst, t(m * p.x).margin);
  return worst;
}

void expect_witness_violates(const Verdict& v, const Matrix& m,
                             const SetSpec& s) {
  ASSERT_TRUE(v.fails());
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_NE(classify_point(s, *v.witness).location, Location::Outside);
  EXPECT_EQ(classify_point(s, m * *v.witness).location, Location::Outside);
}

// Random Lorenz cone Q = T' diag(1,..,1,-1) T and its congruence map.
struct RandomLorenz {
  LorenzCone cone;
  Matrix t;
};

RandomLorenz random_lorenz(Gen& g, int n) {
  Matrix t = g.gaussian(n, n);
  while (std::abs(t.determinant()) < 0.2) t = g.gaussian(n, n);
  Vector d = Vector::Ones(n);
  d(n - 1) = -1;
  const Matrix q = t.transpose() * d.asDiagonal() * t;
  RandomLorenz r{LorenzCone::from_matrix(0.5 * (q + q.transpose())), t};
  return r;
}

// Maps of the standard cone {|x_{1..n-1}| <= x_n} into itself: a rotation of
// the first n-1 coordinates followed by a contraction towards the axis.
Matrix standard_cone_map(Gen& g, int n, double shrink) {
  const Matrix b = g.gaussian(n - 1, n - 1);
  const Matrix rot = Eigen::HouseholderQR<Matrix>(b).householderQ();
  Matrix m = Matrix::Identity(n, n);
  m.topLeftCorner(n - 1, n - 1) = shrink * rot;
  return m;
}

}  // namespace

// Unit disk under the rotation generator.

TEST(Ellipsoid, ContinuousRotationHolds) {
  const Verdict v = continuous_ellipsoid(example1_matrix(),
                                         Ellipsoid{Matrix::Identity(2, 2)});
  EXPECT_TRUE(v.holds());
}

TEST(Ellipsoid, ContinuousExpandingFails) {
  const Ellipsoid e{Matrix::Identity(2, 2)};
  const Verdict v = continuous_ellipsoid(diag({1, -1}), e);
  ASSERT_TRUE(v.fails());
  ASSERT_TRUE(v.witness);
  EXPECT_NEAR(v.witness->dot(*v.witness), 1.0, 1e-12);
  EXPECT_GT(v.witness->dot((diag({2, -2})) * *v.witness), 0.0);
}

TEST(Ellipsoid, ForwardEulerFailsWithGrowingRadius) {
  const Ellipsoid e{Matrix::Identity(2, 2)};
  for (double dt : {0.01, 0.1, 1.0}) {
    const Matrix m = fe(example1_matrix(), dt);
    const Verdict v = discrete_ellipsoid(m, e);
    expect_witness_violates(v, m, e);
    const Vector y = m * *v.witness;
    EXPECT_NEAR(y.squaredNorm(), (1 + dt * dt) * v.witness->squaredNorm(),
                1e-12);
  }
}

TEST(Ellipsoid, BackwardEulerHoldsForLargeSteps) {
  const Ellipsoid e{Matrix::Identity(2, 2)};
  for (double dt : {0.1, 1.0, 10.0, 1000.0}) {
    EXPECT_TRUE(discrete_ellipsoid(be(example1_matrix(), dt), e).holds());
  }
}

TEST(Ellipsoid, IdentityHolds) {
  Gen g(1);
  const Ellipsoid e{g.spd(3)};
  EXPECT_TRUE(discrete_ellipsoid(Matrix::Identity(3, 3), e).holds());
}

TEST(Ellipsoid, DiscreteVerdictMatchesSampling) {
  Gen g(33);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = g.integer(2, 4);
    const Ellipsoid e{g.spd(n)};
    const Matrix m = Matrix::Identity(n, n) + 0.3 * g.gaussian(n, n);
    const Verdict v = discrete_ellipsoid(m, e);
    const double worst = sampled_worst_image(m, e, 2000, trial);
    if (v.holds()) {
      EXPECT_GE(worst, -kMembershipTol);
    } else if (v.fails()) {
      expect_witness_violates(v, m, e);
    }
  }
}

TEST(Ellipsoid, DimensionMismatchThrows) {
  EXPECT_THROW(discrete_ellipsoid(Matrix::Identity(3, 3),
                                  Ellipsoid{Matrix::Identity(2, 2)}),
               Error);
}

// Polyhedra.

TEST(Polyhedron, SquareContraction) {
  const PolyhedronPair sq = unit_square();
  EXPECT_TRUE(continuous_polyhedron(-Matrix::Identity(2, 2), sq).holds());
  EXPECT_TRUE(discrete_polyhedron(fe(-Matrix::Identity(2, 2), 1.0), sq).holds());
  const Matrix m = fe(-Matrix::Identity(2, 2), 1.01);
  const Verdict v = discrete_polyhedron(m, sq);
  expect_witness_violates(v, m, sq);
  EXPECT_LT((*v.witness - vec({1, 1})).norm(), 1e-15);
}

TEST(Polyhedron, RotationLeavesSquare) {
  const PolyhedronPair sq = unit_square();
  const Verdict v = continuous_polyhedron(example1_matrix(), sq);
  ASSERT_TRUE(v.fails());
  ASSERT_TRUE(v.witness);
  // The witness is a vertex whose velocity points out through an active row.
  EXPECT_EQ(classify_point(sq, *v.witness).location, Location::Boundary);
  const Vector out = *v.witness + 1e-6 * example1_matrix() * *v.witness;
  EXPECT_EQ(classify_point(sq, out).location, Location::Outside);
}

TEST(Polyhedron, RayImageWitness) {
  // Half strip 0 <= x <= 1, y >= 0 under a shear.
  PolyhedronPair p;
  p.h.G = rows({{-1, 0}, {1, 0}, {0, -1}});
  p.h.b = vec({0, 1, 0});
  p.v.vertices = rows({{0, 1}, {0, 0}});
  p.v.rays = rows({{0}, {1}});
  const Matrix m = rows({{1, 0.5}, {0, 1}});
  const Verdict v = discrete_polyhedron(m, p);
  expect_witness_violates(v, m, p);
}

TEST(Polyhedron, InconsistentPairRejected) {
  PolyhedronPair p = unit_square();
  p.h.b(1) = 0.5;
  try {
    discrete_polyhedron(Matrix::Identity(2, 2), p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InconsistentPair);
  }
}

TEST(Polyhedron, DiscreteVerdictMatchesSampling) {
  Gen g(44);
  const PolyhedronPair sq = unit_square();
  for (int trial = 0; trial < 40; ++trial) {
    const Matrix m = Matrix::Identity(2, 2) + 0.3 * g.gaussian(2, 2);
    const Verdict v = discrete_polyhedron(m, sq);
    if (v.holds()) {
      EXPECT_GE(sampled_worst_image(m, sq, 1000, trial), -kMembershipTol);
    } else {
      expect_witness_violates(v, m, sq);
    }
  }
}

// Polyhedral cones.

TEST(CrossPositive, MetzlerOnOrthant) {
  EXPECT_TRUE(
      cross_positive_polyhedral(rows({{-1, 2}, {3, -4}}), orthant(2)).holds());
  const Verdict v =
      cross_positive_polyhedral(rows({{-1, -2}, {3, -4}}), orthant(2));
  ASSERT_TRUE(v.fails());
  ASSERT_TRUE(v.witness);
}

TEST(CrossPositive, CongruentConeMatchesMetzlerTest) {
  // C = T * orthant; A is cross-positive on C iff T^{-1} A T is Metzler.
  Gen g(55);
  int holds = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Matrix t = g.gaussian(3, 3);
    while (std::abs(t.determinant()) < 0.3) t = g.gaussian(3, 3);
    const PolyhedralCone c{t, -t.inverse()};
    Matrix b = g.gaussian(3, 3);
    if (trial % 2 == 0) b = b.cwiseAbs();  // Metzler half the time
    const Matrix a = t * b * t.inverse();
    double min_off = 1e300;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) min_off = std::min(min_off, b(i, j));
    const Verdict v = cross_positive_polyhedral(a, c, 1e-9);
    EXPECT_EQ(v.holds(), min_off >= -1e-7) << "trial " << trial;
    holds += v.holds();
  }
  EXPECT_GT(holds, 20);
}

TEST(PolyhedralCone, DiscreteForwardEulerOfMetzler) {
  const Matrix a = rows({{-1, 2}, {3, -4}});
  // Ratio test gives 1/4 for this matrix.
  EXPECT_TRUE(discrete_polyhedral_cone(fe(a, 0.25), orthant(2)).holds());
  const Matrix m = fe(a, 0.26);
  const Verdict v = discrete_polyhedral_cone(m, orthant(2));
  expect_witness_violates(v, m, orthant(2));
}

// Lorenz cones.

TEST(Lorenz, Example2ForwardFailsBackwardHolds) {
  const LorenzCone c = example2_cone();
  const Matrix a = example2_matrix();
  for (int i = 1; i <= 20; ++i) {
    const double dt = i / 20.0;
    const Matrix m = fe(a, dt);
    expect_witness_violates(discrete_lorenz(m, c), m, c);
  }
  for (int i = 0; i < 20; ++i) {
    const double dt = 0.99 * i / 19.0;
    const Verdict v = discrete_lorenz(be(a, dt), c);
    EXPECT_TRUE(v.holds()) << "dt " << dt << " " << v.certificate;
    ASSERT_TRUE(v.multiplier);
    EXPECT_GE(*v.multiplier, 0.0);
  }
  const Matrix m = be(a, 1.5);
  expect_witness_violates(discrete_lorenz(m, c), m, c);
}

TEST(Lorenz, Example3ThresholdAndSpuriousBranch) {
  const LorenzCone c = example3_cone();
  const Matrix a = example3_matrix();
  for (double dt : {0.0, 0.1, 0.2, 0.249, 0.2499999}) {
    EXPECT_TRUE(discrete_lorenz(be(a, dt), c).holds()) << dt;
  }
  // Between the singular shifts one boundary ray flips; beyond 1/2 both
  // rays flip and the image is the opposite nappe.
  for (double dt : {0.26, 0.4, 0.6, 1.0, 5.0}) {
    const Matrix m = be(a, dt);
    expect_witness_violates(discrete_lorenz(m, c), m, c);
  }
}

TEST(Lorenz, OppositeNappeCaughtByOrientation) {
  const LorenzCone c = example2_cone();
  const Matrix m = -Matrix::Identity(3, 3);
  const Verdict v = discrete_lorenz(m, c);
  expect_witness_violates(v, m, c);
}

TEST(Lorenz, ZeroMapHolds) {
  EXPECT_TRUE(discrete_lorenz(Matrix::Zero(3, 3), example2_cone()).holds());
}

TEST(Lorenz, CongruentSelfMapsHold) {
  Gen g(66);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = g.integer(2, 4);
    const RandomLorenz rl = random_lorenz(g, n);
    const Matrix m0 = standard_cone_map(g, n, g.uniform(0.0, 1.0));
    // Q = T' J T, so x is in C iff T x lies in the standard cone (possibly
    // reflected); T^{-1} M0 T maps C into C either way.
    const Matrix m = rl.t.inverse() * m0 * rl.t;
    const Verdict v = discrete_lorenz(m, rl.cone);
    EXPECT_TRUE(v.holds()) << "trial " << trial << ": " << v.certificate;
  }
}

TEST(Lorenz, VerdictMatchesSampling) {
  Gen g(77);
  int fails = 0, holds = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = g.integer(2, 3);
    const RandomLorenz rl = random_lorenz(g, n);
    const Matrix m0 = standard_cone_map(g, n, g.uniform(0.2, 1.0));
    Matrix m = rl.t.inverse() * m0 * rl.t;
    m += g.uniform(0.0, 0.5) * g.gaussian(n, n) * m.norm() / n;
    const Verdict v = discrete_lorenz(m, rl.cone);
    if (v.holds()) {
      ++holds;
      EXPECT_GE(sampled_worst_image(m, rl.cone, 4000, trial), -kMembershipTol)
          << "trial " << trial;
    } else if (v.fails()) {
      ++fails;
      expect_witness_violates(v, m, rl.cone);
    }
  }
  EXPECT_GT(holds, 3);
  EXPECT_GT(fails, 3);
}

TEST(Lorenz, ContinuousNecessaryTest) {
  // Example 2 satisfies the boundary condition; radial growth without axial
  // growth does not.
  const LorenzCone c = example2_cone();
  const Verdict ok = continuous_lorenz_necessary(example2_matrix(), c, 500, 1);
  EXPECT_EQ(ok.outcome, Outcome::Inconclusive);
  const Verdict bad = continuous_lorenz_necessary(diag({1, 1, 0}), c, 500, 1);
  ASSERT_TRUE(bad.fails());
  EXPECT_EQ(classify_point(c, *bad.witness).location, Location::Boundary);
}

// Dispatch.

TEST(Dispatch, ContinuousCheckPerSetType) {
  EXPECT_TRUE(continuous_check(example1_matrix(),
                               Ellipsoid{Matrix::Identity(2, 2)}).holds());
  EXPECT_TRUE(
      continuous_check(-Matrix::Identity(2, 2), unit_square()).holds());
  EXPECT_EQ(continuous_check(-Matrix::Identity(2, 2), unit_square().h).outcome,
            Outcome::Inconclusive);
}

TEST(Dispatch, DiscreteCheckRejectsHOnly) {
  EXPECT_FALSE(has_exact_discrete_check(unit_square().h));
  EXPECT_THROW(discrete_check(Matrix::Identity(2, 2), unit_square().h), Error);
}
