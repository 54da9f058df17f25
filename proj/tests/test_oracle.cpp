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

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "invstep/invariance.hpp"
#include "invstep/oracle.hpp"

using namespace invstep;
using namespace invstep::testgen;

namespace {

bool has_tag(const ThresholdReport& r, const std::string& tag) {
  return std::find(r.tags.begin(), r.tags.end(), tag) != r.tags.end();
}

const Ellipsoid kDisk{Matrix::Identity(2, 2)};

StepMap euler(const Matrix& a, Method m) {
  return StepMap::euler(LinearSystem(a), m);
}

}  // namespace

TEST(SampleVerify, Example1Backward) {
  const auto r = oracle::sample_verify(
      euler(example1_matrix(), Method::BackwardEuler), 0.7, kDisk, 10000, 7);
  EXPECT_EQ(r.samples, 10000u);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_TRUE(r.witnesses.empty());
  EXPECT_EQ(r.seed, 7u);
}

TEST(SampleVerify, Example1ForwardWitnessesNearBoundary) {
  const auto r = oracle::sample_verify(
      euler(example1_matrix(), Method::ForwardEuler), 0.1, kDisk, 10000, 7);
  EXPECT_GT(r.violations, 0u);
  ASSERT_FALSE(r.witnesses.empty());
  for (const auto& w : r.witnesses) {
    // Image radius is sqrt(1 + dt^2) times the source radius.
    EXPECT_GT(w.x.norm(), 1.0 / std::sqrt(1.01) - 1e-12);
    EXPECT_NEAR(w.image.squaredNorm(), 1.01 * w.x.squaredNorm(), 1e-12);
    EXPECT_LT(w.image_margin, 0.0);
  }
  // Worst first.
  for (std::size_t i = 1; i < r.witnesses.size(); ++i) {
    EXPECT_LE(r.witnesses[i - 1].image_margin, r.witnesses[i].image_margin);
  }
  EXPECT_NEAR(r.max_excursion, -r.witnesses.front().image_margin, 1e-15);
}

TEST(SampleVerify, ZeroStepIsIdentity) {
  for (Method m : {Method::ForwardEuler, Method::BackwardEuler}) {
    EXPECT_EQ(oracle::sample_verify(euler(example3_matrix(), m), 0.0,
                                    example3_cone(), 2000, 3)
                  .violations,
              0u);
    EXPECT_EQ(oracle::sample_verify(euler(-Matrix::Identity(2, 2), m), 0.0,
                                    unit_square(), 2000, 3)
                  .violations,
              0u);
  }
}

TEST(SampleVerify, DeterministicPerSeed) {
  const StepMap f = euler(example1_matrix(), Method::ForwardEuler);
  const auto a = oracle::sample_verify(f, 0.3, kDisk, 3000, 11);
  const auto b = oracle::sample_verify(f, 0.3, kDisk, 3000, 11);
  EXPECT_EQ(a.violations, b.violations);
  EXPECT_EQ(a.max_excursion, b.max_excursion);
  ASSERT_EQ(a.witnesses.size(), b.witnesses.size());
  for (std::size_t i = 0; i < a.witnesses.size(); ++i) {
    EXPECT_EQ(a.witnesses[i].x, b.witnesses[i].x);
  }
}

TEST(SampleVerify, NonlinearMap) {
  // Radial contraction x -> x / (1 + |x|^2) keeps the disk.
  StepMap::Attributes attrs;
  attrs.lipschitz = 1.0;
  const StepMap f = StepMap::general(
      [](double, const Vector& x) -> Vector {
        return x / (1.0 + x.squaredNorm());
      },
      attrs, "radial");
  EXPECT_EQ(oracle::sample_verify(f, 0.5, kDisk, 2000, 1).violations, 0u);
}

TEST(SampleVerify, AgreesWithExactVerdicts) {
  Gen g(55);
  for (int trial = 0; trial < 30; ++trial) {
    const FlowInvariantEllipsoid f = flow_invariant_ellipsoid(g, 3, 2);
    const Ellipsoid e{f.Q};
    const double dt = g.uniform(0.01, 2.0);
    for (Method m : {Method::ForwardEuler, Method::BackwardEuler}) {
      const Matrix mm = step_matrix(LinearSystem(f.A), m, dt);
      const Verdict v = discrete_ellipsoid(mm, e);
      const auto r =
          oracle::sample_verify(euler(f.A, m), dt, e, 2000, trial + 1);
      if (v.holds()) {
        EXPECT_EQ(r.violations, 0u) << "trial " << trial;
      } else if (v.fails()) {
        ASSERT_TRUE(v.witness.has_value());
        EXPECT_EQ(classify_point(e, mm * *v.witness).location,
                  Location::Outside)
            << "trial " << trial;
      }
    }
  }
}

TEST(Empirical, Example3) {
  const auto r = oracle::empirical_threshold(
      euler(example3_matrix(), Method::BackwardEuler), example3_cone(), 10000,
      1.0, 5);
  EXPECT_EQ(r.kind, ThresholdKind::Empirical);
  EXPECT_GE(r.value, 0.2499);
  EXPECT_LE(r.value, 0.2501);
  EXPECT_TRUE(has_tag(r, "homogeneity-reduced-to-base"));
  EXPECT_EQ(r.diagnostics.at("samples"), 10000.0);
  EXPECT_EQ(r.diagnostics.at("homogeneous_degree"), 1.0);
}

TEST(Empirical, Example2) {
  const auto r = oracle::empirical_threshold(
      euler(example2_matrix(), Method::BackwardEuler), example2_cone(), 10000,
      2.0, 5);
  EXPECT_GE(r.value, 0.999);
  EXPECT_LE(r.value, 1.0);
}

TEST(Empirical, Example1Unbounded) {
  const auto r = oracle::empirical_threshold(
      euler(example1_matrix(), Method::BackwardEuler), kDisk, 10000, 1000.0,
      5);
  EXPECT_EQ(r.value, 1000.0);
  EXPECT_TRUE(has_tag(r, "unbounded-within-search"));
  // Linear maps are Lipschitz by construction.
  EXPECT_FALSE(has_tag(r, "no-lipschitz-declared"));
}

TEST(Empirical, UndeclaredNonlinearMapIsFlagged) {
  const StepMap f = StepMap::general(
      [](double dt, const Vector& x) -> Vector {
        return x / (1.0 + dt * x.squaredNorm());
      },
      {}, "radial");
  const auto r = oracle::empirical_threshold(f, kDisk, 1000, 10.0, 5);
  EXPECT_TRUE(has_tag(r, "no-lipschitz-declared"));
  EXPECT_TRUE(has_tag(r, "unbounded-within-search"));
}

TEST(Empirical, ConeNeedsHomogeneity) {
  const StepMap f = StepMap::general(
      [](double, const Vector& x) -> Vector { return x; }, {}, "opaque");
  try {
    oracle::empirical_threshold(f, example3_cone(), 100, 1.0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(Empirical, HomogeneityReductionMatchesFullCone) {
  const StepMap f = euler(example3_matrix(), Method::BackwardEuler);
  oracle::EmpiricalOptions base;
  oracle::EmpiricalOptions full;
  full.cone_on_base = false;
  const double vb =
      oracle::empirical_threshold(f, example3_cone(), 4000, 1.0, 9, base).value;
  const double vf =
      oracle::empirical_threshold(f, example3_cone(), 4000, 1.0, 9, full).value;
  EXPECT_NEAR(vb, vf, 1e-3);
}

TEST(SingularityScan, Example3Hits) {
  const auto hits = oracle::singularity_scan(example3_matrix(), 1.0, 100000);
  ASSERT_EQ(hits.size(), 2u);
  const double h = 1.0 / 99999;
  EXPECT_LE(hits[0].lo, 0.25 + h);
  EXPECT_GE(hits[0].hi, 0.25 - h);
  EXPECT_LE(hits[1].lo, 0.5 + h);
  EXPECT_GE(hits[1].hi, 0.5 - h);
}

TEST(SingularityScan, NoHits) {
  EXPECT_TRUE(oracle::singularity_scan(example1_matrix(), 10.0, 10000).empty());
  EXPECT_TRUE(
      oracle::singularity_scan(Matrix::Zero(3, 3), 10.0, 10000).empty());
}

TEST(SingularityScan, RejectsTinyGrid) {
  EXPECT_THROW(oracle::singularity_scan(example3_matrix(), 1.0, 1), Error);
}

TEST(Lipschitz, Identity) {
  const StepMap id = StepMap::linear(
      [](double) -> Matrix { return Matrix::Identity(2, 2); }, "id");
  const auto l = oracle::lipschitz_estimate(id, kDisk, 0.1, 10000, 3);
  EXPECT_GE(l.value, 0.99);
  EXPECT_LE(l.value, 1.0 + 1e-12);
  EXPECT_EQ(l.pairs, 10000u);
}

TEST(Lipschitz, ConstantMap) {
  const StepMap c = StepMap::general(
      [](double, const Vector& x) -> Vector { return Vector::Ones(x.size()); },
      {}, "const");
  EXPECT_EQ(oracle::lipschitz_estimate(c, kDisk, 0.1, 1000, 3).value, 0.0);
}

TEST(Lipschitz, LinearMapBoundedByOperatorNorm) {
  Gen g(77);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix m = g.gaussian(3, 3);
    const StepMap f =
        StepMap::linear([m](double) -> Matrix { return m; }, "m");
    const double norm = spectral_norm(m);
    const auto l = oracle::lipschitz_estimate(f, Ellipsoid{Matrix::Identity(3, 3)},
                                              0.1, 10000, trial);
    EXPECT_LE(l.value, norm * (1 + 1e-12)) << "trial " << trial;
    EXPECT_GE(l.value, 0.9 * norm) << "trial " << trial;
  }
}

TEST(Declarations, HonestMapPasses) {
  const auto d = oracle::check_declarations(
      euler(example3_matrix(), Method::BackwardEuler), example3_cone(), 0.1,
      500, 2);
  EXPECT_TRUE(d.ok());
  EXPECT_LT(d.linear_residual, 1e-12);
}

TEST(Declarations, CatchesFalseClaims) {
  StepMap::Attributes attrs;
  attrs.linear = true;
  attrs.homogeneous_degree = 1.0;
  attrs.lipschitz = 0.5;
  // Squaring map: neither linear, 1-homogeneous nor 0.5-Lipschitz on the disk.
  const StepMap f = StepMap::general(
      [](double, const Vector& x) -> Vector { return x.cwiseProduct(x); },
      attrs, "square");
  const auto d = oracle::check_declarations(f, kDisk, 0.1, 500, 2);
  EXPECT_FALSE(d.ok());
  EXPECT_FALSE(d.linear_ok);
  EXPECT_FALSE(d.homogeneity_ok);
  EXPECT_FALSE(d.lipschitz_ok);
  EXPECT_GT(d.lipschitz_observed, 0.5);
}

TEST(Declarations, FalseNormBound) {
  const StepMap f = StepMap::linear(
      [](double) -> Matrix { return 3.0 * Matrix::Identity(2, 2); }, "3I", 2.0);
  const auto d = oracle::check_declarations(f, kDisk, 0.1, 500, 2);
  EXPECT_FALSE(d.norm_bound_ok);
  EXPECT_NEAR(d.norm_ratio_observed, 3.0, 1e-12);
}
