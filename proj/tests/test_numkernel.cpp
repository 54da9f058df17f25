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
#include "invstep/numkernel.hpp"

using namespace invstep;
using namespace invstep::testgen;

namespace {

// Plain Taylor series; only trusted for |A t| <= 1.
Matrix taylor_exp(const Matrix& a, double t) {
  const Eigen::Index n = a.rows();
  Matrix term = Matrix::Identity(n, n);
  Matrix sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * a * (t / k);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST(SymEigen, DescendingWithOrthonormalVectors) {
  Gen g(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = g.integer(1, 6);
    Matrix s = g.gaussian(n, n);
    s = (s + s.transpose()).eval();
    const SymmetricEigen e = sym_eigen(s);
    for (int i = 1; i < n; ++i) EXPECT_GE(e.values(i - 1), e.values(i));
    EXPECT_LT((e.vectors.transpose() * e.vectors -
               Matrix::Identity(n, n)).norm(), 1e-12);
    EXPECT_LT((s * e.vectors - e.vectors * e.values.asDiagonal()).norm(),
              1e-10 * (1 + s.norm()));
  }
}

TEST(SymEigen, RejectsAsymmetricInput) {
  try {
    sym_eigen(rows({{1, 2}, {0, 1}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotSymmetric);
  }
}

TEST(SymEigen, RejectsNonFinite) {
  Matrix s = Matrix::Identity(2, 2);
  s(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(sym_eigen(s), Error);
}

TEST(Definiteness, Classes) {
  EXPECT_TRUE(definiteness(diag({1, 2})).is_pd());
  EXPECT_EQ(definiteness(diag({1, 2})).cls, Definiteness::PD);
  EXPECT_EQ(definiteness(diag({0, 2})).cls, Definiteness::PSD);
  EXPECT_EQ(definiteness(diag({0, -2})).cls, Definiteness::NSD);
  EXPECT_EQ(definiteness(diag({-1, -2})).cls, Definiteness::ND);
  EXPECT_EQ(definiteness(diag({1, -2})).cls, Definiteness::Indefinite);
}

TEST(Definiteness, ZeroMatrixIsBothSemidefinite) {
  const DefinitenessReport d = definiteness(Matrix::Zero(3, 3));
  EXPECT_TRUE(d.is_psd());
  EXPECT_TRUE(d.is_nsd());
  EXPECT_FALSE(d.is_pd());
}

TEST(Definiteness, BandIsRelative) {
  // 1e-12 against a scale of 1e4 is numerically zero.
  const DefinitenessReport d = definiteness(diag({1e4, 1e-12}));
  EXPECT_FALSE(d.is_pd());
  EXPECT_TRUE(d.is_psd());
  EXPECT_DOUBLE_EQ(d.zero_band, 1e-9 * 1e4);
}

TEST(Inertia, Counts) {
  EXPECT_EQ(inertia_of(diag({1, 1, -1})), (Inertia{2, 0, 1}));
  EXPECT_EQ(inertia_of(diag({1, 0, -1})), (Inertia{1, 1, 1}));
}

TEST(Inertia, SylvesterLawUnderCongruence) {
  Gen g(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix s = diag({3, 1, 0, -2});
    Matrix t = g.gaussian(4, 4);
    while (std::abs(t.determinant()) < 1e-3) t = g.gaussian(4, 4);
    const Matrix c = t.transpose() * s * t;
    EXPECT_EQ(inertia_of(0.5 * (c + c.transpose()), 1e-8),
              (Inertia{2, 1, 1}));
  }
}

TEST(SpectralNorm, MatchesGramEigenvalue) {
  Gen g(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = g.gaussian(g.integer(1, 5), g.integer(1, 5));
    const Matrix gram = a.transpose() * a;
    const double oracle =
        std::sqrt(Eigen::SelfAdjointEigenSolver<Matrix>(gram)
                      .eigenvalues().maxCoeff());
    EXPECT_NEAR(spectral_norm(a), oracle, 1e-10 * (1 + oracle));
  }
  EXPECT_EQ(spectral_norm(Matrix::Zero(2, 2)), 0.0);
}

TEST(GeneralSpectrum, RotationHasImaginaryPair) {
  const Spectrum sp = general_spectrum(example1_matrix());
  ASSERT_EQ(sp.values.size(), 2u);
  for (const auto& z : sp.values) {
    EXPECT_NEAR(z.real(), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(z.imag()), 1.0, 1e-14);
  }
}

TEST(MatExp, RotationClosedForm) {
  for (double t : {0.0, 0.3, 1.0, 5.0, 40.0}) {
    const Matrix e = mat_exp(example1_matrix(), t);
    EXPECT_NEAR(e(0, 0), std::cos(t), 1e-12);
    EXPECT_NEAR(e(1, 0), std::sin(t), 1e-12);
    EXPECT_NEAR(e(0, 1), -std::sin(t), 1e-12);
  }
}

TEST(MatExp, AgreesWithTaylorOracle) {
  Gen g(9);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = g.integer(1, 6);
    Matrix a = g.gaussian(n, n);
    a /= spectral_norm(a);
    const double t = g.uniform(0.0, 1.0);
    EXPECT_LT((mat_exp(a, t) - taylor_exp(a, t)).norm(), 1e-13);
  }
}

TEST(MatExp, SemigroupProperty) {
  Gen g(10);
  const Matrix a = g.gaussian(4, 4);
  const Matrix lhs = mat_exp(a, 0.7) * mat_exp(a, 1.1);
  const Matrix rhs = mat_exp(a, 1.8);
  EXPECT_LT((lhs - rhs).norm(), 1e-10 * rhs.norm());
}

TEST(MatExp, OverflowIsReported) {
  try {
    mat_exp(Matrix::Identity(2, 2) * 1000.0, 1000.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Overflow);
  }
}

TEST(SolveShifted, ResidualIsSmall) {
  Gen g(12);
  const Matrix a = g.gaussian(5, 5);
  const Vector x = g.gaussian(5);
  const double dt = 0.01;
  const Vector y = solve_shifted(a, dt, x);
  EXPECT_LT(((Matrix::Identity(5, 5) - dt * a) * y - x).norm(), 1e-12);
}

TEST(SolveShifted, SingularAtReciprocalEigenvalue) {
  // Eigenvalues 2 and 4.
  try {
    solve_shifted(example3_matrix(), 0.25, vec({1, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularShift);
  }
  EXPECT_TRUE(shift_is_singular(example3_matrix(), 0.5));
  EXPECT_FALSE(shift_is_singular(example3_matrix(), 0.3));
}

TEST(ShiftedDeterminant, TwoByTwoClosedForm) {
  Gen g(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = g.gaussian(2, 2);
    const double dt = g.uniform(0, 3);
    const double oracle = 1 - dt * a.trace() + dt * dt * a.determinant();
    EXPECT_NEAR(shifted_determinant(a, dt), oracle, 1e-12 * (1 + dt * dt));
  }
}

TEST(IsSymmetric, RelativeTolerance) {
  Matrix s = rows({{1e6, 1}, {1 + 1e-6, 1}});
  EXPECT_TRUE(is_symmetric(s, 1e-9));
  EXPECT_FALSE(is_symmetric(rows({{1, 1}, {1.1, 1}}), 1e-9));
}

TEST(RequireSquare, ThrowsDimensionMismatch) {
  try {
    require_square(Matrix(2, 3), "A");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}
