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

#ifndef INVSTEP_NUMKERNEL_HPP
#define INVSTEP_NUMKERNEL_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "invstep/error.hpp"

namespace invstep {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Relative width of the band around zero inside which an eigenvalue is
// treated as zero by definiteness() and inertia_of().
inline constexpr double kDefaultEigTol = 1e-9;

struct SymmetricEigen {
  Vector values;   // descending
  Matrix vectors;  // orthonormal columns, matching values
};

struct Spectrum {
  std::vector<std::complex<double>> values;
};

enum class Definiteness { PD, PSD, NSD, ND, Indefinite };

std::string_view to_string(Definiteness d);

// Outcome of a definiteness test. The zero matrix classifies as PSD but
// is_nsd() also holds; query the predicate you need rather than comparing
// the headline class.
struct DefinitenessReport {
  Definiteness cls = Definiteness::Indefinite;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double zero_band = 0.0;
  // Eigenvalue that sits closest to the edge of the zero band; callers
  // auditing borderline verdicts look here.
  double critical_eigenvalue = 0.0;

  bool is_pd() const { return lambda_min > zero_band; }
  bool is_psd() const { return lambda_min >= -zero_band; }
  bool is_nd() const { return lambda_max < -zero_band; }
  bool is_nsd() const { return lambda_max <= zero_band; }
};

struct Inertia {
  int n_plus = 0;
  int n_zero = 0;
  int n_minus = 0;

  friend bool operator==(const Inertia&, const Inertia&) = default;
};

void require_finite(const Matrix& m, const char* what);
void require_square(const Matrix& m, const char* what);
bool is_symmetric(const Matrix& s, double tol);

SymmetricEigen sym_eigen(const Matrix& s, double tol = kDefaultEigTol);
Spectrum general_spectrum(const Matrix& a);
DefinitenessReport definiteness(const Matrix& s, double tol = kDefaultEigTol);
Inertia inertia_of(const Matrix& s, double tol = kDefaultEigTol);

/// Largest singular value (operator 2-norm).
double spectral_norm(const Matrix& a);

/// e^{A t} by scaling and squaring around a diagonal Pade approximant.
Matrix mat_exp(const Matrix& a, double t);

/// Solves (I - dt A) y = x. Throws SingularShift when the shifted matrix is
/// numerically singular.
Vector solve_shifted(const Matrix& a, double dt, const Vector& x);

/// det(I - dt A) via a pivoted LU factorization; independent of any
/// eigenvalue computation.
double shifted_determinant(const Matrix& a, double dt);

/// Returns true when I - dt A is numerically singular.
bool shift_is_singular(const Matrix& a, double dt);

}  // namespace invstep

#endif  // INVSTEP_NUMKERNEL_HPP
