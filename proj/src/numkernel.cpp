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

#include "invstep/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace invstep {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::SingularShift: return "SingularShift";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InconsistentPair: return "InconsistentPair";
    case ErrorKind::DegenerateCone: return "DegenerateCone";
    case ErrorKind::SamplingExhausted: return "SamplingExhausted";
    case ErrorKind::NotInSet: return "NotInSet";
    case ErrorKind::BranchPreconditionFailed: return "BranchPreconditionFailed";
    case ErrorKind::NotFlowInvariant: return "NotFlowInvariant";
    case ErrorKind::PredicateFalseAtZero: return "PredicateFalseAtZero";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

std::string_view to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PD: return "PD";
    case Definiteness::PSD: return "PSD";
    case Definiteness::NSD: return "NSD";
    case Definiteness::ND: return "ND";
    case Definiteness::Indefinite: return "Indefinite";
  }
  return "Unknown";
}

namespace {

// Reciprocal condition estimate below which I - dt A counts as singular.
constexpr double kSingularRcond = 1e-14;

Matrix symmetrized(const Matrix& s, double tol) {
  require_square(s, "symmetric matrix");
  require_finite(s, "symmetric matrix");
  if (!is_symmetric(s, tol)) {
    throw Error(ErrorKind::NotSymmetric,
                "asymmetry exceeds tolerance " + std::to_string(tol));
  }
  return 0.5 * (s + s.transpose());
}

}  // namespace

void require_finite(const Matrix& m, const char* what) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " is empty");
  }
  if (!m.allFinite()) {
    throw Error(ErrorKind::InvalidArgument,
                std::string(what) + " has non-finite entries");
  }
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " must be square, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

bool is_symmetric(const Matrix& s, double tol) {
  if (s.rows() != s.cols()) return false;
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  return (s - s.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

SymmetricEigen sym_eigen(const Matrix& s, double tol) {
  const Matrix sym = symmetrized(s, tol);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "symmetric eigensolver failed");
  }
  // Eigen returns ascending order.
  SymmetricEigen out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

Spectrum general_spectrum(const Matrix& a) {
  require_square(a, "A");
  require_finite(a, "A");
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "general eigensolver failed");
  }
  Spectrum out;
  const auto& ev = solver.eigenvalues();
  out.values.assign(ev.data(), ev.data() + ev.size());
  return out;
}

DefinitenessReport definiteness(const Matrix& s, double tol) {
  const SymmetricEigen eig = sym_eigen(s, tol);
  DefinitenessReport r;
  r.lambda_max = eig.values(0);
  r.lambda_min = eig.values(eig.values.size() - 1);
  const double norm = std::max(std::abs(r.lambda_max), std::abs(r.lambda_min));
  r.zero_band = tol * std::max(1.0, norm);
  if (r.is_pd()) {
    r.cls = Definiteness::PD;
    r.critical_eigenvalue = r.lambda_min;
  } else if (r.is_nd()) {
    r.cls = Definiteness::ND;
    r.critical_eigenvalue = r.lambda_max;
  } else if (r.is_psd()) {
    r.cls = Definiteness::PSD;
    r.critical_eigenvalue = r.lambda_min;
  } else if (r.is_nsd()) {
    r.cls = Definiteness::NSD;
    r.critical_eigenvalue = r.lambda_max;
  } else {
    r.cls = Definiteness::Indefinite;
    r.critical_eigenvalue =
        std::abs(r.lambda_max) < std::abs(r.lambda_min) ? r.lambda_max
                                                         : r.lambda_min;
  }
  return r;
}

Inertia inertia_of(const Matrix& s, double tol) {
  const SymmetricEigen eig = sym_eigen(s, tol);
  const double band = tol * std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  Inertia in;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double v = eig.values(i);
    if (v > band) {
      ++in.n_plus;
    } else if (v < -band) {
      ++in.n_minus;
    } else {
      ++in.n_zero;
    }
  }
  return in;
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

Matrix mat_exp(const Matrix& a, double t) {
  require_square(a, "A");
  require_finite(a, "A");
  if (!std::isfinite(t)) {
    throw Error(ErrorKind::InvalidArgument, "time must be finite");
  }
  const Matrix scaled = a * t;
  Matrix result = scaled.exp();
  if (!result.allFinite()) {
    throw Error(ErrorKind::Overflow, "matrix exponential overflowed");
  }
  return result;
}

namespace {

Eigen::FullPivLU<Matrix> shifted_lu(const Matrix& a, double dt) {
  const Eigen::Index n = a.rows();
  return Eigen::FullPivLU<Matrix>(Matrix::Identity(n, n) - dt * a);
}

bool lu_is_singular(const Eigen::FullPivLU<Matrix>& lu) {
  return !lu.isInvertible() || !(lu.rcond() > kSingularRcond);
}

}  // namespace

bool shift_is_singular(const Matrix& a, double dt) {
  require_square(a, "A");
  return lu_is_singular(shifted_lu(a, dt));
}

Vector solve_shifted(const Matrix& a, double dt, const Vector& x) {
  require_square(a, "A");
  if (x.size() != a.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "vector of size " + std::to_string(x.size()) +
                    " for system of dimension " + std::to_string(a.rows()));
  }
  const auto lu = shifted_lu(a, dt);
  if (lu_is_singular(lu)) {
    throw Error(ErrorKind::SingularShift,
                "I - dt*A is singular at dt=" + std::to_string(dt));
  }
  return lu.solve(x);
}

double shifted_determinant(const Matrix& a, double dt) {
  require_square(a, "A");
  const Eigen::Index n = a.rows();
  return Eigen::PartialPivLU<Matrix>(Matrix::Identity(n, n) - dt * a)
      .determinant();
}

}  // namespace invstep
