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

#include "invstep/linprog.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace invstep::lp {

namespace {

constexpr double kPivotEps = 1e-11;

class Tableau {
 public:
  Tableau(Matrix rows, Vector rhs, std::vector<int> basis, int n_artificial)
      : t_(std::move(rows)), rhs_(std::move(rhs)), basis_(std::move(basis)),
        n_art_(n_artificial) {}

  Eigen::Index n_cols() const { return t_.cols(); }
  Eigen::Index n_rows() const { return t_.rows(); }
  Eigen::Index first_artificial() const { return t_.cols() - n_art_; }

  // Minimizes cost'x over the current canonical form. Columns at or beyond
  // `col_limit` may not enter. Returns false when unbounded.
  bool minimize(const Vector& cost, Eigen::Index col_limit) {
    const int max_iter = 50 * static_cast<int>(t_.rows() + t_.cols()) + 1000;
    for (int iter = 0; iter < max_iter; ++iter) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < col_limit; ++j) {
        double reduced = cost(j);
        for (Eigen::Index i = 0; i < t_.rows(); ++i) {
          reduced -= cost(basis_[i]) * t_(i, j);
        }
        if (reduced < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < t_.rows(); ++i) {
        if (t_(i, enter) > kPivotEps) {
          const double ratio = rhs_(i) / t_(i, enter);
          if (ratio < best - 1e-14 ||
              (std::abs(ratio - best) <= 1e-14 && leave >= 0 &&
               basis_[i] < basis_[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw Error(ErrorKind::NoConvergence, "simplex iteration limit reached");
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    const double p = t_(row, col);
    t_.row(row) /= p;
    rhs_(row) /= p;
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) {
        t_.row(i) -= f * t_.row(row);
        rhs_(i) -= f * rhs_(row);
      }
    }
    basis_[row] = static_cast<int>(col);
  }

  // Pivots artificial variables out of the basis where possible.
  void expel_artificials() {
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (basis_[i] < first_artificial()) continue;
      for (Eigen::Index j = 0; j < first_artificial(); ++j) {
        if (std::abs(t_(i, j)) > 1e-9) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  Vector solution() const {
    Vector x = Vector::Zero(t_.cols());
    for (Eigen::Index i = 0; i < t_.rows(); ++i) x(basis_[i]) = rhs_(i);
    return x;
  }

 private:
  Matrix t_;
  Vector rhs_;
  std::vector<int> basis_;
  int n_art_;
};

}  // namespace

Result maximize(const Vector& c, const Matrix& a_ub, const Vector& b_ub,
                const Matrix& a_eq, const Vector& b_eq) {
  const Eigen::Index n = c.size();
  const Eigen::Index m_ub = a_ub.rows();
  const Eigen::Index m_eq = a_eq.rows();
  if ((m_ub > 0 && a_ub.cols() != n) || (m_eq > 0 && a_eq.cols() != n) ||
      b_ub.size() != m_ub || b_eq.size() != m_eq) {
    throw Error(ErrorKind::DimensionMismatch, "linear program shape mismatch");
  }
  const Eigen::Index m = m_ub + m_eq;

  // One artificial per row that lacks a nonnegative slack to start from.
  int n_art = 0;
  for (Eigen::Index i = 0; i < m_ub; ++i) {
    if (b_ub(i) < 0) ++n_art;
  }
  n_art += static_cast<int>(m_eq);
  const Eigen::Index cols = n + m_ub + n_art;

  Matrix rows = Matrix::Zero(m, cols);
  Vector rhs(m);
  std::vector<int> basis(static_cast<size_t>(m));
  Eigen::Index art = n + m_ub;
  for (Eigen::Index i = 0; i < m_ub; ++i) {
    const double sign = b_ub(i) < 0 ? -1.0 : 1.0;
    rows.block(i, 0, 1, n) = sign * a_ub.row(i);
    rows(i, n + i) = sign;
    rhs(i) = sign * b_ub(i);
    if (sign > 0) {
      basis[i] = static_cast<int>(n + i);
    } else {
      rows(i, art) = 1.0;
      basis[i] = static_cast<int>(art++);
    }
  }
  for (Eigen::Index k = 0; k < m_eq; ++k) {
    const Eigen::Index i = m_ub + k;
    const double sign = b_eq(k) < 0 ? -1.0 : 1.0;
    rows.block(i, 0, 1, n) = sign * a_eq.row(k);
    rhs(i) = sign * b_eq(k);
    rows(i, art) = 1.0;
    basis[i] = static_cast<int>(art++);
  }

  Tableau tab(std::move(rows), std::move(rhs), std::move(basis), n_art);
  Result result;
  if (n_art > 0) {
    Vector phase1 = Vector::Zero(cols);
    phase1.tail(n_art).setOnes();
    tab.minimize(phase1, cols);
    const double infeas = tab.solution().tail(n_art).sum();
    double scale = 1.0;
    if (m_ub > 0) scale = std::max(scale, b_ub.cwiseAbs().maxCoeff());
    if (m_eq > 0) scale = std::max(scale, b_eq.cwiseAbs().maxCoeff());
    if (infeas > 1e-9 * scale) {
      result.status = Status::Infeasible;
      return result;
    }
    tab.expel_artificials();
  }
  Vector phase2 = Vector::Zero(cols);
  phase2.head(n) = -c;
  if (!tab.minimize(phase2, tab.first_artificial())) {
    result.status = Status::Unbounded;
    return result;
  }
  result.status = Status::Optimal;
  result.x = tab.solution().head(n);
  result.objective = c.dot(result.x);
  return result;
}

Result maximize_free(const Vector& c, const Matrix& a_ub, const Vector& b_ub,
                     const Matrix& a_eq, const Vector& b_eq) {
  const Eigen::Index n = c.size();
  Vector c2(2 * n);
  c2 << c, -c;
  Matrix ub2(a_ub.rows(), 2 * n);
  if (a_ub.rows() > 0) ub2 << a_ub, -a_ub;
  Matrix eq2(a_eq.rows(), 2 * n);
  if (a_eq.rows() > 0) eq2 << a_eq, -a_eq;
  Result r = maximize(c2, ub2, b_ub, eq2, b_eq);
  if (r.status == Status::Optimal) {
    r.x = (r.x.head(n) - r.x.tail(n)).eval();
  }
  return r;
}

}  // namespace invstep::lp
