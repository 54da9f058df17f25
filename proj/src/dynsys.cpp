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

#include "invstep/dynsys.hpp"

#include <cmath>
#include <utility>

#include "invstep/membership.hpp"

namespace invstep {

namespace {

void require_step(double dt) {
  if (!std::isfinite(dt) || dt < 0.0) {
    throw Error(ErrorKind::InvalidArgument,
                "steplength must be finite and nonnegative");
  }
}

void require_state(const LinearSystem& sys, const Vector& x) {
  if (x.size() != sys.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "state of dimension " + std::to_string(x.size()) +
                    " for system of dimension " + std::to_string(sys.dim()));
  }
}

}  // namespace

LinearSystem::LinearSystem(Matrix a) : A(std::move(a)) {
  require_square(A, "A");
  require_finite(A, "A");
}

std::string_view to_string(Method m) {
  return m == Method::ForwardEuler ? "forward-euler" : "backward-euler";
}

Matrix step_matrix(const LinearSystem& sys, Method m, double dt) {
  require_step(dt);
  const Eigen::Index n = sys.A.rows();
  const Matrix id = Matrix::Identity(n, n);
  if (m == Method::ForwardEuler) return id + dt * sys.A;
  if (shift_is_singular(sys.A, dt)) {
    throw Error(ErrorKind::SingularShift,
                "I - dt*A is singular at dt=" + std::to_string(dt));
  }
  return Eigen::FullPivLU<Matrix>(id - dt * sys.A).inverse();
}

Vector forward_step(const LinearSystem& sys, double dt, const Vector& x) {
  require_step(dt);
  require_state(sys, x);
  return x + dt * (sys.A * x);
}

Vector backward_step(const LinearSystem& sys, double dt, const Vector& x) {
  require_step(dt);
  require_state(sys, x);
  return solve_shifted(sys.A, dt, x);
}

Vector exact_flow(const LinearSystem& sys, double t, const Vector& x) {
  require_step(t);
  require_state(sys, x);
  return mat_exp(sys.A, t) * x;
}

StepMap::StepMap(Eval eval, MatrixFn matrix, Attributes attrs, std::string name)
    : eval_(std::move(eval)), matrix_(std::move(matrix)),
      attrs_(std::move(attrs)), name_(std::move(name)) {}

StepMap StepMap::euler(const LinearSystem& sys, Method m) {
  Attributes attrs;
  attrs.linear = true;
  attrs.homogeneous_degree = 1.0;
  MatrixFn mat = [sys, m](double dt) { return step_matrix(sys, m, dt); };
  Eval eval;
  if (m == Method::ForwardEuler) {
    eval = [sys](double dt, const Vector& x) { return forward_step(sys, dt, x); };
  } else {
    eval = [sys](double dt, const Vector& x) {
      return backward_step(sys, dt, x);
    };
  }
  return StepMap(std::move(eval), std::move(mat), attrs,
                 std::string(to_string(m)));
}

StepMap StepMap::linear(MatrixFn matrix, std::string name,
                        std::optional<double> norm_bound) {
  Attributes attrs;
  attrs.linear = true;
  attrs.homogeneous_degree = 1.0;
  attrs.operator_norm_bound = norm_bound;
  Eval eval = [matrix](double dt, const Vector& x) -> Vector {
    return matrix(dt) * x;
  };
  return StepMap(std::move(eval), std::move(matrix), attrs, std::move(name));
}

StepMap StepMap::general(Eval eval, Attributes attrs, std::string name) {
  return StepMap(std::move(eval), nullptr, std::move(attrs), std::move(name));
}

Vector StepMap::operator()(double dt, const Vector& x) const {
  return eval_(dt, x);
}

Matrix StepMap::matrix(double dt) const {
  if (!matrix_) {
    throw Error(ErrorKind::InvalidArgument,
                "step map '" + name_ + "' has no matrix form");
  }
  return matrix_(dt);
}

Trajectory simulate(const StepMap& map, double dt, const Vector& x0,
                    std::size_t steps, const std::optional<SetSpec>& guard,
                    double tol) {
  require_step(dt);
  Trajectory traj;
  traj.states.reserve(steps + 1);
  traj.states.push_back(x0);
  std::optional<MembershipTester> tester;
  if (guard) tester.emplace(*guard, tol);
  auto record = [&](std::size_t k) {
    if (!tester) return;
    const Classification c = (*tester)(traj.states[k]);
    traj.margins.push_back(c.margin);
    if (c.location == Location::Outside && !traj.first_exit) {
      traj.first_exit = k;
    }
  };
  record(0);
  std::optional<Matrix> m;
  if (map.has_matrix()) m = map.matrix(dt);
  for (std::size_t k = 1; k <= steps; ++k) {
    const Vector& prev = traj.states.back();
    traj.states.push_back(m ? Vector(*m * prev) : map(dt, prev));
    record(k);
  }
  return traj;
}

}  // namespace invstep
