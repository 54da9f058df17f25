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

#ifndef INVSTEP_DYNSYS_HPP
#define INVSTEP_DYNSYS_HPP

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "invstep/numkernel.hpp"
#include "invstep/sets.hpp"

namespace invstep {

/// x' = A x
struct LinearSystem {
  Matrix A;

  explicit LinearSystem(Matrix a);
  int dim() const { return static_cast<int>(A.rows()); }
};

enum class Method { ForwardEuler, BackwardEuler };

std::string_view to_string(Method m);

/// I + dt A (forward) or (I - dt A)^{-1} (backward).
Matrix step_matrix(const LinearSystem& sys, Method m, double dt);

Vector forward_step(const LinearSystem& sys, double dt, const Vector& x);
Vector backward_step(const LinearSystem& sys, double dt, const Vector& x);
Vector exact_flow(const LinearSystem& sys, double t, const Vector& x);

/// A discretization x_{k+1} = D(dt, x_k). Attributes are declared by the
/// constructor, not inferred; oracle::check_declarations() spot-checks them.
class StepMap {
 public:
  using Eval = std::function<Vector(double, const Vector&)>;
  using MatrixFn = std::function<Matrix(double)>;

  struct Attributes {
    bool linear = false;
    std::optional<double> homogeneous_degree;
    std::optional<double> lipschitz;
    std::optional<double> operator_norm_bound;
  };

  /// Forward or backward Euler for a linear system.
  static StepMap euler(const LinearSystem& sys, Method m);

  /// A linear map given by its step matrix D(dt).
  static StepMap linear(MatrixFn matrix, std::string name,
                        std::optional<double> norm_bound = std::nullopt);

  /// An arbitrary (possibly nonlinear) map with declared attributes.
  static StepMap general(Eval eval, Attributes attrs, std::string name);

  Vector operator()(double dt, const Vector& x) const;

  /// The step matrix of a linear map; throws InvalidArgument otherwise.
  Matrix matrix(double dt) const;

  const Attributes& attributes() const { return attrs_; }
  const std::string& name() const { return name_; }
  bool has_matrix() const { return static_cast<bool>(matrix_); }

 private:
  StepMap(Eval eval, MatrixFn matrix, Attributes attrs, std::string name);

  Eval eval_;
  MatrixFn matrix_;
  Attributes attrs_;
  std::string name_;
};

struct Trajectory {
  std::vector<Vector> states;
  std::vector<double> margins;  // one per state when a guard is given
  std::optional<std::size_t> first_exit;
};

/// Runs `steps` steps from x0. With a guard set, records membership margins
/// and the first index whose state lies Outside.
Trajectory simulate(const StepMap& map, double dt, const Vector& x0,
                    std::size_t steps,
                    const std::optional<SetSpec>& guard = std::nullopt,
                    double tol = kMembershipTol);

}  // namespace invstep

#endif  // INVSTEP_DYNSYS_HPP
