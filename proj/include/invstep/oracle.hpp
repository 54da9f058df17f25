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

#ifndef INVSTEP_ORACLE_HPP
#define INVSTEP_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "invstep/dynsys.hpp"
#include "invstep/sets.hpp"
#include "invstep/thresholds.hpp"

// Brute-force checks that share no code path with the exact tests in
// invariance/thresholds beyond membership and sampling.
namespace invstep::oracle {

struct SampleWitness {
  Vector x;
  Vector image;
  double image_margin = 0.0;
};

struct SampleReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::vector<SampleWitness> witnesses;  // worst first, at most max_witnesses
  double max_excursion = 0.0;            // largest -margin among violations
  double min_image_margin = 0.0;
  std::uint64_t seed = 0;
};

struct SampleVerifyOptions {
  double tol = kMembershipTol;
  std::size_t max_witnesses = 16;
  SampleOptions sampling;
};

/// Applies the map to n sampled points (half interior, half boundary) and
/// counts images that classify Outside.
SampleReport sample_verify(const StepMap& map, double dt, const SetSpec& s,
                           std::size_t n, std::uint64_t seed,
                           const SampleVerifyOptions& opts = {});

struct EmpiricalOptions {
  double tol = kMembershipTol;
  double tol_dt = 1e-6;
  // Cones only: sample the base slice, which is enough for homogeneous maps.
  bool cone_on_base = true;
};

/// Bisection on dt of "sample_verify finds no violation". An estimate, not a
/// certificate. Cones require a map that declares homogeneity.
ThresholdReport empirical_threshold(const StepMap& map, const SetSpec& s,
                                    std::size_t n, double dt_hi,
                                    std::uint64_t seed,
                                    const EmpiricalOptions& opts = {});

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Grid points of [0, dt_hi] where det(I - dt A) vanishes (relative to
/// (1 + dt|A|)^n) or changes sign between neighbours, merged into intervals.
std::vector<Interval> singularity_scan(const Matrix& a, double dt_hi,
                                       std::size_t grid, double tol = 1e-9);

struct LipschitzEstimate {
  double value = 0.0;  // a lower bound on the true constant
  std::size_t pairs = 0;
};

/// Largest difference quotient |D(x) - D(y)| / |x - y| over sampled pairs.
/// Cones are sampled on their base.
LipschitzEstimate lipschitz_estimate(const StepMap& map, const SetSpec& s,
                                     double dt, std::size_t n_pairs,
                                     std::uint64_t seed);

struct DeclarationReport {
  bool linear_ok = true;
  bool homogeneity_ok = true;
  bool lipschitz_ok = true;
  bool norm_bound_ok = true;
  double linear_residual = 0.0;
  double homogeneity_residual = 0.0;
  double lipschitz_observed = 0.0;
  double norm_ratio_observed = 0.0;

  bool ok() const {
    return linear_ok && homogeneity_ok && lipschitz_ok && norm_bound_ok;
  }
};

/// Spot-checks the attributes a StepMap declares. Undeclared attributes are
/// reported as ok.
DeclarationReport check_declarations(const StepMap& map, const SetSpec& s,
                                     double dt, std::size_t n,
                                     std::uint64_t seed, double rel_tol = 1e-8);

}  // namespace invstep::oracle

#endif  // INVSTEP_ORACLE_HPP
