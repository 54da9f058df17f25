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

#include "invstep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "invstep/membership.hpp"

namespace invstep::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<SampledPoint> draw(const SetSpec& s, std::size_t n,
                               std::uint64_t seed, double tol,
                               const SampleOptions& opts) {
  const std::size_t n_bd = n / 2;
  return sample_points(s, n - n_bd, n_bd, seed, tol, opts);
}

SampleReport evaluate(const StepMap& map, double dt,
                      const std::vector<SampledPoint>& pts,
                      const MembershipTester& tester, std::size_t max_wit) {
  SampleReport r;
  r.samples = pts.size();
  r.min_image_margin = kInf;
  std::optional<Matrix> m;
  if (map.has_matrix()) m = map.matrix(dt);
  for (const auto& p : pts) {
    Vector y = m ? Vector(*m * p.x) : map(dt, p.x);
    const Classification c = tester(y);
    r.min_image_margin = std::min(r.min_image_margin, c.margin);
    if (c.location != Location::Outside) continue;
    ++r.violations;
    r.max_excursion = std::max(r.max_excursion, -c.margin);
    r.witnesses.push_back({p.x, std::move(y), c.margin});
  }
  std::sort(r.witnesses.begin(), r.witnesses.end(),
            [](const SampleWitness& a, const SampleWitness& b) {
              return a.image_margin < b.image_margin;
            });
  if (r.witnesses.size() > max_wit) r.witnesses.resize(max_wit);
  return r;
}

}  // namespace

SampleReport sample_verify(const StepMap& map, double dt, const SetSpec& s,
                           std::size_t n, std::uint64_t seed,
                           const SampleVerifyOptions& opts) {
  const auto pts = draw(s, n, seed, opts.tol, opts.sampling);
  const MembershipTester tester(s, opts.tol);
  SampleReport r = evaluate(map, dt, pts, tester, opts.max_witnesses);
  r.seed = seed;
  return r;
}

ThresholdReport empirical_threshold(const StepMap& map, const SetSpec& s,
                                    std::size_t n, double dt_hi,
                                    std::uint64_t seed,
                                    const EmpiricalOptions& opts) {
  if (!(dt_hi > 0.0) || !std::isfinite(dt_hi)) {
    throw Error(ErrorKind::InvalidArgument, "dt_hi must be positive");
  }
  const auto& attrs = map.attributes();
  ThresholdReport r;
  r.kind = ThresholdKind::Empirical;
  r.inclusive = true;
  r.basis = "sampled estimate, not a certificate";
  r.diagnostics["samples"] = static_cast<double>(n);
  r.diagnostics["seed"] = static_cast<double>(seed);
  SampleOptions so;
  if (is_cone(s)) {
    if (!attrs.homogeneous_degree) {
      throw Error(ErrorKind::InvalidArgument,
                  "cone estimates need a map with declared homogeneity");
    }
    r.diagnostics["homogeneous_degree"] = *attrs.homogeneous_degree;
    if (opts.cone_on_base) {
      so.cone_on_base = true;
      r.tags.push_back("homogeneity-reduced-to-base");
    }
  } else {
    if (attrs.lipschitz) r.diagnostics["declared_lipschitz"] = *attrs.lipschitz;
    if (attrs.operator_norm_bound) {
      r.diagnostics["declared_norm_bound"] = *attrs.operator_norm_bound;
    }
    if (!attrs.lipschitz && !attrs.operator_norm_bound && !attrs.linear) {
      r.tags.push_back("no-lipschitz-declared");
    }
  }
  const auto pts = draw(s, n, seed, opts.tol, so);
  const MembershipTester tester(s, opts.tol);
  double last_margin = kInf;
  auto clean = [&](double dt) {
    try {
      const SampleReport rep = evaluate(map, dt, pts, tester, 0);
      if (rep.violations == 0) last_margin = rep.min_image_margin;
      return rep.violations == 0;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularShift) throw;
      return false;
    }
  };
  if (!clean(0.0)) {
    throw Error(ErrorKind::PredicateFalseAtZero,
                "sampled images leave the set at dt = 0");
  }
  double lo = 0.0, hi = dt_hi;
  if (clean(dt_hi)) {
    lo = dt_hi;
    r.tags.push_back("unbounded-within-search");
  } else {
    while (hi - lo > opts.tol_dt) {
      const double mid = 0.5 * (lo + hi);
      (clean(mid) ? lo : hi) = mid;
    }
  }
  r.value = lo;
  clean(lo);
  r.diagnostics["min_image_margin"] = last_margin;
  if (last_margin <= opts.tol) r.tags.push_back("grazing-images");
  return r;
}

std::vector<Interval> singularity_scan(const Matrix& a, double dt_hi,
                                       std::size_t grid, double tol) {
  if (grid < 2) throw Error(ErrorKind::InvalidArgument, "grid must be >= 2");
  if (!(dt_hi > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt_hi <= 0");
  require_square(a, "A");
  const double a_norm = spectral_norm(a);
  const double n = static_cast<double>(a.rows());
  std::vector<Interval> hits;
  auto add = [&](double lo, double hi) {
    if (!hits.empty() && lo <= hits.back().hi) {
      hits.back().hi = std::max(hits.back().hi, hi);
    } else {
      hits.push_back({lo, hi});
    }
  };
  double prev_dt = 0.0, prev_det = 1.0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double dt = dt_hi * static_cast<double>(i) / (grid - 1);
    const double det = shifted_determinant(a, dt);
    const double scale = std::pow(1.0 + dt * a_norm, n);
    if (std::abs(det) <= tol * scale) {
      add(dt, dt);
    } else if (i > 0 && (det > 0.0) != (prev_det > 0.0)) {
      add(prev_dt, dt);
    }
    prev_dt = dt;
    prev_det = det;
  }
  return hits;
}

LipschitzEstimate lipschitz_estimate(const StepMap& map, const SetSpec& s,
                                     double dt, std::size_t n_pairs,
                                     std::uint64_t seed) {
  SampleOptions so;
  so.cone_on_base = is_cone(s);
  const auto pts = draw(s, 2 * n_pairs, seed, kMembershipTol, so);
  // Pair interior points with boundary points so differences span the set.
  std::vector<const Vector*> xs;
  xs.reserve(pts.size());
  for (const auto& p : pts) xs.push_back(&p.x);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::shuffle(xs.begin(), xs.end(), rng);
  LipschitzEstimate est;
  for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
    const Vector d = *xs[i] - *xs[i + 1];
    const double dn = d.norm();
    if (dn == 0.0) continue;
    ++est.pairs;
    const double q = (map(dt, *xs[i]) - map(dt, *xs[i + 1])).norm() / dn;
    est.value = std::max(est.value, q);
  }
  return est;
}

DeclarationReport check_declarations(const StepMap& map, const SetSpec& s,
                                     double dt, std::size_t n,
                                     std::uint64_t seed, double rel_tol) {
  const auto& attrs = map.attributes();
  SampleOptions so;
  so.cone_on_base = is_cone(s);
  const auto pts = draw(s, std::max<std::size_t>(n, 2), seed, kMembershipTol, so);
  DeclarationReport r;
  std::mt19937_64 rng(seed + 1);
  std::uniform_real_distribution<double> coef(0.1, 3.0);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Vector& x = pts[i].x;
    const Vector& y = pts[i + 1].x;
    const Vector dx = map(dt, x);
    const double c = coef(rng);
    if (attrs.linear) {
      const Vector lhs = map(dt, Vector(c * x + y));
      const Vector rhs = c * dx + map(dt, y);
      const double res = (lhs - rhs).norm() / std::max(1.0, rhs.norm());
      r.linear_residual = std::max(r.linear_residual, res);
    }
    if (attrs.homogeneous_degree) {
      const Vector lhs = map(dt, Vector(c * x));
      const Vector rhs = std::pow(c, *attrs.homogeneous_degree) * dx;
      const double res = (lhs - rhs).norm() / std::max(1.0, rhs.norm());
      r.homogeneity_residual = std::max(r.homogeneity_residual, res);
    }
    const double xn = x.norm();
    if (xn > 0.0) {
      r.norm_ratio_observed = std::max(r.norm_ratio_observed, dx.norm() / xn);
    }
    const double d = (x - y).norm();
    if (d > 0.0) {
      r.lipschitz_observed =
          std::max(r.lipschitz_observed, (dx - map(dt, y)).norm() / d);
    }
  }
  r.linear_ok = r.linear_residual <= rel_tol;
  r.homogeneity_ok = r.homogeneity_residual <= rel_tol;
  if (attrs.lipschitz) {
    r.lipschitz_ok = r.lipschitz_observed <= *attrs.lipschitz * (1.0 + rel_tol);
  }
  if (attrs.operator_norm_bound) {
    r.norm_bound_ok =
        r.norm_ratio_observed <= *attrs.operator_norm_bound * (1.0 + rel_tol);
  }
  return r;
}

}  // namespace invstep::oracle
