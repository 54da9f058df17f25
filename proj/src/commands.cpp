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

#include "invstep/commands.hpp"

#include <chrono>
#include <cmath>

#include "invstep/membership.hpp"

namespace invstep {

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr std::size_t kDefaultSamples = 10000;
constexpr std::uint64_t kDefaultSeed = 1;
constexpr std::size_t kDefaultSteps = 100;

struct Resolved {
  std::size_t samples;
  std::uint64_t seed;
  std::optional<double> dt;
  std::size_t steps;
};

Resolved resolve(const ProblemSpec& spec, const CommandOptions& opts) {
  Resolved r;
  r.samples = opts.samples.value_or(spec.samples.value_or(kDefaultSamples));
  r.seed = opts.seed.value_or(spec.seed.value_or(kDefaultSeed));
  r.dt = opts.dt ? opts.dt : spec.dt;
  r.steps = opts.steps.value_or(spec.steps.value_or(kDefaultSteps));
  return r;
}

double require_dt(const Resolved& r, std::string_view command) {
  if (!r.dt) {
    throw Error(ErrorKind::InvalidArgument,
                std::string(command) + " needs a steplength (dt)");
  }
  return *r.dt;
}

std::vector<Method> methods_of(const ProblemSpec& spec) {
  if (spec.method) return {*spec.method};
  return {Method::ForwardEuler, Method::BackwardEuler};
}

Report echo(const ProblemSpec& spec, std::string_view command,
            const Resolved& r, const CommandOptions& opts) {
  Report e;
  e["command"] = std::string(command);
  if (!spec.example.empty()) e["example"] = spec.example;
  e["A"] = to_json(spec.A);
  e["set_type"] = std::string(set_type_name(spec.set));
  e["dimension"] = dimension(spec.set);
  if (spec.method) e["method"] = std::string(to_string(*spec.method));
  if (r.dt) e["dt"] = number(*r.dt);
  if (spec.point) e["point"] = to_json(*spec.point);
  e["samples"] = r.samples;
  e["seed"] = r.seed;
  e["tol"] = number(opts.tol);
  e["tol_dt"] = number(opts.tol_dt);
  return e;
}

// Error kinds that a sub-analysis may legitimately raise; they are reported
// in place rather than aborting the whole command.
Report failed(const Error& e) {
  Report out;
  out["error"] = std::string(to_string(e.kind()));
  out["message"] = e.what();
  return out;
}

int cmd_validate(const ProblemSpec& spec, const CommandOptions& opts,
                 Report& out) {
  const ValidationReport v = validate_set(spec.set, opts.tol);
  out["validation"] = to_json(v);
  if (spec.point) {
    const Classification c = classify_point(spec.set, *spec.point, opts.tol);
    Report p;
    p["location"] = std::string(to_string(c.location));
    p["margin"] = number(c.margin);
    out["point"] = p;
  }
  return v.passed() ? kExitOk : kExitInput;
}

int cmd_check(const ProblemSpec& spec, const Resolved& r,
              const CommandOptions& opts, Report& out) {
  int code = kExitOk;
  const Verdict cont =
      continuous_check(spec.A, spec.set, r.samples, r.seed, opts.tol);
  out["continuous"] = to_json(cont, opts.tol);
  if (cont.fails()) code = kExitViolated;
  if (!r.dt) return code;
  Report disc = Report::object();
  const LinearSystem sys(spec.A);
  for (Method m : methods_of(spec)) {
    const std::string key(to_string(m));
    if (!has_exact_discrete_check(spec.set)) {
      Report none;
      none["outcome"] = "Inconclusive";
      none["basis"] = "no exact discrete test for this set type; use verify";
      disc[key] = none;
      continue;
    }
    try {
      const Verdict v =
          discrete_check(step_matrix(sys, m, *r.dt), spec.set, opts.tol);
      Report j = to_json(v, opts.tol);
      if (v.witness) {
        const Vector img = step_matrix(sys, m, *r.dt) * *v.witness;
        j["witness_image"] = to_json(img);
        j["witness_image_margin"] =
            number(classify_point(spec.set, img, opts.tol).margin);
      }
      disc[key] = j;
      if (v.fails()) code = kExitViolated;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularShift) throw;
      disc[key] = failed(e);
      code = std::max(code, kExitNumerical);
    }
  }
  out["discrete"] = disc;
  return code;
}

int cmd_threshold(const ProblemSpec& spec, const Resolved& r,
                  const CommandOptions& opts, bool empirical, Report& out) {
  const Method m = spec.method.value_or(Method::BackwardEuler);
  out["method"] = std::string(to_string(m));
  out["tau_bar"] = to_json(tau_bar(spec.A), opts.tol);

  if (spec.point) {
    try {
      if (m != Method::BackwardEuler) {
        throw Error(ErrorKind::InvalidArgument,
                    "local thresholds are defined for backward Euler only");
      }
      if (const auto* e = std::get_if<Ellipsoid>(&spec.set)) {
        out["local"] = to_json(
            local_backward_euler(spec.A, *e, *spec.point, opts.tol), opts.tol);
      } else if (const auto* c = std::get_if<LorenzCone>(&spec.set)) {
        out["local"] = to_json(
            local_backward_euler(spec.A, *c, *spec.point, opts.tol), opts.tol);
      } else {
        throw Error(ErrorKind::InvalidArgument,
                    "local thresholds need an ellipsoid or a Lorenz cone");
      }
    } catch (const Error& e) {
      if (exit_code_for(e.kind()) == kExitNumerical) throw;
      out["local"] = failed(e);
    }
  }

  try {
    if (m == Method::BackwardEuler) {
      out["certified"] =
          to_json(backward_euler_uniform(spec.A, spec.set, opts.tol), opts.tol);
    } else if (const auto* p = std::get_if<PolyhedronPair>(&spec.set)) {
      out["certified"] = to_json(
          forward_euler_uniform_polyhedron(spec.A, *p, opts.tol), opts.tol);
    } else if (const auto* c = std::get_if<PolyhedralCone>(&spec.set)) {
      out["certified"] = to_json(
          forward_euler_uniform_polyhedron(spec.A, *c, opts.tol), opts.tol);
    } else {
      throw Error(ErrorKind::InvalidArgument,
                  "no certified forward-Euler threshold for a " +
                      std::string(set_type_name(spec.set)));
    }
  } catch (const Error& e) {
    if (exit_code_for(e.kind()) == kExitNumerical) throw;
    out["certified"] = failed(e);
  }

  int code = kExitOk;
  OptimalOptions oo;
  oo.tol = opts.tol;
  oo.tol_dt = opts.tol_dt;
  std::optional<double> dt_hi;
  if (has_exact_discrete_check(spec.set)) {
    try {
      const ThresholdReport t = optimal_uniform(spec.A, spec.set, m, oo);
      out["optimal"] = to_json(t, opts.tol);
      dt_hi = t.diagnostics.at("dt_max");
      // Zero at the bisection resolution.
      if (t.value <= oo.tol_dt) code = kExitViolated;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PredicateFalseAtZero) throw;
      out["optimal"] = failed(e);
      code = kExitViolated;
    }
  }

  if (empirical) {
    const double tb = tau_bar(spec.A).value;
    const double hi = dt_hi.value_or(
        10.0 * std::max(1.0, std::isfinite(tb) ? tb : 1.0));
    const StepMap map = StepMap::euler(LinearSystem(spec.A), m);
    oracle::EmpiricalOptions eo;
    eo.tol = opts.tol;
    try {
      out["empirical"] = to_json(
          oracle::empirical_threshold(map, spec.set, r.samples, hi, r.seed, eo),
          opts.tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PredicateFalseAtZero) throw;
      out["empirical"] = failed(e);
    }
  }
  return code;
}

Vector default_start(const ProblemSpec& spec, const Resolved& r,
                     const CommandOptions& opts) {
  if (spec.point) return *spec.point;
  // One boundary point, reproducible from the seed.
  return sample_points(spec.set, 0, 1, r.seed, opts.tol).front().x;
}

int cmd_simulate(const ProblemSpec& spec, const Resolved& r,
                 const CommandOptions& opts, Report& out) {
  const double dt = require_dt(r, "simulate");
  const Method m = spec.method.value_or(Method::BackwardEuler);
  const StepMap map = StepMap::euler(LinearSystem(spec.A), m);
  const Vector x0 = default_start(spec, r, opts);
  const Trajectory t = simulate(map, dt, x0, r.steps, spec.set, opts.tol);
  out["method"] = std::string(to_string(m));
  out["x0"] = to_json(x0);
  out["steps"] = r.steps;
  out["first_exit"] = t.first_exit ? Report(*t.first_exit) : Report();
  out["final_state"] = to_json(t.states.back());
  Report margins = Report::array();
  for (double v : t.margins) margins.push_back(number(v));
  out["margins"] = margins;
  return t.first_exit ? kExitViolated : kExitOk;
}

int cmd_verify(const ProblemSpec& spec, const Resolved& r,
               const CommandOptions& opts, Report& out) {
  const double dt = require_dt(r, "verify");
  int code = kExitOk;
  Report per = Report::object();
  for (Method m : methods_of(spec)) {
    const StepMap map = StepMap::euler(LinearSystem(spec.A), m);
    oracle::SampleVerifyOptions so;
    so.tol = opts.tol;
    try {
      const auto rep = oracle::sample_verify(map, dt, spec.set, r.samples,
                                             r.seed, so);
      per[std::string(to_string(m))] = to_json(rep, opts.tol);
      if (rep.violations > 0) code = std::max(code, kExitViolated);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularShift) throw;
      per[std::string(to_string(m))] = failed(e);
      code = std::max(code, kExitNumerical);
    }
  }
  out["verify"] = per;
  return code;
}

}  // namespace

bool is_command(std::string_view name) {
  return name == "validate" || name == "check" || name == "threshold" ||
         name == "simulate" || name == "verify";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoConvergence:
    case ErrorKind::Overflow:
    case ErrorKind::SingularShift:
    case ErrorKind::SamplingExhausted:
      return kExitNumerical;
    case ErrorKind::NotFlowInvariant:
    case ErrorKind::PredicateFalseAtZero:
    case ErrorKind::BranchPreconditionFailed:
      return kExitViolated;
    default:
      return kExitInput;
  }
}

Report error_report(std::string_view command, const Error& e) {
  Report out;
  out["schema_version"] = kSchemaVersion;
  out["tool"] = "invstep";
  out["version"] = kVersion;
  out["command"] = std::string(command);
  out["error"] = failed(e);
  out["exit_code"] = exit_code_for(e.kind());
  return out;
}

CommandResult run_command(const ProblemSpec& spec, std::string_view command,
                          const CommandOptions& opts) {
  if (!is_command(command)) {
    throw Error(ErrorKind::InvalidArgument,
                "unknown command '" + std::string(command) + "'");
  }
  if (!(opts.tol > 0.0) || !(opts.tol_dt > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "tolerances must be positive");
  }
  const auto start = std::chrono::steady_clock::now();
  const Resolved r = resolve(spec, opts);
  CommandResult res;
  Report& out = res.report;
  out["schema_version"] = kSchemaVersion;
  out["tool"] = "invstep";
  out["version"] = kVersion;
  out["input"] = echo(spec, command, r, opts);
  Report body = Report::object();
  if (command == "validate") {
    res.exit_code = cmd_validate(spec, opts, body);
  } else if (command == "check") {
    res.exit_code = cmd_check(spec, r, opts, body);
  } else if (command == "threshold") {
    const bool empirical = opts.samples.has_value() || spec.samples.has_value();
    res.exit_code = cmd_threshold(spec, r, opts, empirical, body);
  } else if (command == "simulate") {
    res.exit_code = cmd_simulate(spec, r, opts, body);
  } else {
    res.exit_code = cmd_verify(spec, r, opts, body);
  }
  out["result"] = body;
  out["exit_code"] = res.exit_code;
  const auto ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  out["timing"] = {{"wall_ms", ms}};
  return res;
}

}  // namespace invstep
