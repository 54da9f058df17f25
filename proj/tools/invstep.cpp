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

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "invstep/commands.hpp"

int main(int argc, char** argv) {
  using namespace invstep;
  CLI::App app{"Invariance-preserving steplength analysis for x' = Ax"};
  app.require_subcommand(1);

  std::string input = "-";
  std::string format = "json";
  CommandOptions opts;
  double tol = opts.tol;
  double tol_dt = opts.tol_dt;
  std::size_t samples = 0, steps = 0;
  std::uint64_t seed = 0;
  double dt = 0.0;

  for (const char* name : {"validate", "check", "threshold", "simulate",
                           "verify"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--input", input, "problem JSON file, '-' for stdin");
    sub->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--tol", tol, "membership and definiteness tolerance");
    sub->add_option("--tol-dt", tol_dt, "bisection width for thresholds");
    sub->add_option("--samples", samples);
    sub->add_option("--seed", seed);
    sub->add_option("--dt", dt);
    sub->add_option("--steps", steps);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInput;
  }

  auto* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  opts.tol = tol;
  opts.tol_dt = tol_dt;
  if (sub->count("--samples")) opts.samples = samples;
  if (sub->count("--seed")) opts.seed = seed;
  if (sub->count("--dt")) opts.dt = dt;
  if (sub->count("--steps")) opts.steps = steps;

  Report report;
  int code = 0;
  try {
    const ProblemSpec spec = load_spec(input, opts.tol);
    const CommandResult res = run_command(spec, command, opts);
    report = res.report;
    code = res.exit_code;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    report = error_report(command, e);
    code = exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    report = error_report(command, Error(ErrorKind::NoConvergence, e.what()));
    code = kExitNumerical;
  }
  std::cout << (format == "text" ? emit_text(report) : emit_json(report));
  return code;
}
