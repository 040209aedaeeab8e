// Copyright 2026 The dualjet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: `dualjet compute ...` and `dualjet verify ...`.

#include <CLI11.hpp>

#include "dualjet/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Geometry of multi-time Hamilton spaces: connections, torsions, curvatures and their checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", dualjet::kVersion);

  dualjet::ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "Evaluate every component at the given points and write a JSON report");
  c->add_option("--config", compute.config, "Space definition (JSON)")->required();
  c->add_option("--point", compute.points, "Point, e.g. t=1,x=0.5,0.7,p=1,0,0,0 (repeatable)");
  c->add_option("--grid", compute.grid, "Grid, e.g. x1=0.5:1.0:3,t1=1");
  c->add_option("--out", compute.out, "Report path, '-' for stdout")->capture_default_str();

  dualjet::VerifyArgs verify;
  int samples = 0;
  std::uint64_t seed = 0;
  auto* v = app.add_subcommand("verify", "Run every verification suite; exit 1 if any check fails");
  v->add_option("--config", verify.config, "Space definition (JSON)")->required();
  auto* samples_opt = v->add_option("--samples", samples, "Number of sample points")->check(CLI::PositiveNumber);
  auto* seed_opt = v->add_option("--seed", seed, "Sampler seed");
  v->add_option("--tol", verify.tolerances, "Tolerance override key=value: identity, zero, fd, fd_step");
  v->add_option("--out", verify.out, "Optional JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dualjet::kExitConfig;
  }
  if (*samples_opt) verify.samples = samples;
  if (*seed_opt) verify.seed = seed;
  if (*c) return dualjet::cmd_compute(compute);
  return dualjet::cmd_verify(verify);
}
