// Copyright 2026 The qcoop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "qcoop/error.hpp"
#include "reproduce.hpp"

namespace {

using namespace qcoop::cli;

void add_system_flags(CLI::App* app, SystemOptions& s) {
  app->add_option("--model", s.model, "Preset model: M1, M2, M3 or M4")
      ->capture_default_str();
  app->add_option("--system", s.system_file, "System document (overrides --model)")
      ->check(CLI::ExistingFile);
  app->add_option("--gamma", s.gamma, "Decoherence strength (1/fs)")
      ->capture_default_str();
  app->add_option("--gamma-left", s.gamma_left, "Strength of rate group 0 (two-path systems)");
  app->add_option("--gamma-right", s.gamma_right, "Strength of rate group 1 (two-path systems)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open quantum system control: propagation, optimization and "
               "perturbative analysis of multilevel ladders"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QCOOP_VERSION);

  PropagateOptions prop;
  auto* p = app.add_subcommand("propagate", "Propagate a system with an optional field");
  add_system_flags(p, prop.system);
  p->add_option("--field", prop.field_file, "Field document (default: no field)")
      ->check(CLI::ExistingFile);
  p->add_option("--dt", prop.dt, "RK4 step (fs)")->capture_default_str();
  p->add_option("--store-every", prop.store_every, "Snapshot stride in steps")
      ->capture_default_str();
  p->add_flag("--off-diagonal", prop.off_diagonal, "Add |rho_lm| columns to the CSV");
  p->add_option("--out", prop.out, "Output directory");

  OptimizeOptions opt;
  auto* o = app.add_subcommand("optimize", "Optimize a field with the genetic algorithm");
  add_system_flags(o, opt.system);
  o->add_option("--target", opt.target_percent, "Target yield (%)")->capture_default_str();
  o->add_option("--alpha", opt.alpha, "Fluence weight")->capture_default_str();
  o->add_option("--seed", opt.seed, "RNG seed")->capture_default_str();
  o->add_option("--population", opt.population, "Population size")->capture_default_str();
  o->add_option("--generations", opt.generations, "Generations")->capture_default_str();
  o->add_option("--threads", opt.threads, "Evaluation threads (0: all cores)")
      ->capture_default_str();
  o->add_option("--dt", opt.dt, "RK4 step (fs)")->capture_default_str();
  o->add_option("--out", opt.out, "Output directory");

  SpectrumOptions spec;
  auto* s = app.add_subcommand("spectrum", "Power spectrum of a field document");
  s->add_option("field", spec.field_file, "Field document")->required()->check(CLI::ExistingFile);
  s->add_option("--lo", spec.lo, "Lowest frequency (rad/fs)")->capture_default_str();
  s->add_option("--hi", spec.hi, "Highest frequency (rad/fs)")->capture_default_str();
  s->add_option("--points", spec.points, "Grid points")->capture_default_str();
  s->add_option("--out", spec.out, "Output directory");

  ReproduceCmdOptions rep;
  auto* r = app.add_subcommand("reproduce", "Recompute a reference table or figure");
  r->add_option("id", rep.id, "Target id")
      ->required()
      ->check(CLI::IsMember(reproduce_ids()));
  r->add_option("--seeds", rep.seeds, "Comma-separated GA seeds")->delimiter(',');
  r->add_option("--threads", rep.threads, "Evaluation threads (0: all cores)")
      ->capture_default_str();
  r->add_option("--out", rep.out, "Output directory");

  SweepOptions sw;
  auto* w = app.add_subcommand("perturb-sweep",
                               "Perturbative yield vs the exact superoperator oracle");
  w->add_option("--ladder", sw.ladder_file, "Ladder document")->check(CLI::ExistingFile);
  w->add_option("--model", sw.model, "Preset ladder model when no document is given")
      ->capture_default_str();
  w->add_option("--rungs", sw.rungs, "Rungs taken from the preset")->capture_default_str();
  w->add_option("--amplitude", sw.amplitude, "Amplitude on every preset carrier")
      ->capture_default_str();
  w->add_option("--mode", sw.mode, "cooperative (gamma = lambda^2) or field (gamma = 0)")
      ->check(CLI::IsMember({"cooperative", "field"}))
      ->capture_default_str();
  w->add_option("--coupling", sw.coupling, "magnus or rwa")
      ->check(CLI::IsMember({"magnus", "rwa"}))
      ->capture_default_str();
  w->add_option("--lambdas", sw.lambdas, "Explicit lambda values")->delimiter(',');
  w->add_option("--lambda-max", sw.lambda_max, "Largest lambda")->capture_default_str();
  w->add_option("--halvings", sw.halvings, "Number of lambda halvings")->capture_default_str();
  w->add_flag("--lab", sw.lab, "Add the full lab-frame RK4 yield column");
  w->add_option("--out", sw.out, "Output directory");

  std::string manifest, rerun_out;
  auto* m = app.add_subcommand("rerun", "Replay the command recorded in a manifest");
  m->add_option("manifest", manifest, "manifest.json")->required()->check(CLI::ExistingFile);
  m->add_option("--out", rerun_out, "Output directory (default: the recorded one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*p) return run_propagate(prop);
    if (*o) return run_optimize(opt);
    if (*s) return run_spectrum(spec);
    if (*r) return run_reproduce(rep);
    if (*w) return run_perturb_sweep(sw);
    if (*m) return run_manifest(manifest, rerun_out);
  } catch (const qcoop::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qcoop::PropagationDiverged& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
