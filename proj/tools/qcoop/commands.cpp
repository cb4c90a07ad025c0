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

#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "qcoop/error.hpp"
#include "qcoop/field.hpp"
#include "qcoop/ga.hpp"
#include "qcoop/io.hpp"
#include "qcoop/lindblad.hpp"
#include "qcoop/perturb.hpp"
#include "qcoop/system.hpp"
#include "reproduce.hpp"

#ifndef QCOOP_VERSION
#define QCOOP_VERSION "0.0.0"
#endif

namespace qcoop::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

template <typename T>
void get_opt(const json& j, const char* key, T& v) {
  if (j.contains(key)) j.at(key).get_to(v);
}

void put_optional(json& j, const char* key, const std::optional<double>& v) {
  j[key] = v ? json(*v) : json(nullptr);
}

void get_optional(const json& j, const char* key, std::optional<double>& v) {
  if (j.contains(key) && !j.at(key).is_null()) v = j.at(key).get<double>();
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void write_manifest(const fs::path& dir, const std::string& command,
                    const json& config, std::optional<std::uint64_t> seed,
                    const std::vector<std::string>& outputs, double seconds) {
  json m;
  m["command"] = command;
  m["config"] = config;
  m["seed"] = seed ? json(*seed) : json(nullptr);
  m["version"] = QCOOP_VERSION;
  m["outputs"] = outputs;
  m["wall_seconds"] = seconds;
  io::write_file(dir / "manifest.json", m.dump(2) + "\n");
}

LevelSystem load_system(const SystemOptions& o) {
  if (!o.system_file.empty())
    return io::system_from_text(io::read_file(o.system_file));
  return build_model(o.model);
}

Decoherence resolve_gamma(const LevelSystem& s, const SystemOptions& o) {
  for (double g : {o.gamma, o.gamma_left.value_or(0.0), o.gamma_right.value_or(0.0)})
    if (!(g >= 0.0) || !std::isfinite(g))
      throw ConfigError("decoherence strengths must be finite and >= 0");
  const int groups = s.n_rate_groups();
  if (groups < 2) {
    if (o.gamma_left || o.gamma_right)
      throw ConfigError("--gamma-left/--gamma-right need a system with two rate groups");
    return o.gamma;
  }
  std::vector<double> g(static_cast<std::size_t>(groups), o.gamma);
  if (o.gamma_left) g[0] = *o.gamma_left;
  if (o.gamma_right) g[1] = *o.gamma_right;
  return Decoherence{std::move(g)};
}

template <typename F>
void write_with(const fs::path& path, F&& writer) {
  std::ostringstream os;
  writer(os);
  io::write_file(path, os.str());
}

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * fraction);
  return buf;
}

}  // namespace

void to_json(json& j, const SystemOptions& o) {
  j = json{{"model", o.model}, {"system_file", o.system_file}, {"gamma", o.gamma}};
  put_optional(j, "gamma_left", o.gamma_left);
  put_optional(j, "gamma_right", o.gamma_right);
}

void from_json(const json& j, SystemOptions& o) {
  get_opt(j, "model", o.model);
  get_opt(j, "system_file", o.system_file);
  get_opt(j, "gamma", o.gamma);
  get_optional(j, "gamma_left", o.gamma_left);
  get_optional(j, "gamma_right", o.gamma_right);
}

void to_json(json& j, const PropagateOptions& o) {
  j = json{{"system", o.system},         {"field_file", o.field_file},
           {"dt", o.dt},                 {"store_every", o.store_every},
           {"off_diagonal", o.off_diagonal}, {"out", o.out}};
}

void from_json(const json& j, PropagateOptions& o) {
  get_opt(j, "system", o.system);
  get_opt(j, "field_file", o.field_file);
  get_opt(j, "dt", o.dt);
  get_opt(j, "store_every", o.store_every);
  get_opt(j, "off_diagonal", o.off_diagonal);
  get_opt(j, "out", o.out);
}

void to_json(json& j, const OptimizeOptions& o) {
  j = json{{"system", o.system},     {"target_percent", o.target_percent},
           {"alpha", o.alpha},       {"seed", o.seed},
           {"population", o.population}, {"generations", o.generations},
           {"threads", o.threads},   {"dt", o.dt},
           {"out", o.out}};
}

void from_json(const json& j, OptimizeOptions& o) {
  get_opt(j, "system", o.system);
  get_opt(j, "target_percent", o.target_percent);
  get_opt(j, "alpha", o.alpha);
  get_opt(j, "seed", o.seed);
  get_opt(j, "population", o.population);
  get_opt(j, "generations", o.generations);
  get_opt(j, "threads", o.threads);
  get_opt(j, "dt", o.dt);
  get_opt(j, "out", o.out);
}

void to_json(json& j, const SpectrumOptions& o) {
  j = json{{"field_file", o.field_file}, {"lo", o.lo}, {"hi", o.hi},
           {"points", o.points}, {"out", o.out}};
}

void from_json(const json& j, SpectrumOptions& o) {
  get_opt(j, "field_file", o.field_file);
  get_opt(j, "lo", o.lo);
  get_opt(j, "hi", o.hi);
  get_opt(j, "points", o.points);
  get_opt(j, "out", o.out);
}

void to_json(json& j, const ReproduceCmdOptions& o) {
  j = json{{"id", o.id}, {"seeds", o.seeds}, {"threads", o.threads}, {"out", o.out}};
}

void from_json(const json& j, ReproduceCmdOptions& o) {
  get_opt(j, "id", o.id);
  get_opt(j, "seeds", o.seeds);
  get_opt(j, "threads", o.threads);
  get_opt(j, "out", o.out);
}

void to_json(json& j, const SweepOptions& o) {
  j = json{{"ladder_file", o.ladder_file}, {"model", o.model},
           {"rungs", o.rungs},             {"amplitude", o.amplitude},
           {"mode", o.mode},               {"coupling", o.coupling},
           {"lambdas", o.lambdas},         {"lambda_max", o.lambda_max},
           {"halvings", o.halvings},       {"lab", o.lab},
           {"out", o.out}};
}

void from_json(const json& j, SweepOptions& o) {
  get_opt(j, "ladder_file", o.ladder_file);
  get_opt(j, "model", o.model);
  get_opt(j, "rungs", o.rungs);
  get_opt(j, "amplitude", o.amplitude);
  get_opt(j, "mode", o.mode);
  get_opt(j, "coupling", o.coupling);
  get_opt(j, "lambdas", o.lambdas);
  get_opt(j, "lambda_max", o.lambda_max);
  get_opt(j, "halvings", o.halvings);
  get_opt(j, "lab", o.lab);
  get_opt(j, "out", o.out);
}

std::string output_dir(const std::string& explicit_out, const std::string& name) {
  if (!explicit_out.empty()) return explicit_out;
  const char* root = std::getenv("QCOOP_OUTPUT_ROOT");
  return (fs::path(root && *root ? root : "qcoop-runs") / name).string();
}

int run_propagate(const PropagateOptions& in) {
  Timer timer;
  PropagateOptions o = in;
  o.out = output_dir(o.out, "propagate");
  const LevelSystem s = load_system(o.system);
  const Decoherence g = resolve_gamma(s, o.system);
  const ControlField f = o.field_file.empty()
                             ? ControlField::on_carriers(s.carriers())
                             : io::field_from_text(io::read_file(o.field_file));
  PropagationConfig cfg;
  cfg.dt = o.dt;
  cfg.horizon = f.horizon;
  cfg.store_every = o.store_every;

  const Trajectory t = propagate(s, f, g, pure_state(s.n_levels(), s.initial_state), cfg);

  const fs::path dir = o.out;
  write_with(dir / "trajectory.csv",
             [&](std::ostream& os) { io::write_trajectory_csv(os, t, o.off_diagonal); });
  json summary;
  std::vector<double> pops;
  std::cout << "final populations (%):";
  for (int l = 0; l < s.n_levels(); ++l) {
    const double p = t.final_state(l, l).real();
    pops.push_back(100.0 * p);
    std::cout << ' ' << percent(p);
  }
  std::cout << "\ntarget population (%): " << percent(outcome(t.final_state, s)) << '\n';
  summary["final_populations_percent"] = pops;
  summary["target_percent"] = 100.0 * outcome(t.final_state, s);
  summary["fluence"] = fluence(f);
  io::write_file(dir / "summary.json", summary.dump(2) + "\n");
  write_manifest(dir, "propagate", json(o), std::nullopt,
                 {"trajectory.csv", "summary.json"}, timer.seconds());
  return kExitOk;
}

int run_optimize(const OptimizeOptions& in) {
  Timer timer;
  OptimizeOptions o = in;
  o.out = output_dir(o.out, "optimize");
  const LevelSystem s = load_system(o.system);
  const Decoherence g = resolve_gamma(s, o.system);
  GAConfig ga;
  ga.population_size = o.population;
  ga.generations = o.generations;
  ga.rng_seed = o.seed;
  ga.threads = o.threads;
  PropagationConfig prop;
  prop.dt = o.dt;
  const CostParams cost{o.target_percent / 100.0, o.alpha};

  const OptimizationRecord rec = optimize(s, g, cost, ga, prop);
  const CooperationReport c = cooperation_report(rec.best_field, s, g, prop);

  const fs::path dir = o.out;
  io::write_file(dir / "best_field.json", io::field_to_text(rec.best_field));
  write_with(dir / "record.csv", [&](std::ostream& os) { io::write_record_csv(os, rec); });
  io::write_file(dir / "cooperation.json", io::cooperation_to_text(c));
  write_with(dir / "spectrum.csv", [&](std::ostream& os) {
    io::write_spectrum_csv(os, analytic_spectrum(rec.best_field,
                                                 uniform_grid(0.0, 3.0, 3000)));
  });

  std::printf("%-16s %-16s %-16s %s\n", "O[E=0,gamma] %", "O[E,gamma=0] %",
              "O[E,gamma] %", "F");
  std::printf("%-16s %-16s %-16s %.3g\n", percent(c.yield_decoherence_only).c_str(),
              percent(c.yield_field_only).c_str(), percent(c.yield_both).c_str(),
              c.fluence);
  std::printf("cooperation: %s (%s%% vs %s%%), %ld propagations\n",
              c.cooperates ? "yes" : "no", percent(c.yield_both).c_str(),
              percent(c.sum).c_str(), rec.evaluations);
  write_manifest(dir, "optimize", json(o), o.seed,
                 {"best_field.json", "record.csv", "cooperation.json", "spectrum.csv"},
                 timer.seconds());
  return kExitOk;
}

int run_spectrum(const SpectrumOptions& in) {
  Timer timer;
  SpectrumOptions o = in;
  o.out = output_dir(o.out, "spectrum");
  if (o.field_file.empty()) throw ConfigError("spectrum needs a field file");
  if (o.points < 2 || !(o.hi > o.lo)) throw ConfigError("spectrum grid needs hi > lo and >= 2 points");
  const ControlField f = io::field_from_text(io::read_file(o.field_file));
  const fs::path dir = o.out;
  write_with(dir / "spectrum.csv", [&](std::ostream& os) {
    io::write_spectrum_csv(
        os, analytic_spectrum(f, uniform_grid(o.lo, o.hi, static_cast<std::size_t>(o.points))));
  });
  write_manifest(dir, "spectrum", json(o), std::nullopt, {"spectrum.csv"},
                 timer.seconds());
  std::cout << "wrote " << (dir / "spectrum.csv").string() << '\n';
  return kExitOk;
}

int run_reproduce(const ReproduceCmdOptions& in) {
  Timer timer;
  ReproduceCmdOptions o = in;
  o.out = output_dir(o.out, "reproduce-" + o.id);
  ReproduceOptions ro;
  ro.seeds = o.seeds;
  ro.threads = o.threads;
  const Report report = reproduce(o.id, ro);

  const fs::path dir = o.out;
  std::vector<std::string> outputs{"report.md", "report.csv"};
  const std::string md = to_markdown(report);
  io::write_file(dir / "report.md", md);
  io::write_file(dir / "report.csv", to_csv(report));
  for (const auto& [name, text] : report.files) {
    io::write_file(dir / name, text);
    outputs.push_back(name);
  }
  std::optional<std::uint64_t> seed;
  if (!o.seeds.empty()) seed = o.seeds.front();
  write_manifest(dir, "reproduce", json(o), seed, outputs, timer.seconds());
  std::cout << md;
  return report.passed() ? kExitOk : kExitCriteria;
}

int run_perturb_sweep(const SweepOptions& in) {
  Timer timer;
  SweepOptions o = in;
  o.out = output_dir(o.out, "perturb-sweep");
  perturb::LadderSpec ladder;
  if (!o.ladder_file.empty()) {
    ladder = io::ladder_from_text(io::read_file(o.ladder_file));
  } else {
    const LevelSystem s = build_model(o.model);
    ControlField f = ControlField::on_carriers(s.carriers());
    for (auto& c : f.components) c.amplitude = o.amplitude;
    ladder = perturb::LadderSpec::from_system(s, f);
    if (o.rungs < 1 || o.rungs > ladder.n_rungs())
      throw ConfigError("--rungs must be in 1.." + std::to_string(ladder.n_rungs()));
    const auto n = static_cast<std::size_t>(o.rungs);
    for (auto* v : {&ladder.frequencies, &ladder.dipoles, &ladder.rates,
                    &ladder.amplitudes, &ladder.phases})
      v->resize(n);
  }
  ladder.validate();
  if (ladder.n_rungs() > 6) throw ConfigError("perturb-sweep supports at most 6 rungs");
  if (o.mode != "cooperative" && o.mode != "field")
    throw ConfigError("--mode must be 'cooperative' or 'field'");
  if (o.coupling != "magnus" && o.coupling != "rwa")
    throw ConfigError("--coupling must be 'magnus' or 'rwa'");

  std::vector<double> lambdas = o.lambdas;
  if (lambdas.empty()) {
    if (!(o.lambda_max > 0.0) || o.halvings < 0)
      throw ConfigError("--lambda-max must be > 0 and --halvings >= 0");
    for (int k = 0; k <= o.halvings; ++k) lambdas.push_back(o.lambda_max / std::pow(2.0, k));
  }
  const perturb::EffectiveCoupling w =
      o.coupling == "rwa" ? perturb::rwa_coupling(ladder) : perturb::magnus_w(ladder);
  const auto rows = perturb::convergence_sweep(ladder, w, lambdas, o.mode == "cooperative");
  std::vector<double> lab;
  if (o.lab)
    for (const auto& r : rows) lab.push_back(perturb::lab_frame_yield(ladder, r.lambda, r.gamma));

  const fs::path dir = o.out;
  write_with(dir / "sweep.csv", [&](std::ostream& os) { io::write_sweep_csv(os, rows, lab); });
  write_manifest(dir, "perturb-sweep", json(o), std::nullopt, {"sweep.csv"},
                 timer.seconds());
  std::printf("%-12s %-12s %-14s %-14s %s\n", "lambda", "gamma", "perturbative",
              "oracle", "rel_error");
  for (const auto& r : rows)
    std::printf("%-12.5g %-12.5g %-14.6g %-14.6g %.3g\n", r.lambda, r.gamma,
                r.perturbative, r.oracle, r.rel_error);
  return kExitOk;
}

int run_manifest(const std::string& manifest_path, const std::string& out) {
  json m;
  try {
    m = json::parse(io::read_file(manifest_path));
  } catch (const json::exception& e) {
    throw ConfigError(manifest_path + ": " + e.what());
  }
  try {
    const std::string cmd = m.at("command").get<std::string>();
    const json& cfg = m.at("config");
    auto with_out = [&](auto opts) {
      if (!out.empty()) opts.out = out;
      return opts;
    };
    if (cmd == "propagate") return run_propagate(with_out(cfg.get<PropagateOptions>()));
    if (cmd == "optimize") return run_optimize(with_out(cfg.get<OptimizeOptions>()));
    if (cmd == "spectrum") return run_spectrum(with_out(cfg.get<SpectrumOptions>()));
    if (cmd == "reproduce") return run_reproduce(with_out(cfg.get<ReproduceCmdOptions>()));
    if (cmd == "perturb-sweep") return run_perturb_sweep(with_out(cfg.get<SweepOptions>()));
    throw ConfigError(manifest_path + ": unknown command '" + cmd + "'");
  } catch (const json::exception& e) {
    throw ConfigError(manifest_path + ": " + e.what());
  }
}

}  // namespace qcoop::cli
