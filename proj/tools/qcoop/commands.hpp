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

#pragma once

// Subcommand options and runners. Every option struct round-trips through
// the manifest's "config" object, which is how `rerun` replays a run.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qcoop::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitCriteria = 4;

/// Model preset or system document plus decoherence strengths. For systems
/// with two rate groups, gamma_left/gamma_right override gamma per group.
struct SystemOptions {
  std::string model = "M1";
  std::string system_file;
  double gamma = 0.0;
  std::optional<double> gamma_left;
  std::optional<double> gamma_right;
};

struct PropagateOptions {
  SystemOptions system;
  std::string field_file;
  double dt = 0.01;
  long store_every = 100;
  bool off_diagonal = false;
  std::string out;
};

struct OptimizeOptions {
  SystemOptions system;
  double target_percent = 5.0;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  int population = 60;
  int generations = 200;
  int threads = 1;
  double dt = 0.01;
  std::string out;
};

struct SpectrumOptions {
  std::string field_file;
  double lo = 0.0;
  double hi = 3.0;
  long points = 3000;
  std::string out;
};

struct ReproduceCmdOptions {
  std::string id;
  std::vector<std::uint64_t> seeds{1};
  int threads = 1;
  std::string out;
};

/// Ladder document, or the first `rungs` rungs of a preset ladder model
/// driven with `amplitude` on every carrier.
struct SweepOptions {
  std::string ladder_file;
  std::string model = "M1";
  int rungs = 2;
  double amplitude = 0.1;
  std::string mode = "cooperative";  ///< cooperative | field
  std::string coupling = "magnus";   ///< magnus | rwa
  std::vector<double> lambdas;
  double lambda_max = 0.4;
  int halvings = 6;
  bool lab = false;
  std::string out;
};

void to_json(nlohmann::json& j, const SystemOptions& o);
void from_json(const nlohmann::json& j, SystemOptions& o);
void to_json(nlohmann::json& j, const PropagateOptions& o);
void from_json(const nlohmann::json& j, PropagateOptions& o);
void to_json(nlohmann::json& j, const OptimizeOptions& o);
void from_json(const nlohmann::json& j, OptimizeOptions& o);
void to_json(nlohmann::json& j, const SpectrumOptions& o);
void from_json(const nlohmann::json& j, SpectrumOptions& o);
void to_json(nlohmann::json& j, const ReproduceCmdOptions& o);
void from_json(const nlohmann::json& j, ReproduceCmdOptions& o);
void to_json(nlohmann::json& j, const SweepOptions& o);
void from_json(const nlohmann::json& j, SweepOptions& o);

/// Each runner writes its outputs plus manifest.json into the output
/// directory and returns an exit code. ConfigError and PropagationDiverged
/// propagate to the caller.
int run_propagate(const PropagateOptions& o);
int run_optimize(const OptimizeOptions& o);
int run_spectrum(const SpectrumOptions& o);
int run_reproduce(const ReproduceCmdOptions& o);
int run_perturb_sweep(const SweepOptions& o);

/// Replays the command recorded in a manifest, optionally into another
/// output directory.
int run_manifest(const std::string& manifest_path, const std::string& out);

/// Output directory: `explicit_out` if set, else $QCOOP_OUTPUT_ROOT (default
/// "qcoop-runs") joined with `name`.
std::string output_dir(const std::string& explicit_out, const std::string& name);

}  // namespace qcoop::cli
