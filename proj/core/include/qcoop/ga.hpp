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

#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "qcoop/field.hpp"
#include "qcoop/lindblad.hpp"
#include "qcoop/system.hpp"

namespace qcoop {

/// J = |O - O_T|^2 + alpha F, yields as fractions.
struct CostParams {
  double target_yield = 0.05;
  double fluence_weight = 0.05;

  void validate() const;
};

/// Real-coded GA settings. The numeric defaults are tuning choices.
struct GAConfig {
  int population_size = 60;
  int generations = 200;
  int tournament_size = 3;
  double crossover_rate = 0.8;
  double mutation_rate = 0.1;
  /// Gaussian mutation sigma as a fraction of each gene's range.
  double mutation_scale = 0.1;
  /// Halve mutation_scale after this many generations without improvement.
  int stagnation_window = 50;
  int elite_count = 2;
  std::uint64_t rng_seed = 1;
  double amplitude_min = 0.0;
  double amplitude_max = 0.5;
  double phase_min = 0.0;
  double phase_max = 2.0 * std::numbers::pi;
  /// Hard cap on propagations (0: population_size * generations).
  long max_evaluations = 0;
  /// Fitness-evaluation threads (0: hardware concurrency).
  int threads = 1;

  void validate() const;
};

struct Evaluation {
  double cost = 0.0;
  double yield = 0.0;
  double fluence = 0.0;
};

struct GenerationStats {
  int generation = 0;
  double best_cost = 0.0;
  double best_yield = 0.0;
  double best_fluence = 0.0;
  long evaluations = 0;  ///< cumulative propagations
};

struct OptimizationRecord {
  std::vector<GenerationStats> history;
  ControlField best_field;
  Evaluation best;
  std::uint64_t seed = 0;
  long evaluations = 0;
};

/// A system, decoherence setting and cost bound together with precomputed
/// propagation tables, so repeated field evaluations only resample the
/// carrier basis and rerun RK4.
class ControlProblem {
 public:
  ControlProblem(LevelSystem system, const Decoherence& gamma, CostParams params,
                 ControlField field_template, PropagationConfig prop = {});

  /// Template built on the system's resonant carriers with default envelope.
  ControlProblem(LevelSystem system, const Decoherence& gamma, CostParams params,
                 PropagationConfig prop = {});

  std::size_t n_controls() const { return basis_.n_carriers(); }
  const LevelSystem& system() const { return system_; }
  const ControlField& field_template() const { return template_; }
  const CostParams& params() const { return params_; }
  const PropagationConfig& propagation() const { return prop_; }

  ControlField make_field(std::span<const double> amplitudes,
                          std::span<const double> phases) const;

  double yield(std::span<const double> amplitudes,
               std::span<const double> phases) const;
  Evaluation evaluate(std::span<const double> amplitudes,
                      std::span<const double> phases) const;

 private:
  LevelSystem system_;
  CostParams params_;
  ControlField template_;
  PropagationConfig prop_;
  LindbladGenerator generator_;
  CarrierBasis basis_;
  DensityMatrix rho0_;
};

/// J for one field.
double cost(const ControlField& field, const LevelSystem& system,
            const Decoherence& gamma, const CostParams& params,
            const PropagationConfig& prop = {});

/// O[E, gamma] with the system's initial state.
double yield_of(const ControlField& field, const LevelSystem& system,
                const Decoherence& gamma, const PropagationConfig& prop = {});

/// GA over amplitudes and phases on the system's fixed resonant carriers:
/// tournament selection, blend crossover with mixing factor in
/// [-0.25, 1.25], per-gene Gaussian mutation, elitism. Deterministic for a
/// given seed independent of the thread count.
OptimizationRecord optimize(const ControlProblem& problem, const GAConfig& cfg);

OptimizationRecord optimize(const LevelSystem& system, const Decoherence& gamma,
                            const CostParams& params, const GAConfig& cfg,
                            const PropagationConfig& prop = {});

struct CooperationReport {
  double yield_both = 0.0;               ///< O[E, gamma]
  double yield_field_only = 0.0;         ///< O[E, 0]
  double yield_decoherence_only = 0.0;   ///< O[0, gamma]
  double sum = 0.0;                      ///< field-only + decoherence-only
  double fluence = 0.0;
  bool cooperates = false;               ///< yield_both > sum
};

CooperationReport cooperation_report(const ControlField& field,
                                     const LevelSystem& system,
                                     const Decoherence& gamma,
                                     const PropagationConfig& prop = {});

/// O[E0, gamma] for a field optimized without decoherence.
double cross_evaluate(const ControlField& field_from_gamma0,
                      const LevelSystem& system, const Decoherence& gamma,
                      const PropagationConfig& prop = {});

}  // namespace qcoop
