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

// Structured-text documents (JSON objects; key order is irrelevant and
// unknown keys are rejected) and CSV exports.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qcoop/field.hpp"
#include "qcoop/ga.hpp"
#include "qcoop/lindblad.hpp"
#include "qcoop/perturb.hpp"
#include "qcoop/system.hpp"

namespace qcoop::io {

/// Keys: n_levels, energies[], dipole[][], gamma_rates[][], initial_state,
/// target_state; optional name, rate_groups[][].
std::string system_to_text(const LevelSystem& system);
LevelSystem system_from_text(std::string_view text);

/// Keys: components[{amplitude, phase, carrier}], center_time, width, horizon.
std::string field_to_text(const ControlField& field);
ControlField field_from_text(std::string_view text);

/// Keys: frequencies[], dipoles[], rates[], amplitudes[], phases[];
/// optional center_time, width, horizon.
perturb::LadderSpec ladder_from_text(std::string_view text);
std::string ladder_to_text(const perturb::LadderSpec& ladder);

std::string cooperation_to_text(const CooperationReport& report);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

/// t, rho_00..rho_{N-1,N-1}[, |rho_lm| for l < m].
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          bool off_diagonal = false);
/// omega, re, im, power.
void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum);
/// generation, J, O_percent, F.
void write_record_csv(std::ostream& os, const OptimizationRecord& record);
/// lambda, gamma, O_perturbative, O_oracle, rel_error[, O_lab].
void write_sweep_csv(std::ostream& os, const std::vector<perturb::SweepRow>& rows,
                     const std::vector<double>& lab = {});

}  // namespace qcoop::io
