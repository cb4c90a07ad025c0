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

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qcoop {

using cplx = std::complex<double>;

/// N x N complex matrix holding a reduced density matrix (or its time
/// derivative). Row index is the ket level, column index the bra level.
using DensityMatrix = Eigen::MatrixXcd;

/// A dipole-coupled pair of levels, lower < upper in index order.
struct Transition {
  int lower = 0;
  int upper = 0;
  double frequency = 0.0;  ///< |eps_upper - eps_lower| in rad/fs
  double dipole = 0.0;     ///< mu_{lower,upper}
};

/// Multilevel system with diagonal H0, a real symmetric dipole operator and
/// phenomenological Lindblad rates Gamma_{jn} for the jump |j><n|.
///
/// Energies are in rad/fs (hbar = 1), rates in 1/fs per unit decoherence
/// strength. `rate_groups` assigns every channel to a group so that distinct
/// environments (e.g. two pathways) can be scaled independently; a system
/// with a single environment has all groups equal to 0.
struct LevelSystem {
  std::string name;
  Eigen::VectorXd energies;
  Eigen::MatrixXd dipole;
  Eigen::MatrixXd gamma_rates;
  Eigen::MatrixXi rate_groups;
  int initial_state = 0;
  int target_state = 0;

  int n_levels() const { return static_cast<int>(energies.size()); }
  int n_rate_groups() const;

  /// Throws ConfigError if any structural invariant is broken.
  void validate() const;

  /// Dipole-allowed transitions, ordered by (lower, upper). Their
  /// frequencies are the resonant carriers available to a control field.
  std::vector<Transition> transitions() const;
  std::vector<double> carriers() const;
};

enum class ModelId { M1, M2, M3, M4 };

ModelId parse_model_id(std::string_view id);
std::string_view to_string(ModelId id);

/// Model presets. M1-M3 are five-level ladders; M4 is the eight-level
/// two-path system with levels ordered {0, 1, 2, 3, 1', 2', 3', 4}, the
/// left path in rate group 0 and the right path in rate group 1.
LevelSystem build_model(ModelId id);
LevelSystem build_model(std::string_view id);

/// Decoherence strength gamma (1/fs), one value per rate group. Implicitly
/// constructible from a scalar for single-environment systems.
struct Decoherence {
  std::vector<double> strengths{0.0};

  Decoherence() = default;
  Decoherence(double gamma) : strengths{gamma} {}  // NOLINT(implicit)
  explicit Decoherence(std::vector<double> per_group)
      : strengths(std::move(per_group)) {}

  /// Strength of a group; a scalar strength applies to every group.
  double operator[](int group) const;
  bool is_zero() const;
};

/// gamma_g * Gamma_{jn} with g the channel's rate group.
Eigen::MatrixXd effective_rates(const LevelSystem& system,
                                const Decoherence& gamma);

/// N^2 x N^2 matrix acting on vec(rho) with vec index l*N + l'.
struct Superoperator {
  Eigen::MatrixXcd matrix;

  int n_levels() const;
  DensityMatrix apply(const DensityMatrix& rho) const;
};

Eigen::VectorXcd vectorize(const DensityMatrix& rho);
DensityMatrix unvectorize(const Eigen::VectorXcd& v);

/// gamma * F{rho}, with
///   F{rho}_{ll'} = delta_{ll'} sum_n Gamma_{ln} rho_nn
///                  - 1/2 sum_n (Gamma_{nl} + Gamma_{nl'}) rho_{ll'}.
DensityMatrix dissipator_apply(const LevelSystem& system,
                               const Decoherence& gamma,
                               const DensityMatrix& rho);

/// Explicit matrix of dissipator_apply on vectorized density matrices.
Superoperator dissipator_superoperator(const LevelSystem& system,
                                       const Decoherence& gamma);

/// Dissipator from a bare rate matrix (already multiplied by gamma).
Superoperator dissipator_superoperator(const Eigen::MatrixXd& rates);

/// Projector |level><level| of dimension n.
DensityMatrix pure_state(int n, int level);

double trace_error(const DensityMatrix& rho);
double hermiticity_residual(const DensityMatrix& rho);
double min_eigenvalue(const DensityMatrix& rho);
double purity(const DensityMatrix& rho);

}  // namespace qcoop
