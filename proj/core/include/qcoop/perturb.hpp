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

// Weak-field / weak-decoherence theory for an (N+1)-level ladder driven from
// |0> to |N>: first-order Magnus coupling, RWA Hamiltonian, lowest-order
// yields, and the exact superoperator exponential they approximate.
//
// Rungs are numbered k = 1..N; rung k couples levels k-1 and k with dipole
// mu_k, relative decoherence rate gamma_k = Gamma_{k,k-1} = Gamma_{k-1,k},
// carrier omega_k, amplitude A_k and phase theta_k. Vectors below store rung
// k at index k-1.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qcoop/field.hpp"
#include "qcoop/ga.hpp"
#include "qcoop/lindblad.hpp"
#include "qcoop/system.hpp"

namespace qcoop::perturb {

struct LadderSpec {
  std::vector<double> frequencies;
  std::vector<double> dipoles;
  std::vector<double> rates;
  std::vector<double> amplitudes;
  std::vector<double> phases;
  double center_time = 100.0;
  double width = 30.0;
  double horizon = 200.0;  ///< T_f

  int n_rungs() const { return static_cast<int>(frequencies.size()); }
  void validate() const;

  /// Field with one resonant carrier per rung.
  ControlField field() const;
  /// Equivalent lab-frame system (energies are cumulative rung frequencies,
  /// symmetric nearest-neighbour dipoles and rates, target |N>).
  LevelSystem system() const;
  double effective_duration() const;

  /// Ladder view of a nearest-neighbour chain system and a field whose
  /// components follow the system's transitions() order.
  static LadderSpec from_system(const LevelSystem& system,
                                const ControlField& field);
};

/// Time-averaged interaction-picture coupling W and its ladder magnitudes.
struct EffectiveCoupling {
  Eigen::MatrixXcd w;          ///< (N+1) x (N+1)
  std::vector<double> omega;   ///< Omega_k = |W_{k,k-1}|

  int n_rungs() const { return static_cast<int>(omega.size()); }
  /// T_{mn} = prod_{k=m+1..n} Omega_k (1 for m == n).
  double transition_element(int m, int n) const;
};

/// W_kj = mu_kj eps(omega_kj) / T_f with omega_kj = eps_j - eps_k and eps
/// the analytic pulse spectrum.
EffectiveCoupling magnus_w(const LadderSpec& ladder);

/// Coupling of the RWA Hamiltonian averaged over the horizon,
/// W = H_F T_e / T_f, so Omega_k = mu_k A_k T_e / T_f exactly.
EffectiveCoupling rwa_coupling(const LadderSpec& ladder);

/// Real symmetric tridiagonal H_F with (H_F)_{k,k-1} = mu_k A_k.
Eigen::MatrixXd rwa_hamiltonian(const LadderSpec& ladder);

/// A perturbative estimate and whether it lies in the regime where the
/// lowest-order term dominates (predicted yield below 1e-2).
struct Estimate {
  double value = 0.0;
  bool within_validity = true;
};

inline constexpr double kValidityLimit = 1e-2;

/// lambda^{2N} T_f^{2N} / (N!)^2 T_{0N}^2.
Estimate field_only_yield(const LadderSpec& ladder,
                          const EffectiveCoupling& coupling, double lambda);

/// gamma^N T_f^N / N! prod_k gamma_k.
Estimate decoherence_only_yield(const LadderSpec& ladder, double gamma);

/// One path of the lowest-order expansion: the rungs crossed by a
/// decoherence jump (ascending, 1-based); every other rung is crossed
/// coherently.
struct PathTerm {
  std::vector<int> decoherent_rungs;
  double weight = 0.0;        ///< division-free form
  bool has_ratio_form = true; ///< false when some Omega_k of a decoherent rung is 0
  double ratio_weight = 0.0;  ///< T_0N^2 * prod gamma_k / Omega_k^2 form
};

/// All 2^N path terms with field scale lambda and decoherence scale gamma:
/// a path with m decoherent rungs carries lambda^{2(N-m)} gamma^m.
std::vector<PathTerm> path_terms(const LadderSpec& ladder,
                                 const EffectiveCoupling& coupling,
                                 double lambda, double gamma);

/// Cooperative regime gamma = lambda^2, where every path is O(lambda^{2N}).
Estimate combined_yield(const LadderSpec& ladder,
                        const EffectiveCoupling& coupling, double lambda);

/// Same path sum with independent field and decoherence scales.
Estimate combined_yield(const LadderSpec& ladder,
                        const EffectiveCoupling& coupling, double lambda,
                        double gamma);

/// rho -> [W, rho] as an explicit superoperator.
Superoperator coupling_superoperator(const EffectiveCoupling& coupling);

/// vec(rho(T_f)) = exp[(i lambda E + gamma F) T_f] vec(|0><0|), with F the
/// ladder's full dissipator.
DensityMatrix superop_exponential_oracle(const LadderSpec& ladder,
                                         const EffectiveCoupling& coupling,
                                         double lambda, double gamma);

/// <<N N| ... |0 0>> of the oracle.
double oracle_yield(const LadderSpec& ladder, const EffectiveCoupling& coupling,
                    double lambda, double gamma);

/// Full lab-frame RK4 yield for the same ladder. Under the two-sided
/// spectrum normalization the Magnus coupling lambda * W(A) corresponds to a
/// lab field of amplitudes 2 lambda A_k.
double lab_frame_yield(const LadderSpec& ladder, double lambda, double gamma,
                       const PropagationConfig& prop = {});

struct IdentityCheck {
  std::complex<double> lhs;
  double rhs = 0.0;
};

/// <<n+m, n+m| (iE)^{2m} |n n>> against C(2m, m) T_{n,n+m}^2.
IdentityCheck coherent_identity(const LadderSpec& ladder,
                                const EffectiveCoupling& coupling, int n, int m);

/// <<n+m, n+m| F^m |n n>> against prod_{k=1..m} gamma_{n+k}.
IdentityCheck decoherent_identity(const LadderSpec& ladder, int n, int m);

struct LiouvilleIdentities {
  IdentityCheck coherent;
  IdentityCheck decoherent;
};

LiouvilleIdentities liouville_identity_check(const LadderSpec& ladder,
                                             const EffectiveCoupling& coupling,
                                             int n, int m);

/// O = A_j^2 F1j + gamma_j F2j for rung j and the amplitude minimizing
///   J(A_j) = (A_j^2 F1j + gamma_j F2j - O_T)^2 + alpha sum_k A_k^2.
struct Decomposition {
  int rung = 0;
  double f1 = 0.0;
  double f2 = 0.0;
  double rung_rate = 0.0;            ///< gamma_j = gamma * rates[j-1]
  double amplitude_sq_optimal = 0.0; ///< clamped at 0
  double amplitude_optimal = 0.0;
  bool clamped = false;
};

/// Uses the RWA coupling (so O is exactly affine in A_j^2 and gamma_j) with
/// lambda = 1 and rung rates gamma * rates. Throws NoControlAuthority when
/// F1j = 0.
Decomposition decompose_and_optimize(const LadderSpec& ladder, double gamma,
                                     int rung, const CostParams& params);

/// Yield of the path sum under the RWA coupling with lambda = 1 and rung
/// rates gamma * rates.
double rwa_yield(const LadderSpec& ladder, double gamma);

struct SweepRow {
  double lambda = 0.0;
  double gamma = 0.0;
  double perturbative = 0.0;
  double oracle = 0.0;
  double rel_error = 0.0;
};

/// Perturbative vs oracle yield for each lambda, with gamma = lambda^2 when
/// `cooperative`, else gamma = 0.
std::vector<SweepRow> convergence_sweep(const LadderSpec& ladder,
                                        const EffectiveCoupling& coupling,
                                        const std::vector<double>& lambdas,
                                        bool cooperative = true);

/// Central binomial coefficient C(2m, m).
double central_binomial(int m);

}  // namespace qcoop::perturb
