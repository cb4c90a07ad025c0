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

#include <span>
#include <vector>

#include "qcoop/field.hpp"
#include "qcoop/system.hpp"

namespace qcoop {

struct InvariantTolerances {
  double trace = 1e-9;
  double hermiticity = 1e-10;
  double min_eigenvalue = -1e-8;
};

/// Frame the RK4 integrator works in. Results are always returned in the
/// lab frame. The interaction frame (rotating with H0) keeps a pure state
/// positive to ~1e-12 at dt = 0.01 fs; the lab frame loses ~4e-7.
enum class Frame { interaction, lab };

struct PropagationConfig {
  double dt = 0.01;        ///< fs
  Frame frame = Frame::interaction;
  double horizon = 200.0;  ///< T_f, fs
  /// Snapshot stride in steps; 0 keeps only the initial and final states.
  long store_every = 0;
  /// Eigenvalue check on every stored snapshot (and the final state).
  bool check_positivity = true;
  InvariantTolerances tolerances;

  /// dt must be positive, at most 0.05 fs, and divide the horizon.
  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  DensityMatrix final_state;
};

/// Right-hand side of the master equation
///   d rho_{ll'}/dt = -i (eps_l - eps_l') rho_{ll'}
///                    - i E(t) sum_n (mu_ln rho_nl' - rho_ln mu_nl')
///                    + gamma F{rho}_{ll'}
/// with the dipole and rate matrices stored sparsely. State layout is
/// row-major: element (l, l') at l * N + l'.
class LindbladGenerator {
 public:
  LindbladGenerator(const LevelSystem& system, const Decoherence& gamma);

  int n_levels() const { return n_; }

  void derivative(std::span<const cplx> rho, double field,
                  std::span<cplx> out) const;
  DensityMatrix derivative(const DensityMatrix& rho, double field) const;

  /// Same equation for rho_I = exp(iH0 t) rho exp(-iH0 t). Only the upper
  /// triangle of rho is read; the output is Hermitian.
  void interaction_derivative(std::span<const cplx> rho, double field,
                              double t, std::span<cplx> out) const;

  /// Number of stored dipole entries (size of a coupling table).
  std::size_t coupling_size() const { return dipole_entries_.size(); }
  /// mu_I(t) entries, exp(i (eps_l - eps_k) t) mu_lk, in storage order.
  void rotating_dipole(double t, std::span<cplx> out) const;
  /// Interaction-frame right-hand side with -i E(t) mu_I(t) given as
  /// `coupling` (storage order). Upper triangle in, Hermitian out.
  void apply_coupling(std::span<const cplx> rho, std::span<const cplx> coupling,
                      std::span<cplx> out) const;
  /// Tabulates rotating_dipole on the half-step grid of (dt, steps) so that
  /// repeated propagations on that grid skip the trigonometry. Not
  /// thread-safe; call before sharing the generator.
  void tabulate(double dt, long steps);
  /// Tabulated mu_I at half-step index k, or empty if (dt, steps) differs.
  std::span<const cplx> tabulated(double dt, long steps, long k) const;

  /// Maps rho_I(t) to rho(t) in place: rho_{lm} *= exp(-i (eps_l - eps_m) t).
  void to_lab(std::span<cplx> rho, double t) const;

 private:
  struct Entry {
    int col;
    double value;
  };
  struct Gain {
    int to;
    int from;
    double rate;
  };

  int n_;
  std::vector<double> energies_;
  std::vector<double> decay_;         // decay_ll'
  std::vector<cplx> diagonal_;        // -i w_ll' - decay_ll'
  std::vector<int> dipole_offsets_;   // CSR row offsets into dipole_entries_
  std::vector<Entry> dipole_entries_;
  std::vector<int> dipole_rows_;      // row of each entry
  // Upper-triangle commutator terms: out[o] += c[p] * rho[r] (left) and
  // out[o] += rho[r] * conj(c[p]) (right).
  struct Term {
    int out;
    int coupling;
    int rho;
  };
  std::vector<Term> left_terms_;
  std::vector<Term> right_terms_;
  std::vector<int> upper_;            // flat indices with l <= m
  std::vector<cplx> table_;
  double table_dt_ = 0.0;
  long table_steps_ = 0;
  std::vector<Gain> gains_;
};

/// Single evaluation of the master-equation right-hand side at time t.
DensityMatrix derivative(const LevelSystem& system, const ControlField& field,
                         const Decoherence& gamma, const DensityMatrix& rho,
                         double t);

/// Classical fixed-step RK4 over [0, cfg.horizon]. Trace and Hermiticity are
/// checked after every step, positivity on stored snapshots; a breach throws
/// PropagationDiverged naming the step.
Trajectory propagate(const LevelSystem& system, const ControlField& field,
                     const Decoherence& gamma, const DensityMatrix& rho0,
                     const PropagationConfig& cfg = {});

/// Fast path: final state only, driven by field values on the half-step grid
/// (see sample_half_steps / CarrierBasis). An empty span means E = 0.
DensityMatrix propagate_final(const LindbladGenerator& generator,
                              std::span<const double> half_step_field,
                              const DensityMatrix& rho0,
                              const PropagationConfig& cfg = {});

/// Population of the target state, Tr[rho |f><f|], as a fraction.
double outcome(const DensityMatrix& rho, const LevelSystem& system);

/// Field-free generator -i[H0, .] + gamma F as an explicit superoperator.
Superoperator free_superoperator(const LevelSystem& system,
                                 const Decoherence& gamma);

/// Field-free propagation by the matrix exponential of the free generator:
/// vec(rho(T)) = exp(L T) vec(rho0). Exact for E = 0.
DensityMatrix superop_propagate_oracle(const LevelSystem& system,
                                       const Decoherence& gamma,
                                       const DensityMatrix& rho0,
                                       double horizon = 200.0);

}  // namespace qcoop
