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

#include "qcoop/lindblad.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "qcoop/error.hpp"

namespace qcoop {

namespace {

constexpr cplx kI{0.0, 1.0};

void to_flat(const DensityMatrix& rho, std::vector<cplx>& out) {
  const Eigen::Index n = rho.rows();
  out.resize(static_cast<std::size_t>(n * n));
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index m = 0; m < n; ++m)
      out[static_cast<std::size_t>(l * n + m)] = rho(l, m);
}

DensityMatrix from_flat(std::span<const cplx> flat, int n) {
  DensityMatrix rho(n, n);
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m) rho(l, m) = flat[static_cast<std::size_t>(l * n + m)];
  return rho;
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << v;
  return os.str();
}

// Cheap per-step checks: finiteness, trace, Hermiticity.
void check_step(std::span<const cplx> rho, int n, long step,
                const InvariantTolerances& tol) {
  cplx tr = 0.0;
  double herm = 0.0;
  for (int l = 0; l < n; ++l) {
    const cplx d = rho[static_cast<std::size_t>(l * n + l)];
    tr += d;
    herm = std::max(herm, std::abs(d.imag()) * 2.0);
    for (int m = l + 1; m < n; ++m) {
      const cplx a = rho[static_cast<std::size_t>(l * n + m)];
      const cplx b = rho[static_cast<std::size_t>(m * n + l)];
      herm = std::max(herm, std::abs(a - std::conj(b)));
    }
  }
  if (!std::isfinite(tr.real()) || !std::isfinite(tr.imag()) ||
      !std::isfinite(herm))
    throw PropagationDiverged(step, "non-finite density matrix");
  const double terr = std::abs(tr - cplx(1.0, 0.0));
  if (terr > tol.trace)
    throw PropagationDiverged(step, "trace error " + sci(terr));
  if (herm > tol.hermiticity)
    throw PropagationDiverged(step,
                              "Hermiticity residual " + sci(herm));
}

void check_positivity(const DensityMatrix& rho, long step,
                      const InvariantTolerances& tol) {
  const double ev = min_eigenvalue(rho);
  if (ev < tol.min_eigenvalue)
    throw PropagationDiverged(step,
                              "negative eigenvalue " + sci(ev));
}

void check_initial(const DensityMatrix& rho0, int n,
                   const InvariantTolerances& tol) {
  if (rho0.rows() != n || rho0.cols() != n)
    throw ConfigError("initial density matrix is " + std::to_string(rho0.rows()) +
                      "x" + std::to_string(rho0.cols()) + ", system has " +
                      std::to_string(n) + " levels");
  if (trace_error(rho0) > tol.trace || hermiticity_residual(rho0) > tol.hermiticity ||
      min_eigenvalue(rho0) < tol.min_eigenvalue)
    throw ConfigError("initial state is not a valid density matrix");
}

// Shared RK4 loop. `field(k)` returns E at half-step index k. `on_step`
// receives the state in the integration frame.
template <typename FieldAt, typename OnStep>
void rk4_loop(const LindbladGenerator& gen, Frame frame, std::vector<cplx>& y,
              long steps, double dt, const InvariantTolerances& tol,
              FieldAt field, OnStep on_step) {
  const int n = gen.n_levels();
  const std::size_t sz = y.size();
  std::vector<cplx> k1(sz), k2(sz), k3(sz), k4(sz), tmp(sz);
  const std::size_t nc = gen.coupling_size();
  std::vector<cplx> mu0(nc), mum(nc), mu1(nc), c0(nc), cm(nc), c1(nc);
  const double h2 = 0.5 * dt;
  const double h6 = dt / 6.0;
  const bool lab = frame == Frame::lab;
  auto scale = [&](std::span<const cplx> mu, double e, std::vector<cplx>& c) {
    const cplx ie(0.0, -e);
    for (std::size_t p = 0; p < nc; ++p) c[p] = ie * mu[p];
  };
  const bool tabulated = !lab && !gen.tabulated(dt, steps, 0).empty();
  if (!lab && !tabulated) gen.rotating_dipole(0.0, mu1);
  for (long s = 0; s < steps; ++s) {
    const double e0 = field(2 * s);
    const double em = field(2 * s + 1);
    const double e1 = field(2 * s + 2);
    if (lab) {
      gen.derivative(y, e0, k1);
    } else if (tabulated) {
      scale(gen.tabulated(dt, steps, 2 * s), e0, c0);
      scale(gen.tabulated(dt, steps, 2 * s + 1), em, cm);
      scale(gen.tabulated(dt, steps, 2 * s + 2), e1, c1);
      gen.apply_coupling(y, c0, k1);
    } else {
      std::swap(mu0, mu1);
      gen.rotating_dipole(dt * (static_cast<double>(s) + 0.5), mum);
      gen.rotating_dipole(dt * static_cast<double>(s + 1), mu1);
      scale(mu0, e0, c0);
      scale(mum, em, cm);
      scale(mu1, e1, c1);
      gen.apply_coupling(y, c0, k1);
    }
    for (std::size_t i = 0; i < sz; ++i) tmp[i] = y[i] + h2 * k1[i];
    if (lab) gen.derivative(tmp, em, k2); else gen.apply_coupling(tmp, cm, k2);
    for (std::size_t i = 0; i < sz; ++i) tmp[i] = y[i] + h2 * k2[i];
    if (lab) gen.derivative(tmp, em, k3); else gen.apply_coupling(tmp, cm, k3);
    for (std::size_t i = 0; i < sz; ++i) tmp[i] = y[i] + dt * k3[i];
    if (lab) gen.derivative(tmp, e1, k4); else gen.apply_coupling(tmp, c1, k4);
    for (std::size_t i = 0; i < sz; ++i)
      y[i] += h6 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    check_step(y, n, s + 1, tol);
    on_step(s + 1);
  }
}

}  // namespace

void PropagationConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (dt > 0.05) throw ConfigError("dt must not exceed 0.05 fs");
  if (store_every < 0) throw ConfigError("store_every must be >= 0");
  step_count(horizon, dt);
}

LindbladGenerator::LindbladGenerator(const LevelSystem& system,
                                     const Decoherence& gamma)
    : n_(system.n_levels()) {
  system.validate();
  const Eigen::MatrixXd r = effective_rates(system, gamma);
  const Eigen::VectorXd out = r.colwise().sum().transpose();
  energies_.assign(system.energies.data(), system.energies.data() + n_);
  diagonal_.resize(static_cast<std::size_t>(n_ * n_));
  decay_.resize(diagonal_.size());
  for (int l = 0; l < n_; ++l) {
    for (int m = 0; m < n_; ++m) {
      const double w = system.energies(l) - system.energies(m);
      const std::size_t lm = static_cast<std::size_t>(l * n_ + m);
      decay_[lm] = 0.5 * (out(l) + out(m));
      diagonal_[lm] = cplx(-decay_[lm], -w);
    }
  }
  dipole_offsets_.push_back(0);
  for (int l = 0; l < n_; ++l) {
    for (int k = 0; k < n_; ++k) {
      if (system.dipole(l, k) != 0.0) {
        dipole_entries_.push_back({k, system.dipole(l, k)});
        dipole_rows_.push_back(l);
      }
    }
    dipole_offsets_.push_back(static_cast<int>(dipole_entries_.size()));
  }
  for (int l = 0; l < n_; ++l)
    for (int k = 0; k < n_; ++k)
      if (r(l, k) != 0.0) gains_.push_back({l, k, r(l, k)});
  for (int l = 0; l < n_; ++l) {
    for (int m = l; m < n_; ++m) {
      const int lm = l * n_ + m;
      upper_.push_back(lm);
      for (int p = dipole_offsets_[static_cast<std::size_t>(l)];
           p < dipole_offsets_[static_cast<std::size_t>(l) + 1]; ++p)
        left_terms_.push_back(
            {lm, p, dipole_entries_[static_cast<std::size_t>(p)].col * n_ + m});
      for (int p = dipole_offsets_[static_cast<std::size_t>(m)];
           p < dipole_offsets_[static_cast<std::size_t>(m) + 1]; ++p)
        right_terms_.push_back(
            {lm, p, l * n_ + dipole_entries_[static_cast<std::size_t>(p)].col});
    }
  }
}

void LindbladGenerator::derivative(std::span<const cplx> rho, double field,
                                   std::span<cplx> out) const {
  const int n = n_;
  const cplx ie = -kI * field;
  for (int l = 0; l < n; ++l) {
    const int lb = dipole_offsets_[static_cast<std::size_t>(l)];
    const int le = dipole_offsets_[static_cast<std::size_t>(l) + 1];
    for (int m = 0; m < n; ++m) {
      const std::size_t lm = static_cast<std::size_t>(l * n + m);
      cplx comm = 0.0;
      // (mu rho)_{lm}
      for (int p = lb; p < le; ++p) {
        const Entry& e = dipole_entries_[static_cast<std::size_t>(p)];
        comm += e.value * rho[static_cast<std::size_t>(e.col * n + m)];
      }
      // -(rho mu)_{lm}, mu symmetric so row m holds column m
      const int mb = dipole_offsets_[static_cast<std::size_t>(m)];
      const int me = dipole_offsets_[static_cast<std::size_t>(m) + 1];
      for (int p = mb; p < me; ++p) {
        const Entry& e = dipole_entries_[static_cast<std::size_t>(p)];
        comm -= rho[static_cast<std::size_t>(l * n + e.col)] * e.value;
      }
      out[lm] = diagonal_[lm] * rho[lm] + ie * comm;
    }
  }
  for (const Gain& g : gains_) {
    out[static_cast<std::size_t>(g.to * n + g.to)] +=
        g.rate * rho[static_cast<std::size_t>(g.from * n + g.from)];
  }
}

void LindbladGenerator::rotating_dipole(double t, std::span<cplx> out) const {
  for (std::size_t p = 0; p < dipole_entries_.size(); ++p) {
    const Entry& e = dipole_entries_[p];
    const double w = energies_[static_cast<std::size_t>(dipole_rows_[p])] -
                     energies_[static_cast<std::size_t>(e.col)];
    out[p] = std::polar(e.value, w * t);
  }
}

void LindbladGenerator::tabulate(double dt, long steps) {
  const std::size_t nc = dipole_entries_.size();
  table_.resize(nc * static_cast<std::size_t>(2 * steps + 1));
  for (long k = 0; k <= 2 * steps; ++k)
    rotating_dipole(0.5 * dt * static_cast<double>(k),
                    std::span<cplx>(table_).subspan(static_cast<std::size_t>(k) * nc, nc));
  table_dt_ = dt;
  table_steps_ = steps;
}

std::span<const cplx> LindbladGenerator::tabulated(double dt, long steps,
                                                   long k) const {
  if (table_.empty() || dt != table_dt_ || steps != table_steps_) return {};
  const std::size_t nc = dipole_entries_.size();
  return std::span<const cplx>(table_).subspan(static_cast<std::size_t>(k) * nc, nc);
}

void LindbladGenerator::apply_coupling(std::span<const cplx> rho,
                                       std::span<const cplx> coupling,
                                       std::span<cplx> out) const {
  // out = c rho - rho c^dagger with c = -i E mu_I, so that the result is
  // -i E [mu_I, rho]. The lower triangle is mirrored from the upper one, so
  // RK4 stage states stay exactly Hermitian.
  const int n = n_;
  const cplx* r = rho.data();
  const cplx* cp = coupling.data();
  cplx* o = out.data();
  for (int lm : upper_) o[lm] = -decay_[static_cast<std::size_t>(lm)] * r[lm];
  for (const Term& t : left_terms_) o[t.out] += cp[t.coupling] * r[t.rho];
  for (const Term& t : right_terms_)
    o[t.out] += r[t.rho] * std::conj(cp[t.coupling]);
  for (const Gain& g : gains_) {
    out[static_cast<std::size_t>(g.to * n + g.to)] +=
        g.rate * rho[static_cast<std::size_t>(g.from * n + g.from)];
  }
  for (int l = 0; l < n; ++l) {
    cplx& d = out[static_cast<std::size_t>(l * n + l)];
    d = cplx(d.real(), 0.0);
    for (int m = l + 1; m < n; ++m)
      out[static_cast<std::size_t>(m * n + l)] =
          std::conj(out[static_cast<std::size_t>(l * n + m)]);
  }
}

void LindbladGenerator::interaction_derivative(std::span<const cplx> rho,
                                              double field, double t,
                                              std::span<cplx> out) const {
  std::vector<cplx> c(dipole_entries_.size());
  rotating_dipole(t, c);
  for (cplx& v : c) v *= -kI * field;
  apply_coupling(rho, c, out);
}

void LindbladGenerator::to_lab(std::span<cplx> rho, double t) const {
  for (int l = 0; l < n_; ++l)
    for (int m = 0; m < n_; ++m)
      if (l != m)
        rho[static_cast<std::size_t>(l * n_ + m)] *= std::polar(
            1.0, -(energies_[static_cast<std::size_t>(l)] -
                   energies_[static_cast<std::size_t>(m)]) * t);
}

DensityMatrix LindbladGenerator::derivative(const DensityMatrix& rho,
                                            double field) const {
  if (rho.rows() != n_ || rho.cols() != n_)
    throw ConfigError("density matrix dimension mismatch");
  std::vector<cplx> in, out(static_cast<std::size_t>(n_ * n_));
  to_flat(rho, in);
  derivative(in, field, out);
  return from_flat(out, n_);
}

DensityMatrix derivative(const LevelSystem& system, const ControlField& field,
                         const Decoherence& gamma, const DensityMatrix& rho,
                         double t) {
  return LindbladGenerator(system, gamma).derivative(rho, field.evaluate(t));
}

Trajectory propagate(const LevelSystem& system, const ControlField& field,
                     const Decoherence& gamma, const DensityMatrix& rho0,
                     const PropagationConfig& cfg) {
  cfg.validate();
  field.validate();
  const LindbladGenerator gen(system, gamma);
  const int n = gen.n_levels();
  check_initial(rho0, n, cfg.tolerances);
  const long steps = step_count(cfg.horizon, cfg.dt);

  ControlField f = field;
  f.horizon = cfg.horizon;
  const std::vector<double> samples = sample_half_steps(f, cfg.dt);

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(rho0);
  std::vector<cplx> y;
  to_flat(rho0, y);
  std::vector<cplx> lab(y.size());
  rk4_loop(gen, cfg.frame, y, steps, cfg.dt, cfg.tolerances,
           [&](long k) { return samples[static_cast<std::size_t>(k)]; },
           [&](long step) {
             const bool stride = cfg.store_every > 0 && step % cfg.store_every == 0;
             if (stride || step == steps) {
               lab = y;
               if (cfg.frame == Frame::interaction)
                 gen.to_lab(lab, cfg.dt * static_cast<double>(step));
               DensityMatrix rho = from_flat(lab, n);
               if (cfg.check_positivity) check_positivity(rho, step, cfg.tolerances);
               traj.times.push_back(cfg.dt * static_cast<double>(step));
               traj.states.push_back(std::move(rho));
             }
           });
  traj.final_state = traj.states.back();
  return traj;
}

DensityMatrix propagate_final(const LindbladGenerator& gen,
                              std::span<const double> half_step_field,
                              const DensityMatrix& rho0,
                              const PropagationConfig& cfg) {
  cfg.validate();
  const int n = gen.n_levels();
  check_initial(rho0, n, cfg.tolerances);
  const long steps = step_count(cfg.horizon, cfg.dt);
  const bool free = half_step_field.empty();
  if (!free && half_step_field.size() != static_cast<std::size_t>(2 * steps + 1))
    throw ConfigError("field samples do not match the half-step grid");
  std::vector<cplx> y;
  to_flat(rho0, y);
  rk4_loop(gen, cfg.frame, y, steps, cfg.dt, cfg.tolerances,
           [&](long k) {
             return free ? 0.0 : half_step_field[static_cast<std::size_t>(k)];
           },
           [](long) {});
  if (cfg.frame == Frame::interaction) gen.to_lab(y, cfg.horizon);
  DensityMatrix rho = from_flat(y, n);
  if (cfg.check_positivity) check_positivity(rho, steps, cfg.tolerances);
  return rho;
}

double outcome(const DensityMatrix& rho, const LevelSystem& system) {
  const int f = system.target_state;
  if (f < 0 || f >= rho.rows()) throw ConfigError("target state out of range");
  return rho(f, f).real();
}

Superoperator free_superoperator(const LevelSystem& system,
                                 const Decoherence& gamma) {
  system.validate();
  const int n = system.n_levels();
  Superoperator s = dissipator_superoperator(system, gamma);
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      s.matrix(l * n + m, l * n + m) +=
          -kI * (system.energies(l) - system.energies(m));
  return s;
}

DensityMatrix superop_propagate_oracle(const LevelSystem& system,
                                       const Decoherence& gamma,
                                       const DensityMatrix& rho0,
                                       double horizon) {
  const Superoperator s = free_superoperator(system, gamma);
  const Eigen::MatrixXcd prop = (s.matrix * horizon).exp();
  return unvectorize(prop * vectorize(rho0));
}

}  // namespace qcoop
