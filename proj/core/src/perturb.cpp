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

#include "qcoop/perturb.hpp"

#include <cmath>
#include <string>

#include "qcoop/error.hpp"
#include "qcoop/expm.hpp"

namespace qcoop::perturb {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// x^k / k! as a running product.
double power_over_factorial(double x, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= x / static_cast<double>(i);
  return r;
}

// Path sum with lambda and the already-scaled rung rates.
std::vector<PathTerm> paths(const LadderSpec& ladder,
                            const EffectiveCoupling& coupling, double lambda,
                            const std::vector<double>& rung_rates) {
  const int n = ladder.n_rungs();
  if (coupling.n_rungs() != n)
    throw ConfigError("coupling and ladder disagree on the rung count");
  const double tf = ladder.horizon;
  const double t0n = coupling.transition_element(0, n);
  std::vector<PathTerm> out;
  out.reserve(std::size_t{1} << n);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    PathTerm p;
    double w = 1.0;
    double ratio = 1.0;
    int start = 0;
    for (int k = 1; k <= n; ++k) {
      if (!(mask & (1u << (k - 1)))) continue;
      p.decoherent_rungs.push_back(k);
      const int s = (k - 1) - start;
      const double t = coupling.transition_element(start, k - 1);
      w *= central_binomial(s) * t * t * rung_rates[static_cast<std::size_t>(k - 1)];
      const double om = coupling.omega[static_cast<std::size_t>(k - 1)];
      if (om == 0.0) {
        p.has_ratio_form = false;
      } else {
        ratio *= central_binomial(s) * rung_rates[static_cast<std::size_t>(k - 1)] /
                 (om * om);
      }
      start = k;
    }
    const int s = n - start;
    const double t = coupling.transition_element(start, n);
    w *= central_binomial(s) * t * t;
    ratio *= central_binomial(s);

    const int m = static_cast<int>(p.decoherent_rungs.size());
    const double scale =
        power_over_factorial(tf, 2 * n - m) * std::pow(lambda, 2 * (n - m));
    p.weight = w * scale;
    p.ratio_weight = p.has_ratio_form ? t0n * t0n * ratio * scale : 0.0;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<double> scaled_rates(const LadderSpec& ladder, double gamma) {
  std::vector<double> r = ladder.rates;
  for (double& x : r) x *= gamma;
  return r;
}

double sum_weights(const std::vector<PathTerm>& terms) {
  double o = 0.0;
  for (const auto& p : terms) o += p.weight;
  return o;
}

Estimate estimate(double v) { return {v, v < kValidityLimit}; }

void check_rung(const LadderSpec& ladder, int rung) {
  if (rung < 1 || rung > ladder.n_rungs())
    throw ConfigError("rung " + std::to_string(rung) + " out of range [1, " +
                      std::to_string(ladder.n_rungs()) + "]");
}

}  // namespace

double central_binomial(int m) {
  double c = 1.0;
  for (int i = 1; i <= m; ++i)
    c = c * static_cast<double>(m + i) / static_cast<double>(i);
  return c;
}

void LadderSpec::validate() const {
  const std::size_t n = frequencies.size();
  if (n < 1) throw ConfigError("ladder needs at least one rung");
  if (dipoles.size() != n || rates.size() != n || amplitudes.size() != n ||
      phases.size() != n)
    throw ConfigError("ladder vectors must all have one entry per rung");
  for (std::size_t k = 0; k < n; ++k) {
    if (!(frequencies[k] > 0.0)) throw ConfigError("rung frequencies must be positive");
    if (!(rates[k] >= 0.0)) throw ConfigError("rung rates must be >= 0");
    if (!(amplitudes[k] >= 0.0)) throw ConfigError("rung amplitudes must be >= 0");
    for (std::size_t j = 0; j < k; ++j)
      if (frequencies[j] == frequencies[k])
        throw ConfigError("rung frequencies must be distinct");
  }
  if (!(width > 0.0) || !(horizon > 0.0))
    throw ConfigError("ladder pulse width and horizon must be positive");
}

ControlField LadderSpec::field() const {
  ControlField f = ControlField::on_carriers(frequencies, center_time, width, horizon);
  for (std::size_t k = 0; k < f.components.size(); ++k) {
    f.components[k].amplitude = amplitudes[k];
    f.components[k].phase = phases[k];
  }
  return f;
}

LevelSystem LadderSpec::system() const {
  validate();
  const int n = n_rungs();
  LevelSystem s;
  s.name = "ladder" + std::to_string(n);
  s.energies = Eigen::VectorXd::Zero(n + 1);
  s.dipole = Eigen::MatrixXd::Zero(n + 1, n + 1);
  s.gamma_rates = Eigen::MatrixXd::Zero(n + 1, n + 1);
  s.rate_groups = Eigen::MatrixXi::Zero(n + 1, n + 1);
  for (int k = 1; k <= n; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    s.energies(k) = s.energies(k - 1) + frequencies[i];
    s.dipole(k, k - 1) = s.dipole(k - 1, k) = dipoles[i];
    s.gamma_rates(k, k - 1) = s.gamma_rates(k - 1, k) = rates[i];
  }
  s.initial_state = 0;
  s.target_state = n;
  return s;
}

double LadderSpec::effective_duration() const {
  return qcoop::effective_duration(center_time, width, horizon);
}

LadderSpec LadderSpec::from_system(const LevelSystem& system,
                                   const ControlField& field) {
  system.validate();
  const int n = system.n_levels() - 1;
  const auto trans = system.transitions();
  if (static_cast<int>(trans.size()) != n || system.initial_state != 0 ||
      system.target_state != n)
    throw ConfigError("system " + system.name + " is not a nearest-neighbour ladder");
  if (field.components.size() != trans.size())
    throw ConfigError("field must carry one component per ladder rung");
  LadderSpec l;
  for (int k = 1; k <= n; ++k) {
    const auto& t = trans[static_cast<std::size_t>(k - 1)];
    if (t.lower != k - 1 || t.upper != k)
      throw ConfigError("system " + system.name + " is not a nearest-neighbour ladder");
    l.frequencies.push_back(t.frequency);
    l.dipoles.push_back(t.dipole);
    l.rates.push_back(system.gamma_rates(k, k - 1));
    l.amplitudes.push_back(field.components[static_cast<std::size_t>(k - 1)].amplitude);
    l.phases.push_back(field.components[static_cast<std::size_t>(k - 1)].phase);
  }
  l.center_time = field.center_time;
  l.width = field.width;
  l.horizon = field.horizon;
  return l;
}

double EffectiveCoupling::transition_element(int m, int n) const {
  if (m < 0 || n > n_rungs() || m > n)
    throw ConfigError("transition element indices out of range");
  double t = 1.0;
  for (int k = m + 1; k <= n; ++k) t *= omega[static_cast<std::size_t>(k - 1)];
  return t;
}

EffectiveCoupling magnus_w(const LadderSpec& ladder) {
  ladder.validate();
  const int n = ladder.n_rungs();
  const ControlField f = ladder.field();
  EffectiveCoupling c;
  c.w = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int k = 1; k <= n; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    const double mu = ladder.dipoles[i];
    const double w = ladder.frequencies[i];
    // omega_{k,k-1} = eps_{k-1} - eps_k = -w
    c.w(k, k - 1) = mu * analytic_spectrum(f, -w) / ladder.horizon;
    c.w(k - 1, k) = mu * analytic_spectrum(f, w) / ladder.horizon;
    c.omega.push_back(std::abs(c.w(k, k - 1)));
  }
  return c;
}

Eigen::MatrixXd rwa_hamiltonian(const LadderSpec& ladder) {
  ladder.validate();
  const int n = ladder.n_rungs();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int k = 1; k <= n; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    h(k, k - 1) = h(k - 1, k) = ladder.dipoles[i] * ladder.amplitudes[i];
  }
  return h;
}

EffectiveCoupling rwa_coupling(const LadderSpec& ladder) {
  const Eigen::MatrixXd h = rwa_hamiltonian(ladder);
  const double ratio = ladder.effective_duration() / ladder.horizon;
  EffectiveCoupling c;
  c.w = (h * ratio).cast<std::complex<double>>();
  for (int k = 1; k <= ladder.n_rungs(); ++k) c.omega.push_back(std::abs(h(k, k - 1)) * ratio);
  return c;
}

Estimate field_only_yield(const LadderSpec& ladder,
                          const EffectiveCoupling& coupling, double lambda) {
  const int n = ladder.n_rungs();
  const double amp = std::pow(lambda, n) * power_over_factorial(ladder.horizon, n) *
                     coupling.transition_element(0, n);
  return estimate(amp * amp);
}

Estimate decoherence_only_yield(const LadderSpec& ladder, double gamma) {
  const int n = ladder.n_rungs();
  double o = std::pow(gamma, n) * power_over_factorial(ladder.horizon, n);
  for (double r : ladder.rates) o *= r;
  return estimate(o);
}

std::vector<PathTerm> path_terms(const LadderSpec& ladder,
                                 const EffectiveCoupling& coupling,
                                 double lambda, double gamma) {
  ladder.validate();
  return paths(ladder, coupling, lambda, scaled_rates(ladder, gamma));
}

Estimate combined_yield(const LadderSpec& ladder,
                        const EffectiveCoupling& coupling, double lambda) {
  return combined_yield(ladder, coupling, lambda, lambda * lambda);
}

Estimate combined_yield(const LadderSpec& ladder,
                        const EffectiveCoupling& coupling, double lambda,
                        double gamma) {
  return estimate(sum_weights(path_terms(ladder, coupling, lambda, gamma)));
}

Superoperator coupling_superoperator(const EffectiveCoupling& coupling) {
  const Eigen::Index n = coupling.w.rows();
  Superoperator s;
  s.matrix = Eigen::MatrixXcd::Zero(n * n, n * n);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index m = 0; m < n; ++m) {
      for (Eigen::Index k = 0; k < n; ++k) {
        s.matrix(l * n + m, k * n + m) += coupling.w(l, k);
        s.matrix(l * n + m, l * n + k) -= coupling.w(k, m);
      }
    }
  }
  return s;
}

DensityMatrix superop_exponential_oracle(const LadderSpec& ladder,
                                         const EffectiveCoupling& coupling,
                                         double lambda, double gamma) {
  const LevelSystem sys = ladder.system();
  const Eigen::MatrixXcd gen =
      kI * lambda * coupling_superoperator(coupling).matrix +
      dissipator_superoperator(sys, Decoherence(gamma)).matrix;
  const int n = sys.n_levels();
  const Eigen::VectorXcd v0 = vectorize(pure_state(n, 0));
  return unvectorize(expm_action(gen, v0, ladder.horizon));
}

double oracle_yield(const LadderSpec& ladder, const EffectiveCoupling& coupling,
                    double lambda, double gamma) {
  const DensityMatrix rho = superop_exponential_oracle(ladder, coupling, lambda, gamma);
  return rho(ladder.n_rungs(), ladder.n_rungs()).real();
}

double lab_frame_yield(const LadderSpec& ladder, double lambda, double gamma,
                       const PropagationConfig& prop) {
  LadderSpec scaled = ladder;
  for (double& a : scaled.amplitudes) a *= 2.0 * lambda;
  PropagationConfig cfg = prop;
  cfg.horizon = ladder.horizon;
  return yield_of(scaled.field(), scaled.system(), Decoherence(gamma), cfg);
}

IdentityCheck coherent_identity(const LadderSpec& ladder,
                                const EffectiveCoupling& coupling, int n, int m) {
  const int top = ladder.n_rungs();
  if (n < 0 || m < 0 || n + m > top)
    throw ConfigError("identity indices need 0 <= n, m and n + m <= N");
  const Eigen::Index dim = top + 1;
  const Eigen::MatrixXcd op = kI * coupling_superoperator(coupling).matrix;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim * dim);
  v(n * dim + n) = 1.0;
  for (int i = 0; i < 2 * m; ++i) v = op * v;
  const double t = coupling.transition_element(n, n + m);
  return {v((n + m) * dim + (n + m)), central_binomial(m) * t * t};
}

IdentityCheck decoherent_identity(const LadderSpec& ladder, int n, int m) {
  const int top = ladder.n_rungs();
  if (n < 0 || m < 0 || n + m > top)
    throw ConfigError("identity indices need 0 <= n, m and n + m <= N");
  const Eigen::Index dim = top + 1;
  const Eigen::MatrixXcd op =
      dissipator_superoperator(ladder.system(), Decoherence(1.0)).matrix;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim * dim);
  v(n * dim + n) = 1.0;
  for (int i = 0; i < m; ++i) v = op * v;
  double rhs = 1.0;
  for (int k = 1; k <= m; ++k) rhs *= ladder.rates[static_cast<std::size_t>(n + k - 1)];
  return {v((n + m) * dim + (n + m)), rhs};
}

LiouvilleIdentities liouville_identity_check(const LadderSpec& ladder,
                                             const EffectiveCoupling& coupling,
                                             int n, int m) {
  return {coherent_identity(ladder, coupling, n, m), decoherent_identity(ladder, n, m)};
}

double rwa_yield(const LadderSpec& ladder, double gamma) {
  return combined_yield(ladder, rwa_coupling(ladder), 1.0, gamma).value;
}

Decomposition decompose_and_optimize(const LadderSpec& ladder, double gamma,
                                     int rung, const CostParams& params) {
  ladder.validate();
  params.validate();
  check_rung(ladder, rung);
  const auto j = static_cast<std::size_t>(rung - 1);

  // O is affine in A_j^2 (with gamma_j = 0) and in gamma_j (with A_j = 0);
  // each slope comes from two evaluations of the path sum.
  auto yield_at = [&](double amp_sq, double rung_rate) {
    LadderSpec l = ladder;
    l.amplitudes[j] = std::sqrt(amp_sq);
    std::vector<double> rates = scaled_rates(l, gamma);
    rates[j] = rung_rate;
    return sum_weights(paths(l, rwa_coupling(l), 1.0, rates));
  };

  Decomposition d;
  d.rung = rung;
  d.rung_rate = gamma * ladder.rates[j];
  d.f1 = (yield_at(2.0, 0.0) - yield_at(1.0, 0.0)) / (2.0 - 1.0);
  d.f2 = (yield_at(0.0, 2.0) - yield_at(0.0, 1.0)) / (2.0 - 1.0);
  if (d.f1 == 0.0)
    throw NoControlAuthority("rung " + std::to_string(rung) +
                             " has no coherent control authority (F1 = 0)");
  const double a2 = (params.target_yield - params.fluence_weight / (2.0 * d.f1) -
                     d.rung_rate * d.f2) /
                    d.f1;
  d.clamped = a2 < 0.0;
  d.amplitude_sq_optimal = d.clamped ? 0.0 : a2;
  d.amplitude_optimal = std::sqrt(d.amplitude_sq_optimal);
  return d;
}

std::vector<SweepRow> convergence_sweep(const LadderSpec& ladder,
                                        const EffectiveCoupling& coupling,
                                        const std::vector<double>& lambdas,
                                        bool cooperative) {
  std::vector<SweepRow> rows;
  for (double lam : lambdas) {
    SweepRow r;
    r.lambda = lam;
    r.gamma = cooperative ? lam * lam : 0.0;
    r.perturbative = combined_yield(ladder, coupling, lam, r.gamma).value;
    r.oracle = oracle_yield(ladder, coupling, lam, r.gamma);
    r.rel_error = r.oracle != 0.0 ? std::abs(r.perturbative - r.oracle) / std::abs(r.oracle)
                                  : std::abs(r.perturbative);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace qcoop::perturb
