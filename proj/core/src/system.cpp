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

#include "qcoop/system.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "qcoop/error.hpp"

namespace qcoop {

namespace {

struct Link {
  int a;
  int b;
  double dipole;
  double rate;
};

LevelSystem make_system(std::string name, std::vector<double> energies,
                        const std::vector<Link>& links, int target) {
  const int n = static_cast<int>(energies.size());
  LevelSystem s;
  s.name = std::move(name);
  s.energies = Eigen::Map<Eigen::VectorXd>(energies.data(), n);
  s.dipole = Eigen::MatrixXd::Zero(n, n);
  s.gamma_rates = Eigen::MatrixXd::Zero(n, n);
  s.rate_groups = Eigen::MatrixXi::Zero(n, n);
  for (const Link& l : links) {
    s.dipole(l.a, l.b) = s.dipole(l.b, l.a) = l.dipole;
    s.gamma_rates(l.a, l.b) = s.gamma_rates(l.b, l.a) = l.rate;
  }
  s.initial_state = 0;
  s.target_state = target;
  return s;
}

// Ladder energies from consecutive transition frequencies.
std::vector<double> ladder_energies(const std::vector<double>& freqs) {
  std::vector<double> e{0.0};
  for (double w : freqs) e.push_back(e.back() + w);
  return e;
}

const std::vector<double> kModel1Freqs{1.511, 1.181, 0.761, 0.553};
const std::vector<double> kModel1Dipoles{0.5855, 0.7079, 0.8352, 0.9281};
const std::vector<double> kModel1Rates{0.0895, 0.1942, 0.1209, 0.2344};
const std::vector<double> kModel2Rates{0.03495, 0.1242, 0.3909, 0.6344};

std::vector<Link> ladder_links(const std::vector<double>& dipoles,
                               const std::vector<double>& rates) {
  std::vector<Link> links;
  for (std::size_t k = 0; k < dipoles.size(); ++k) {
    links.push_back({static_cast<int>(k), static_cast<int>(k) + 1, dipoles[k],
                     rates[k]});
  }
  return links;
}

LevelSystem model1() {
  return make_system("M1", ladder_energies(kModel1Freqs),
                     ladder_links(kModel1Dipoles, kModel1Rates), 4);
}

LevelSystem model2() {
  return make_system("M2", ladder_energies(kModel1Freqs),
                     ladder_links(kModel1Dipoles, kModel2Rates), 4);
}

LevelSystem model3() {
  auto links = ladder_links(kModel1Dipoles, kModel1Rates);
  links.push_back({0, 2, -0.1079, 0.01099});
  links.push_back({1, 3, -0.1823, 0.1087});
  links.push_back({2, 4, -0.2786, 0.1346});
  return make_system("M3", ladder_energies(kModel1Freqs), links, 4);
}

// Levels {0, 1, 2, 3, 1', 2', 3', 4} -> indices 0..7. The right path is
// built up from the ground state; the shared top level keeps the left-path
// energy, so the 3'-4 gap follows from the energies rather than the listed
// 0.162 rad/fs.
LevelSystem model4() {
  const auto left = ladder_energies(kModel1Freqs);
  const double e1p = 2.513;
  const double e2p = e1p + 1.346;
  const double e3p = e2p + 0.345;
  std::vector<double> energies{left[0], left[1], left[2], left[3],
                               e1p,     e2p,     e3p,     left[4]};
  std::vector<Link> links{
      {0, 1, 0.5855, 0.0895}, {1, 2, 0.7079, 0.1942}, {2, 3, 0.8352, 0.1209},
      {3, 7, 0.9281, 0.2344}, {0, 4, 0.6525, 0.1164}, {4, 5, 0.7848, 0.0885},
      {5, 6, 0.9023, 0.1557}, {6, 7, 1.0322, 0.1280}};
  LevelSystem s = make_system("M4", energies, links, 7);
  for (auto [a, b] : {std::pair{0, 4}, {4, 5}, {5, 6}, {6, 7}}) {
    s.rate_groups(a, b) = s.rate_groups(b, a) = 1;
  }
  return s;
}

}  // namespace

int LevelSystem::n_rate_groups() const {
  return rate_groups.size() == 0 ? 1 : rate_groups.maxCoeff() + 1;
}

void LevelSystem::validate() const {
  const int n = n_levels();
  if (n < 2) throw ConfigError("system needs at least two levels");
  if (dipole.rows() != n || dipole.cols() != n)
    throw ConfigError("dipole matrix must be " + std::to_string(n) + "x" +
                      std::to_string(n));
  if (gamma_rates.rows() != n || gamma_rates.cols() != n)
    throw ConfigError("gamma_rates matrix must be " + std::to_string(n) + "x" +
                      std::to_string(n));
  if (rate_groups.size() != 0 &&
      (rate_groups.rows() != n || rate_groups.cols() != n))
    throw ConfigError("rate_groups matrix must be " + std::to_string(n) + "x" +
                      std::to_string(n));
  if (!energies.allFinite() || !dipole.allFinite() || !gamma_rates.allFinite())
    throw ConfigError("system parameters must be finite");
  if (energies(0) != 0.0) throw ConfigError("energies[0] must be 0");
  for (int i = 0; i < n; ++i) {
    if (gamma_rates(i, i) != 0.0)
      throw ConfigError("gamma_rates diagonal must be zero");
    for (int j = 0; j < n; ++j) {
      if (dipole(i, j) != dipole(j, i))
        throw ConfigError("dipole matrix must be symmetric");
      if (gamma_rates(i, j) < 0.0)
        throw ConfigError("gamma_rates entries must be nonnegative");
      if (rate_groups.size() != 0 && rate_groups(i, j) < 0)
        throw ConfigError("rate_groups entries must be nonnegative");
    }
  }
  if (initial_state < 0 || initial_state >= n || target_state < 0 ||
      target_state >= n)
    throw ConfigError("initial_state and target_state must lie in [0, N)");
  if (initial_state == target_state)
    throw ConfigError("initial_state and target_state must differ");
}

std::vector<Transition> LevelSystem::transitions() const {
  std::vector<Transition> out;
  const int n = n_levels();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (dipole(a, b) != 0.0) {
        out.push_back({a, b, std::abs(energies(b) - energies(a)), dipole(a, b)});
      }
    }
  }
  return out;
}

std::vector<double> LevelSystem::carriers() const {
  std::vector<double> w;
  for (const auto& t : transitions()) w.push_back(t.frequency);
  return w;
}

ModelId parse_model_id(std::string_view id) {
  if (id == "M1" || id == "m1" || id == "1") return ModelId::M1;
  if (id == "M2" || id == "m2" || id == "2") return ModelId::M2;
  if (id == "M3" || id == "m3" || id == "3") return ModelId::M3;
  if (id == "M4" || id == "m4" || id == "4") return ModelId::M4;
  throw ConfigError("unknown model id '" + std::string(id) +
                    "' (expected M1, M2, M3 or M4)");
}

std::string_view to_string(ModelId id) {
  switch (id) {
    case ModelId::M1: return "M1";
    case ModelId::M2: return "M2";
    case ModelId::M3: return "M3";
    case ModelId::M4: return "M4";
  }
  return "?";
}

LevelSystem build_model(ModelId id) {
  switch (id) {
    case ModelId::M1: return model1();
    case ModelId::M2: return model2();
    case ModelId::M3: return model3();
    case ModelId::M4: return model4();
  }
  throw ConfigError("unknown model id");
}

LevelSystem build_model(std::string_view id) {
  return build_model(parse_model_id(id));
}

double Decoherence::operator[](int group) const {
  if (strengths.size() == 1) return strengths.front();
  if (group < 0 || group >= static_cast<int>(strengths.size()))
    throw ConfigError("no decoherence strength for rate group " +
                      std::to_string(group));
  return strengths[static_cast<std::size_t>(group)];
}

bool Decoherence::is_zero() const {
  return std::all_of(strengths.begin(), strengths.end(),
                     [](double g) { return g == 0.0; });
}

Eigen::MatrixXd effective_rates(const LevelSystem& system,
                                const Decoherence& gamma) {
  const int n = system.n_levels();
  for (double g : gamma.strengths) {
    if (!(g >= 0.0) || !std::isfinite(g))
      throw ConfigError("decoherence strength must be finite and >= 0");
  }
  if (gamma.strengths.size() > 1 &&
      static_cast<int>(gamma.strengths.size()) < system.n_rate_groups())
    throw ConfigError("system " + system.name + " has " +
                      std::to_string(system.n_rate_groups()) +
                      " rate groups but " +
                      std::to_string(gamma.strengths.size()) +
                      " strengths were given");
  Eigen::MatrixXd r(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const int g = system.rate_groups.size() == 0 ? 0 : system.rate_groups(j, k);
      r(j, k) = gamma[g] * system.gamma_rates(j, k);
    }
  }
  return r;
}

int Superoperator::n_levels() const {
  return static_cast<int>(std::lround(std::sqrt(static_cast<double>(matrix.rows()))));
}

DensityMatrix Superoperator::apply(const DensityMatrix& rho) const {
  if (rho.rows() * rho.cols() != matrix.cols())
    throw ConfigError("superoperator dimension mismatch");
  return unvectorize(matrix * vectorize(rho));
}

Eigen::VectorXcd vectorize(const DensityMatrix& rho) {
  const Eigen::Index n = rho.rows();
  Eigen::VectorXcd v(n * n);
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index m = 0; m < n; ++m) v(l * n + m) = rho(l, m);
  return v;
}

DensityMatrix unvectorize(const Eigen::VectorXcd& v) {
  const auto n = static_cast<Eigen::Index>(
      std::lround(std::sqrt(static_cast<double>(v.size()))));
  if (n * n != v.size()) throw ConfigError("vector length is not a square");
  DensityMatrix rho(n, n);
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index m = 0; m < n; ++m) rho(l, m) = v(l * n + m);
  return rho;
}

DensityMatrix dissipator_apply(const LevelSystem& system,
                               const Decoherence& gamma,
                               const DensityMatrix& rho) {
  const int n = system.n_levels();
  if (rho.rows() != n || rho.cols() != n)
    throw ConfigError("density matrix is " + std::to_string(rho.rows()) + "x" +
                      std::to_string(rho.cols()) + ", system has " +
                      std::to_string(n) + " levels");
  const Eigen::MatrixXd r = effective_rates(system, gamma);
  // Total outflow rate of each level: sum_n Gamma_{nl}.
  const Eigen::VectorXd out = r.colwise().sum().transpose();
  DensityMatrix d(n, n);
  for (int l = 0; l < n; ++l) {
    for (int m = 0; m < n; ++m) {
      d(l, m) = -0.5 * (out(l) + out(m)) * rho(l, m);
    }
    cplx gain = 0.0;
    for (int k = 0; k < n; ++k) gain += r(l, k) * rho(k, k);
    d(l, l) += gain;
  }
  return d;
}

Superoperator dissipator_superoperator(const Eigen::MatrixXd& rates) {
  const Eigen::Index n = rates.rows();
  const Eigen::VectorXd out = rates.colwise().sum().transpose();
  Superoperator s;
  s.matrix = Eigen::MatrixXcd::Zero(n * n, n * n);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index m = 0; m < n; ++m) {
      s.matrix(l * n + m, l * n + m) = -0.5 * (out(l) + out(m));
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      s.matrix(l * n + l, k * n + k) += rates(l, k);
    }
  }
  return s;
}

Superoperator dissipator_superoperator(const LevelSystem& system,
                                       const Decoherence& gamma) {
  return dissipator_superoperator(effective_rates(system, gamma));
}

DensityMatrix pure_state(int n, int level) {
  if (level < 0 || level >= n) throw ConfigError("level out of range");
  DensityMatrix rho = DensityMatrix::Zero(n, n);
  rho(level, level) = 1.0;
  return rho;
}

double trace_error(const DensityMatrix& rho) {
  return std::abs(rho.trace() - cplx(1.0, 0.0));
}

double hermiticity_residual(const DensityMatrix& rho) {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const DensityMatrix& rho) {
  const DensityMatrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double purity(const DensityMatrix& rho) {
  return (rho * rho).trace().real();
}

}  // namespace qcoop
