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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qcoop/error.hpp"
#include "qcoop/expm.hpp"
#include "qcoop/perturb.hpp"

namespace qcoop::perturb {
namespace {

constexpr double kTf = 200.0;

// Model 1 rung parameters, truncated to n rungs.
LadderSpec m1_ladder(int n, std::vector<double> amps = {0.13, 0.07, 0.11, 0.09}) {
  const double fr[] = {1.511, 1.181, 0.761, 0.553};
  const double mu[] = {0.5855, 0.7079, 0.8352, 0.9281};
  const double r[] = {0.0895, 0.1942, 0.1209, 0.2344};
  LadderSpec l;
  for (int k = 0; k < n; ++k) {
    l.frequencies.push_back(fr[k]);
    l.dipoles.push_back(mu[k]);
    l.rates.push_back(r[k]);
    l.amplitudes.push_back(amps[static_cast<std::size_t>(k)]);
    l.phases.push_back(0.3 * k);
  }
  return l;
}

LadderSpec random_ladder(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(0.02, 0.2), mu(0.3, 1.0), r(0.05, 0.3),
      ph(0.0, 6.28);
  LadderSpec l = m1_ladder(n);
  for (int k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    l.amplitudes[i] = a(rng);
    l.dipoles[i] = mu(rng);
    l.rates[i] = r(rng);
    l.phases[i] = ph(rng);
  }
  return l;
}

// Scale lambda so that the perturbative estimate hits `target`.
double lambda_for(const LadderSpec& l, const EffectiveCoupling& c, bool cooperative,
                  double target) {
  double lo = 0.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double o = combined_yield(l, c, mid, cooperative ? mid * mid : 0.0).value;
    (o < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(Magnus, ZeroField) {
  LadderSpec l = m1_ladder(3, {0.0, 0.0, 0.0});
  const EffectiveCoupling c = magnus_w(l);
  EXPECT_EQ(c.w.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(c.transition_element(0, 3), 0.0);
  EXPECT_EQ(c.transition_element(2, 2), 1.0);
}

TEST(Magnus, LoneRungMatchesEffectiveDuration) {
  const LadderSpec l = m1_ladder(1, {0.2});
  const EffectiveCoupling c = magnus_w(l);
  const double expected = 0.5855 * 0.2 * l.effective_duration() / kTf;
  EXPECT_LT(rel(c.omega[0], expected), 1e-2);
}

TEST(Magnus, CouplingIsHermitian) {
  std::mt19937_64 rng(7);
  const EffectiveCoupling c = magnus_w(random_ladder(3, rng));
  EXPECT_LT((c.w - c.w.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Magnus, MatchesQuadratureOfDefiningIntegral) {
  // W_kj = (2/T_f) int mu_kj exp(-i w_kj t) E(t) dt, the factor 2 being the
  // spectrum normalization; the envelope is integrated out to +-15 sigma.
  std::mt19937_64 rng(9);
  const LadderSpec l = random_ladder(2, rng);
  const ControlField f = l.field();
  const EffectiveCoupling c = magnus_w(l);
  const double e[] = {0.0, l.frequencies[0], l.frequencies[0] + l.frequencies[1]};
  const double h = 0.01, a = 100.0 - 450.0;
  const long n = 90000;
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < 3; ++j) {
      if (std::abs(k - j) != 1) continue;
      const double mu = l.dipoles[static_cast<std::size_t>(std::max(k, j) - 1)];
      const double wkj = e[j] - e[k];
      std::complex<double> sum = 0.0;
      for (long s = 0; s <= n; ++s) {
        const double t = a + h * static_cast<double>(s);
        sum += ((s == 0 || s == n) ? 0.5 : 1.0) * f.evaluate(t) * std::polar(1.0, -wkj * t);
      }
      const std::complex<double> quad = 2.0 * mu * h * sum / kTf;
      EXPECT_LT(std::abs(quad - c.w(k, j)) / std::abs(c.w(k, j)), 1e-8) << k << j;
    }
  }
}

TEST(Rwa, Examples) {
  EXPECT_EQ(rwa_hamiltonian(m1_ladder(2, {0.0, 0.0})).cwiseAbs().maxCoeff(), 0.0);
  LadderSpec two = m1_ladder(1);
  two.dipoles = {1.0};
  two.amplitudes = {0.1};
  const Eigen::MatrixXd h = rwa_hamiltonian(two);
  EXPECT_DOUBLE_EQ(h(0, 1), 0.1);
  EXPECT_DOUBLE_EQ(h(1, 0), 0.1);
  EXPECT_EQ(h(0, 0), 0.0);
}

TEST(Rwa, ExponentialMatchesEnvelopeEquations) {
  // i dc/dt = -s(t) H_F c integrates exactly to exp(i H_F T_e); RK4 on the
  // envelope equations is the independent check.
  const LadderSpec l = m1_ladder(3, {0.03, 0.025, 0.02});
  const Eigen::MatrixXd h = rwa_hamiltonian(l);
  const ControlField f = l.field();
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(4);
  c(0) = 1.0;
  const std::complex<double> i(0.0, 1.0);
  auto rhs = [&](double t, const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
    return i * f.envelope(t) * (h.cast<std::complex<double>>() * x);
  };
  const double dt = 0.01;
  for (long s = 0; s < 20000; ++s) {
    const double t = dt * static_cast<double>(s);
    const Eigen::VectorXcd k1 = rhs(t, c);
    const Eigen::VectorXcd k2 = rhs(t + dt / 2, c + dt / 2 * k1);
    const Eigen::VectorXcd k3 = rhs(t + dt / 2, c + dt / 2 * k2);
    const Eigen::VectorXcd k4 = rhs(t + dt, c + dt * k3);
    c += dt / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  const Eigen::MatrixXcd u =
      expm(i * h.cast<std::complex<double>>(), l.effective_duration());
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::norm(u(k, 0)), std::norm(c(k)), 1e-6);
}

TEST(FieldOnly, BrokenRungGivesZero) {
  const LadderSpec l = m1_ladder(3, {0.1, 0.0, 0.1});
  EXPECT_EQ(field_only_yield(l, rwa_coupling(l), 0.5).value, 0.0);
  // Off-resonant crosstalk from the other carriers only.
  EXPECT_LT(field_only_yield(l, magnus_w(l), 0.5).value, 1e-30);
}

TEST(FieldOnly, TwoLevelCoherentTerm) {
  const LadderSpec l = m1_ladder(1, {0.002});
  const double te = l.effective_duration();
  EXPECT_LT(rel(field_only_yield(l, rwa_coupling(l), 1.0).value,
                std::pow(0.5855 * 0.002 * te, 2)),
            1e-13);
  EXPECT_TRUE(field_only_yield(l, rwa_coupling(l), 1.0).within_validity);
  EXPECT_FALSE(field_only_yield(l, rwa_coupling(l), 10.0).within_validity);
}

TEST(FieldOnly, ThreeLevelConvergesToOracle) {
  const LadderSpec l = m1_ladder(2);
  const EffectiveCoupling c = magnus_w(l);
  const double lam = lambda_for(l, c, false, 1e-4);
  std::vector<double> err;
  for (double s : {1.0, 0.5, 0.25}) {
    const double o = oracle_yield(l, c, s * lam, 0.0);
    err.push_back(rel(field_only_yield(l, c, s * lam).value, o));
  }
  EXPECT_LT(err[0], 0.05);
  for (std::size_t k = 0; k + 1 < err.size(); ++k) {
    EXPECT_GT(err[k] / err[k + 1], 3.0);
    EXPECT_LT(err[k] / err[k + 1], 5.0);
  }
}

TEST(FieldOnly, ScalingLawIsExact) {
  for (int n = 1; n <= 4; ++n) {
    const LadderSpec l = m1_ladder(n);
    const EffectiveCoupling c = magnus_w(l);
    const double a = field_only_yield(l, c, 0.3).value;
    const double b = field_only_yield(l, c, 0.6).value;
    EXPECT_LT(rel(b / a, std::pow(2.0, 2 * n)), 1e-12) << n;
  }
}

TEST(DecoherenceOnly, Examples) {
  LadderSpec l = m1_ladder(3);
  l.rates[1] = 0.0;
  EXPECT_EQ(decoherence_only_yield(l, 1e-3).value, 0.0);
  const LadderSpec one = m1_ladder(1);
  EXPECT_LT(rel(decoherence_only_yield(one, 1e-3).value, 1e-3 * 0.0895 * kTf), 1e-14);
}

TEST(DecoherenceOnly, ScalingLawIsExact) {
  for (int n = 1; n <= 4; ++n) {
    const LadderSpec l = m1_ladder(n);
    const double a = decoherence_only_yield(l, 1e-3).value;
    const double b = decoherence_only_yield(l, 2e-3).value;
    EXPECT_LT(rel(b / a, std::pow(2.0, n)), 1e-12) << n;
  }
}

TEST(DecoherenceOnly, FourLevelConvergesToOracle) {
  const LadderSpec l = m1_ladder(3, {0.0, 0.0, 0.0});
  const EffectiveCoupling c = magnus_w(l);
  double prev = 1.0;
  for (double g : {1e-3, 5e-4, 2.5e-4}) {
    const double err = rel(decoherence_only_yield(l, g).value, oracle_yield(l, c, 0.0, g));
    EXPECT_LT(err, 0.05) << g;
    EXPECT_LT(err, prev) << g;
    prev = err;
  }
}

TEST(Combined, TwoLevelClosedForm) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const LadderSpec l = random_ladder(1, rng);
    const EffectiveCoupling c = rwa_coupling(l);
    const double te = l.effective_duration();
    const double g1 = l.rates[0];
    const double closed = std::pow(l.dipoles[0] * l.amplitudes[0] * te, 2) + g1 * kTf;
    EXPECT_LT(rel(combined_yield(l, c, 1.0).value, closed), 1e-12);
  }
}

TEST(Combined, ThreeLevelClosedForm) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const LadderSpec l = random_ladder(2, rng);
    const EffectiveCoupling c = rwa_coupling(l);
    const double te = l.effective_duration();
    const double a1 = l.dipoles[0] * l.amplitudes[0], a2 = l.dipoles[1] * l.amplitudes[1];
    const double g1 = l.rates[0], g2 = l.rates[1];
    const double closed = 0.25 * std::pow(a1 * a2, 2) * std::pow(te, 4) +
                          a1 * a1 * g2 * te * te * kTf / 3.0 +
                          a2 * a2 * g1 * te * te * kTf / 3.0 + 0.5 * g1 * g2 * kTf * kTf;
    EXPECT_LT(rel(combined_yield(l, c, 1.0).value, closed), 1e-12);
  }
}

TEST(Combined, FourLevelMatchesOracleUnderMagnusGenerator) {
  std::mt19937_64 rng(3);
  const LadderSpec l = random_ladder(3, rng);
  const EffectiveCoupling c = magnus_w(l);
  const double lam = lambda_for(l, c, true, 1e-4);
  EXPECT_LT(rel(combined_yield(l, c, lam).value, oracle_yield(l, c, lam, lam * lam)), 0.02);
}

TEST(Combined, ReducesToSingleMechanisms) {
  for (int n = 1; n <= 4; ++n) {
    LadderSpec l = m1_ladder(n);
    const EffectiveCoupling c = magnus_w(l);
    LadderSpec coherent = l;
    for (double& r : coherent.rates) r = 0.0;
    EXPECT_LT(rel(combined_yield(coherent, c, 0.2).value,
                  field_only_yield(coherent, c, 0.2).value),
              1e-13);
    LadderSpec dark = l;
    for (double& a : dark.amplitudes) a = 0.0;
    EXPECT_LT(rel(combined_yield(dark, magnus_w(dark), 0.2).value,
                  decoherence_only_yield(dark, 0.04).value),
              1e-13);
  }
}

TEST(Combined, RatioFormAgreesWhenDefined) {
  const LadderSpec l = m1_ladder(4);
  const EffectiveCoupling c = magnus_w(l);
  for (const PathTerm& p : path_terms(l, c, 0.1, 0.01)) {
    ASSERT_TRUE(p.has_ratio_form);
    EXPECT_LT(rel(p.ratio_weight, p.weight), 1e-12);
  }
  const LadderSpec broken = m1_ladder(3, {0.1, 0.0, 0.1});
  bool flagged = false;
  for (const PathTerm& p : path_terms(broken, rwa_coupling(broken), 0.1, 0.01))
    flagged = flagged || !p.has_ratio_form;
  EXPECT_TRUE(flagged);
  EXPECT_GT(combined_yield(broken, rwa_coupling(broken), 0.1, 0.01).value, 0.0);
}

TEST(Combined, AffineInAmplitudeSquaredAndRate) {
  const LadderSpec base = m1_ladder(3);
  for (int j = 0; j < 3; ++j) {
    std::vector<double> by_amp, by_rate;
    const double xs[] = {0.5, 1.0, 2.0};
    for (double x : xs) {
      LadderSpec l = base;
      l.amplitudes[static_cast<std::size_t>(j)] = std::sqrt(x) * 0.1;
      by_amp.push_back(combined_yield(l, rwa_coupling(l), 1.0, 1e-3).value);
      l = base;
      l.rates[static_cast<std::size_t>(j)] = x * 0.1;
      by_rate.push_back(combined_yield(l, rwa_coupling(l), 1.0, 1e-3).value);
    }
    for (const auto& y : {by_amp, by_rate}) {
      const double s1 = (y[1] - y[0]) / (xs[1] - xs[0]);
      const double s2 = (y[2] - y[1]) / (xs[2] - xs[1]);
      EXPECT_LT(std::abs(s1 - s2) / std::abs(s2), 1e-12) << j;
    }
  }
}

TEST(Combined, OracleConvergesMonotonically) {
  for (int n = 1; n <= 4; ++n) {
    const LadderSpec l = m1_ladder(n);
    const EffectiveCoupling c = magnus_w(l);
    const double lam = lambda_for(l, c, true, 1e-4);
    const auto rows = convergence_sweep(l, c, {lam, lam / 2, lam / 4});
    for (std::size_t k = 0; k + 1 < rows.size(); ++k)
      EXPECT_LT(rows[k + 1].rel_error, rows[k].rel_error) << n;
  }
}

TEST(Oracle, NoCouplingLeavesStateAlone) {
  const LadderSpec l = m1_ladder(2);
  const DensityMatrix rho = superop_exponential_oracle(l, magnus_w(l), 0.0, 0.0);
  EXPECT_LT((rho - pure_state(3, 0)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Oracle, MatchesHilbertSpaceFormWithoutDecoherence) {
  const LadderSpec l = m1_ladder(3);
  const EffectiveCoupling c = magnus_w(l);
  const double lam = 0.8;
  const Eigen::MatrixXcd u = expm(std::complex<double>(0.0, lam * kTf) * c.w);
  EXPECT_NEAR(oracle_yield(l, c, lam, 0.0), std::norm(u(3, 0)), 1e-10);
}

TEST(Liouville, IdentitiesHoldOnLaddersUpToFour) {
  std::mt19937_64 rng(4);
  for (int top = 1; top <= 4; ++top) {
    const LadderSpec l = random_ladder(top, rng);
    const EffectiveCoupling c = magnus_w(l);
    for (int n = 0; n <= top; ++n) {
      for (int m = 0; n + m <= top; ++m) {
        const LiouvilleIdentities id = liouville_identity_check(l, c, n, m);
        EXPECT_LT(std::abs(id.coherent.lhs - id.coherent.rhs),
                  1e-10 * std::max(1.0, id.coherent.rhs))
            << top << " " << n << " " << m;
        EXPECT_LT(std::abs(id.decoherent.lhs - id.decoherent.rhs),
                  1e-10 * std::max(1.0, id.decoherent.rhs))
            << top << " " << n << " " << m;
        if (m == 0) {
          EXPECT_EQ(id.coherent.rhs, 1.0);
          EXPECT_EQ(id.coherent.lhs, std::complex<double>(1.0));
        }
      }
    }
  }
}

TEST(Liouville, RelativeCoherentIdentity) {
  const LadderSpec l = m1_ladder(3);
  const EffectiveCoupling c = magnus_w(l);
  const IdentityCheck id = coherent_identity(l, c, 0, 3);
  EXPECT_LT(std::abs(id.lhs - id.rhs) / id.rhs, 1e-10);
  EXPECT_DOUBLE_EQ(id.rhs, central_binomial(3) * std::pow(c.transition_element(0, 3), 2));
}

TEST(Liouville, DecoherentTwoStepIsRateProduct) {
  const LadderSpec l = m1_ladder(3);
  const IdentityCheck id = decoherent_identity(l, 0, 2);
  EXPECT_NEAR(id.lhs.real(), 0.0895 * 0.1942, 1e-17);
  EXPECT_EQ(id.lhs.imag(), 0.0);
}

TEST(Liouville, IndexOutOfRange) {
  const LadderSpec l = m1_ladder(2);
  EXPECT_THROW(liouville_identity_check(l, magnus_w(l), 1, 2), ConfigError);
}

TEST(Decomposition, NoDecoherenceReduction) {
  const LadderSpec l = m1_ladder(2, {0.002, 0.003});
  const CostParams p{0.01, 1e-9};
  const Decomposition d = decompose_and_optimize(l, 0.0, 1, p);
  EXPECT_EQ(d.rung_rate, 0.0);
  EXPECT_NEAR(d.amplitude_sq_optimal, (0.01 - 1e-9 / (2.0 * d.f1)) / d.f1,
              1e-12 * d.amplitude_sq_optimal);
}

TEST(Decomposition, TwoLevelForm) {
  const LadderSpec l = m1_ladder(1, {0.001});
  const double gamma = 1e-4;
  const CostParams p{0.2, 1e-6};
  const Decomposition d = decompose_and_optimize(l, gamma, 1, p);
  const double te = l.effective_duration();
  const double f1 = 0.5855 * 0.5855 * te * te;
  EXPECT_LT(rel(d.f1, f1), 1e-12);
  EXPECT_LT(rel(d.f2, kTf), 1e-12);
  const double expected = (0.2 - 1e-6 / (2.0 * f1) - gamma * 0.0895 * kTf) / f1;
  EXPECT_LT(rel(d.amplitude_sq_optimal, expected), 1e-10);
  EXPECT_FALSE(d.clamped);
}

TEST(Decomposition, DecoherenceLowersOptimalAmplitude) {
  const LadderSpec base = m1_ladder(2, {0.001, 0.001});
  const CostParams p{0.02, 1e-7};
  double prev = std::numeric_limits<double>::infinity();
  for (double r1 : {0.0, 0.05, 0.1, 0.2}) {
    LadderSpec l = base;
    l.rates[0] = r1;
    const Decomposition d = decompose_and_optimize(l, 1e-3, 1, p);
    EXPECT_LT(d.amplitude_optimal, prev);
    prev = d.amplitude_optimal;
    l.amplitudes[0] = d.amplitude_optimal;
    const double o = rwa_yield(l, 1e-3);
    EXPECT_NEAR(o, p.target_yield - p.fluence_weight / (2.0 * d.f1), 1e-10);
  }
}

TEST(Decomposition, ClampsAtZero) {
  const LadderSpec l = m1_ladder(1, {0.001});
  const Decomposition d = decompose_and_optimize(l, 1e-3, 1, CostParams{1e-6, 1.0});
  EXPECT_TRUE(d.clamped);
  EXPECT_EQ(d.amplitude_optimal, 0.0);
}

TEST(Decomposition, UnreachableRungHasNoAuthority) {
  LadderSpec l = m1_ladder(2, {0.01, 0.0});
  l.rates[1] = 0.0;
  EXPECT_THROW(decompose_and_optimize(l, 1e-3, 1, CostParams{0.01, 0.05}),
               NoControlAuthority);
  EXPECT_THROW(decompose_and_optimize(l, 1e-3, 3, CostParams{0.01, 0.05}), ConfigError);
}

TEST(Ladder, RoundTripsThroughSystem) {
  const LadderSpec l = m1_ladder(4, {0.1, 0.2, 0.3, 0.4});
  const LadderSpec back = LadderSpec::from_system(l.system(), l.field());
  for (int k = 0; k < 4; ++k) {
    const auto i = static_cast<std::size_t>(k);
    EXPECT_NEAR(back.frequencies[i], l.frequencies[i], 1e-15);
    EXPECT_EQ(back.dipoles[i], l.dipoles[i]);
    EXPECT_EQ(back.rates[i], l.rates[i]);
    EXPECT_EQ(back.amplitudes[i], l.amplitudes[i]);
  }
  EXPECT_THROW(LadderSpec::from_system(build_model("M3"), l.field()), ConfigError);
}

TEST(Ladder, ValidationErrors) {
  LadderSpec l = m1_ladder(2);
  l.frequencies[1] = l.frequencies[0];
  EXPECT_THROW(l.validate(), ConfigError);
  l = m1_ladder(2);
  l.rates.pop_back();
  EXPECT_THROW(l.validate(), ConfigError);
}

TEST(LabFrame, WeakFieldAgreesWithMagnusToLeadingOrder) {
  // Measurement, not a claim about the Magnus step: the ratio only has to be
  // of order one at weak coupling.
  const LadderSpec l = m1_ladder(1, {0.01});
  const double lab = lab_frame_yield(l, 0.5, 0.0);
  const double mag = oracle_yield(l, magnus_w(l), 0.5, 0.0);
  EXPECT_GT(lab, 0.0);
  EXPECT_LT(rel(lab, mag), 0.05);
}

}  // namespace
}  // namespace qcoop::perturb
