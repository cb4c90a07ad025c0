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

#include <random>

#include "qcoop/error.hpp"
#include "qcoop/lindblad.hpp"
#include "qcoop/system.hpp"
#include "test_util.hpp"

namespace qcoop {
namespace {

using testing::dissipator_by_hand;
using testing::max_abs;
using testing::random_density;
using testing::random_hermitian;

TEST(Models, M1Energies) {
  const LevelSystem s = build_model("M1");
  const double expected[] = {0.0, 1.511, 2.692, 3.453, 4.006};
  ASSERT_EQ(s.n_levels(), 5);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(s.energies(i), expected[i], 1e-12);
  EXPECT_EQ(s.initial_state, 0);
  EXPECT_EQ(s.target_state, 4);
  EXPECT_DOUBLE_EQ(s.dipole(0, 1), 0.5855);
  EXPECT_DOUBLE_EQ(s.gamma_rates(4, 3), 0.2344);
}

TEST(Models, M2SharesM1Dipoles) {
  const LevelSystem m1 = build_model("M1");
  const LevelSystem m2 = build_model("M2");
  EXPECT_EQ(m1.dipole, m2.dipole);
  EXPECT_DOUBLE_EQ(m2.gamma_rates(0, 1), 0.03495);
  EXPECT_DOUBLE_EQ(m2.gamma_rates(3, 4), 0.6344);
}

TEST(Models, M3TwoQuantaFrequenciesAreSums) {
  const LevelSystem s = build_model("M3");
  EXPECT_NEAR(s.energies(2) - s.energies(0), 2.692, 1e-12);
  for (int k = 0; k + 2 < 5; ++k) {
    EXPECT_NE(s.dipole(k, k + 2), 0.0);
    EXPECT_EQ(s.energies(k + 2) - s.energies(k),
              (s.energies(k + 1) - s.energies(k)) +
                  (s.energies(k + 2) - s.energies(k + 1)));
  }
  EXPECT_DOUBLE_EQ(s.dipole(0, 2), -0.1079);
  EXPECT_DOUBLE_EQ(s.gamma_rates(2, 4), 0.1346);
  EXPECT_EQ(s.carriers().size(), 7u);
}

TEST(Models, M4TwoPaths) {
  const LevelSystem s = build_model("M4");
  ASSERT_EQ(s.n_levels(), 8);
  EXPECT_EQ(s.target_state, 7);
  EXPECT_NEAR(s.energies(4), 2.513, 1e-12);
  EXPECT_NEAR(s.energies(5), 3.859, 1e-12);
  EXPECT_NEAR(s.energies(6), 4.204, 1e-12);
  EXPECT_NEAR(s.energies(7), 4.006, 1e-12);
  EXPECT_EQ(s.n_rate_groups(), 2);
  EXPECT_EQ(s.rate_groups(0, 1), 0);
  EXPECT_EQ(s.rate_groups(6, 7), 1);
  bool has_gap = false;
  for (const Transition& t : s.transitions())
    if (t.lower == 6 && t.upper == 7) has_gap = std::abs(t.frequency - 0.198) < 1e-12;
  EXPECT_TRUE(has_gap);
}

TEST(Models, UnknownIdIsConfigError) {
  EXPECT_THROW(build_model("M9"), ConfigError);
  EXPECT_EQ(parse_model_id("m3"), ModelId::M3);
}

TEST(Models, ValidateRejectsBrokenSystems) {
  LevelSystem s = build_model("M1");
  s.dipole(0, 1) = 0.1;
  EXPECT_THROW(s.validate(), ConfigError);
  s = build_model("M1");
  s.gamma_rates(1, 1) = 0.5;
  EXPECT_THROW(s.validate(), ConfigError);
  s = build_model("M1");
  s.target_state = 0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = build_model("M1");
  s.energies(0) = 0.1;
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Dissipator, ZeroGammaIsZero) {
  std::mt19937_64 rng(3);
  const LevelSystem s = build_model("M1");
  const DensityMatrix rho = random_density(5, rng);
  EXPECT_EQ(max_abs(dissipator_apply(s, 0.0, rho)), 0.0);
  EXPECT_EQ(max_abs(dissipator_superoperator(s, 0.0).matrix), 0.0);
}

TEST(Dissipator, GroundStateFeedsOnlyLevelOne) {
  const LevelSystem s = build_model("M1");
  const DensityMatrix d = dissipator_apply(s, 1.0, pure_state(5, 0));
  const double expected[] = {-0.0895, 0.0895, 0.0, 0.0, 0.0};
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(d(i, i).real(), expected[i], 1e-15);
    for (int j = 0; j < 5; ++j)
      if (j != i) EXPECT_EQ(std::abs(d(i, j)), 0.0);
  }
  const DensityMatrix via_matrix =
      dissipator_superoperator(s, 1.0).apply(pure_state(5, 0));
  EXPECT_LT(max_abs(via_matrix - d), 1e-15);
}

TEST(Dissipator, CoherenceDecayMatchesHandSum) {
  const LevelSystem s = build_model("M1");
  DensityMatrix rho = DensityMatrix::Zero(5, 5);
  rho(0, 0) = rho(0, 1) = rho(1, 0) = rho(1, 1) = 0.5;
  const double gamma = 0.7;
  const DensityMatrix d = dissipator_apply(s, gamma, rho);
  const double rate = -0.5 * (0.0895 + 0.0895 + 0.1942);
  EXPECT_NEAR(d(0, 1).real(), gamma * rate * 0.5, 1e-15);
  const DensityMatrix oracle = gamma * dissipator_by_hand(s.gamma_rates, rho);
  EXPECT_LT(max_abs(d - oracle), 1e-15);
}

TEST(Dissipator, SuperoperatorMatchesFunctionalOnRandomInputs) {
  std::mt19937_64 rng(11);
  for (const char* id : {"M1", "M2", "M3", "M4"}) {
    const LevelSystem s = build_model(id);
    const Superoperator m = dissipator_superoperator(s, 0.37);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::MatrixXcd h = random_hermitian(s.n_levels(), rng);
      worst = std::max(worst, max_abs(m.apply(h) - dissipator_apply(s, 0.37, h)));
    }
    EXPECT_LT(worst, 1e-12) << id;
  }
}

TEST(Dissipator, TracelessAndHermitian) {
  std::mt19937_64 rng(5);
  for (const char* id : {"M1", "M2", "M3", "M4"}) {
    const LevelSystem s = build_model(id);
    for (int trial = 0; trial < 20; ++trial) {
      const DensityMatrix rho = random_density(s.n_levels(), rng);
      const DensityMatrix d = dissipator_apply(s, 1.0, rho);
      EXPECT_LT(std::abs(d.trace()), 1e-12) << id;
      EXPECT_LT(max_abs(d - d.adjoint()), 1e-12) << id;
    }
  }
}

TEST(Dissipator, SuperoperatorColumnsConserveTrace) {
  for (const char* id : {"M1", "M3", "M4"}) {
    const LevelSystem s = build_model(id);
    const int n = s.n_levels();
    const Superoperator m = dissipator_superoperator(s, 1.0);
    for (int c = 0; c < n * n; ++c) {
      cplx sum = 0.0;
      for (int l = 0; l < n; ++l) sum += m.matrix(l * n + l, c);
      EXPECT_LT(std::abs(sum), 1e-12) << id << " column " << c;
    }
  }
}

TEST(Dissipator, GroupStrengthsScaleTheirChannels) {
  const LevelSystem s = build_model("M4");
  const Eigen::MatrixXd left = effective_rates(s, Decoherence{{0.04, 0.0}});
  EXPECT_NEAR(left(1, 0), 0.04 * 0.0895, 1e-15);
  EXPECT_EQ(left(4, 0), 0.0);
  const Eigen::MatrixXd both = effective_rates(s, 0.02);
  EXPECT_NEAR(both(4, 0), 0.02 * 0.1164, 1e-15);
  EXPECT_NEAR(both(1, 0), 0.02 * 0.0895, 1e-15);
}

TEST(Dissipator, RelaxationPopulationsByMatrixExponential) {
  const LevelSystem s = build_model("M1");
  const DensityMatrix rho =
      superop_propagate_oracle(s, 0.03, pure_state(5, 0), 200.0);
  const double table[] = {65.0, 22.7, 9.65, 1.98, 0.67};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(100.0 * rho(i, i).real(), table[i], 0.2);
}

TEST(Vectorize, RowMajorLayoutRoundTrips) {
  std::mt19937_64 rng(2);
  const DensityMatrix rho = random_density(4, rng);
  const Eigen::VectorXcd v = vectorize(rho);
  EXPECT_EQ(v(1 * 4 + 2), rho(1, 2));
  EXPECT_EQ(max_abs(unvectorize(v) - rho), 0.0);
}

TEST(StateMetrics, PureStateMetrics) {
  const DensityMatrix rho = pure_state(3, 1);
  EXPECT_EQ(trace_error(rho), 0.0);
  EXPECT_EQ(hermiticity_residual(rho), 0.0);
  EXPECT_NEAR(min_eigenvalue(rho), 0.0, 1e-15);
  EXPECT_NEAR(purity(rho), 1.0, 1e-15);
}

}  // namespace
}  // namespace qcoop
