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

#include "qcoop/error.hpp"
#include "qcoop/ga.hpp"

namespace qcoop {
namespace {

// Coarse step keeps these tests fast; the search logic does not depend on dt.
PropagationConfig coarse() {
  // Positivity is only held to tolerance at the production step.
  PropagationConfig p;
  p.dt = 0.05;
  p.check_positivity = false;
  return p;
}

GAConfig small_ga(std::uint64_t seed) {
  GAConfig g;
  g.population_size = 12;
  g.generations = 8;
  g.rng_seed = seed;
  return g;
}

TEST(Cost, ZeroFieldExamples) {
  const LevelSystem s = build_model("M1");
  const ControlField zero = ControlField::on_carriers(s.carriers());
  EXPECT_NEAR(cost(zero, s, 0.0, CostParams{0.0, 0.05}, coarse()), 0.0, 1e-20);
  EXPECT_NEAR(cost(zero, s, 0.0, CostParams{0.05, 0.05}, coarse()), 0.0025, 1e-15);
}

TEST(Cost, AddsFluencePenalty) {
  const LevelSystem s = build_model("M1");
  ControlField f = ControlField::on_carriers(s.carriers());
  for (auto& c : f.components) c.amplitude = 0.1;
  const CostParams p{0.05, 0.05};
  const double o = yield_of(f, s, 0.03, coarse());
  EXPECT_NEAR(cost(f, s, 0.03, p, coarse()),
              (o - 0.05) * (o - 0.05) + 0.05 * 0.04, 1e-15);
}

TEST(Params, Validation) {
  EXPECT_THROW((CostParams{1.5, 0.05}.validate()), ConfigError);
  EXPECT_THROW((CostParams{0.5, 0.0}.validate()), ConfigError);
  GAConfig g;
  g.population_size = 3;
  EXPECT_THROW(g.validate(), ConfigError);
  g = GAConfig{};
  g.mutation_rate = 1.5;
  EXPECT_THROW(g.validate(), ConfigError);
  g = GAConfig{};
  g.amplitude_max = 0.0;
  EXPECT_THROW(g.validate(), ConfigError);
}

TEST(ControlProblem, YieldMatchesDirectPropagation) {
  const LevelSystem s = build_model("M2");
  const ControlProblem problem(s, 0.05, CostParams{0.05, 0.05}, coarse());
  const std::vector<double> a{0.1, 0.2, 0.05, 0.3}, th{0.1, 2.0, 4.0, 6.0};
  const ControlField f = problem.make_field(a, th);
  const DensityMatrix rho =
      propagate(s, f, 0.05, pure_state(5, 0), coarse()).final_state;
  EXPECT_NEAR(problem.yield(a, th), outcome(rho, s), 1e-14);
  const Evaluation e = problem.evaluate(a, th);
  EXPECT_NEAR(e.fluence, 0.01 + 0.04 + 0.0025 + 0.09, 1e-15);
}

TEST(Optimize, BestCostIsMonotone) {
  const LevelSystem s = build_model("M1");
  const OptimizationRecord rec =
      optimize(s, 0.03, CostParams{0.05, 0.05}, small_ga(3), coarse());
  ASSERT_EQ(rec.history.size(), 8u);
  for (std::size_t i = 1; i < rec.history.size(); ++i)
    EXPECT_LE(rec.history[i].best_cost, rec.history[i - 1].best_cost);
  EXPECT_EQ(rec.history.back().best_cost, rec.best.cost);
  EXPECT_NEAR(fluence(rec.best_field), rec.best.fluence, 1e-15);
  for (const auto& c : rec.best_field.components) {
    EXPECT_GE(c.amplitude, 0.0);
    EXPECT_LE(c.amplitude, 0.5);
    EXPECT_GE(c.phase, 0.0);
    EXPECT_LT(c.phase, 2.0 * std::numbers::pi);
  }
}

TEST(Optimize, SameSeedSameRecord) {
  const LevelSystem s = build_model("M1");
  const auto a = optimize(s, 0.01, CostParams{1.0, 0.05}, small_ga(5), coarse());
  const auto b = optimize(s, 0.01, CostParams{1.0, 0.05}, small_ga(5), coarse());
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_EQ(a.history[i].best_cost, b.history[i].best_cost);
    EXPECT_EQ(a.history[i].evaluations, b.history[i].evaluations);
  }
  for (std::size_t i = 0; i < a.best_field.components.size(); ++i) {
    EXPECT_EQ(a.best_field.components[i].amplitude, b.best_field.components[i].amplitude);
    EXPECT_EQ(a.best_field.components[i].phase, b.best_field.components[i].phase);
  }
  const auto c = optimize(s, 0.01, CostParams{1.0, 0.05}, small_ga(6), coarse());
  EXPECT_NE(a.best.cost, c.best.cost);
}

TEST(Optimize, ParallelEvaluationGivesIdenticalTrace) {
  const LevelSystem s = build_model("M1");
  GAConfig par = small_ga(9);
  par.threads = 3;
  const auto a = optimize(s, 0.03, CostParams{0.05, 0.05}, small_ga(9), coarse());
  const auto b = optimize(s, 0.03, CostParams{0.05, 0.05}, par, coarse());
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i)
    EXPECT_EQ(a.history[i].best_cost, b.history[i].best_cost);
}

TEST(Optimize, RespectsEvaluationBudget) {
  const LevelSystem s = build_model("M1");
  GAConfig g = small_ga(2);
  g.generations = 100;
  g.max_evaluations = 50;
  const auto rec = optimize(s, 0.0, CostParams{0.5, 0.05}, g, coarse());
  EXPECT_LE(rec.evaluations, 50);
  EXPECT_GE(rec.evaluations, 12);
}

TEST(Optimize, ZeroTargetDrivesFieldOff) {
  const LevelSystem s = build_model("M1");
  GAConfig g = small_ga(4);
  g.generations = 30;
  const auto rec = optimize(s, 0.0, CostParams{0.0, 0.05}, g, coarse());
  EXPECT_LT(rec.best.cost, rec.history.front().best_cost);
  EXPECT_LT(rec.best.cost, 0.05 * 0.5 * 0.5 * 4.0);
}

TEST(Cooperation, NoDecoherenceMeansNoCooperation) {
  const LevelSystem s = build_model("M1");
  ControlField f = ControlField::on_carriers(s.carriers());
  for (auto& c : f.components) c.amplitude = 0.1;
  const CooperationReport r = cooperation_report(f, s, 0.0, coarse());
  EXPECT_EQ(r.yield_both, r.yield_field_only);
  EXPECT_EQ(r.yield_decoherence_only, 0.0);
  EXPECT_FALSE(r.cooperates);
  EXPECT_NEAR(r.fluence, 0.04, 1e-15);
}

TEST(Cooperation, ReportColumnsAreConsistent) {
  const LevelSystem s = build_model("M1");
  ControlField f = ControlField::on_carriers(s.carriers());
  for (auto& c : f.components) c.amplitude = 0.05;
  const CooperationReport r = cooperation_report(f, s, 0.03, coarse());
  EXPECT_EQ(r.sum, r.yield_field_only + r.yield_decoherence_only);
  EXPECT_EQ(r.cooperates, r.yield_both > r.sum);
  EXPECT_NEAR(r.yield_both, yield_of(f, s, 0.03, coarse()), 1e-15);
}

TEST(CrossEvaluate, ZeroGammaIsOwnYield) {
  const LevelSystem s = build_model("M1");
  ControlField f = ControlField::on_carriers(s.carriers());
  for (auto& c : f.components) c.amplitude = 0.12;
  EXPECT_EQ(cross_evaluate(f, s, 0.0, coarse()), yield_of(f, s, 0.0, coarse()));
}

}  // namespace
}  // namespace qcoop
