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

#include <benchmark/benchmark.h>

#include <vector>

#include "qcoop/field.hpp"
#include "qcoop/ga.hpp"
#include "qcoop/lindblad.hpp"
#include "qcoop/perturb.hpp"
#include "qcoop/system.hpp"

namespace {

using namespace qcoop;

ModelId model_arg(const benchmark::State& state) {
  return static_cast<ModelId>(state.range(0));
}

ControlField driven(const LevelSystem& s) {
  ControlField f = ControlField::on_carriers(s.carriers());
  for (auto& c : f.components) c.amplitude = 0.1;
  return f;
}

void BM_Derivative(benchmark::State& state) {
  const LevelSystem s = build_model(model_arg(state));
  const LindbladGenerator gen(s, 0.03);
  const DensityMatrix rho = DensityMatrix::Constant(s.n_levels(), s.n_levels(), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(gen.derivative(rho, 0.05));
}
BENCHMARK(BM_Derivative)->Arg(0)->Arg(3);

void BM_InteractionDerivative(benchmark::State& state) {
  const LevelSystem s = build_model(model_arg(state));
  const LindbladGenerator gen(s, 0.03);
  const auto n = static_cast<std::size_t>(s.n_levels());
  std::vector<cplx> rho(n * n, cplx(0.1, 0.0)), out(n * n);
  for (auto _ : state) {
    gen.interaction_derivative(rho, 0.05, 37.0, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_InteractionDerivative)->Arg(0)->Arg(3);

void BM_Propagate(benchmark::State& state) {
  const LevelSystem s = build_model(model_arg(state));
  const ControlField f = driven(s);
  const DensityMatrix rho0 = pure_state(s.n_levels(), 0);
  for (auto _ : state) benchmark::DoNotOptimize(propagate(s, f, 0.03, rho0));
}
BENCHMARK(BM_Propagate)->Arg(0)->Arg(3)->Unit(benchmark::kMillisecond);

// One GA fitness evaluation: resample the carrier basis and rerun RK4.
void BM_ControlProblemEvaluate(benchmark::State& state) {
  const ControlProblem p(build_model(model_arg(state)), 0.03, CostParams{});
  const std::vector<double> a(p.n_controls(), 0.1), th(p.n_controls(), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(p.evaluate(a, th));
}
BENCHMARK(BM_ControlProblemEvaluate)->Arg(0)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
  const ControlField f = driven(build_model(ModelId::M1));
  const std::vector<double> grid = uniform_grid(0.0, 3.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(analytic_spectrum(f, grid));
}
BENCHMARK(BM_Spectrum)->Arg(3000)->Arg(30000);

void BM_Oracle(benchmark::State& state) {
  const LevelSystem s = build_model(ModelId::M1);
  ControlField f = driven(s);
  const auto l = perturb::LadderSpec::from_system(s, f);
  const auto c = perturb::magnus_w(l);
  for (auto _ : state) benchmark::DoNotOptimize(perturb::oracle_yield(l, c, 0.05, 0.0025));
}
BENCHMARK(BM_Oracle);

}  // namespace

BENCHMARK_MAIN();
