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

#include "qcoop/ga.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>

#include "qcoop/error.hpp"

namespace qcoop {

namespace {

using Genes = std::vector<double>;

std::string key_of(const Genes& g) {
  std::string k(g.size() * sizeof(double), '\0');
  std::memcpy(k.data(), g.data(), k.size());
  return k;
}

// Independent stream per (generation, slot), so offspring do not depend on
// evaluation order or thread count.
std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t generation,
                           std::uint64_t slot) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(generation),
                    static_cast<std::uint32_t>(slot), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

struct Individual {
  Genes genes;
  Evaluation eval;
};

class GeneticSearch {
 public:
  GeneticSearch(const ControlProblem& problem, const GAConfig& cfg)
      : problem_(problem), cfg_(cfg), m_(problem.n_controls()) {}

  OptimizationRecord run();

 private:
  Genes random_genes(std::mt19937_64& rng) const;
  const Individual& tournament(const std::vector<Individual>& pop,
                               std::mt19937_64& rng) const;
  Genes breed(const std::vector<Individual>& pop, std::mt19937_64& rng,
              double scale) const;
  void evaluate(std::vector<Individual>& pop);
  Evaluation evaluate_one(const Genes& g) const;
  void repair(Genes& g) const;

  const ControlProblem& problem_;
  GAConfig cfg_;
  std::size_t m_;
  std::unordered_map<std::string, Evaluation> cache_;
  long evaluations_ = 0;
};

Genes GeneticSearch::random_genes(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> amp(cfg_.amplitude_min, cfg_.amplitude_max);
  std::uniform_real_distribution<double> ph(cfg_.phase_min, cfg_.phase_max);
  Genes g(2 * m_);
  for (std::size_t i = 0; i < m_; ++i) g[i] = amp(rng);
  for (std::size_t i = 0; i < m_; ++i) g[m_ + i] = ph(rng);
  repair(g);
  return g;
}

// Amplitudes are clamped; phases are periodic and wrapped into range.
void GeneticSearch::repair(Genes& g) const {
  const double span = cfg_.phase_max - cfg_.phase_min;
  for (std::size_t i = 0; i < m_; ++i)
    g[i] = std::clamp(g[i], cfg_.amplitude_min, cfg_.amplitude_max);
  for (std::size_t i = m_; i < 2 * m_; ++i) {
    double p = std::fmod(g[i] - cfg_.phase_min, span);
    if (p < 0.0) p += span;
    if (p >= span) p = 0.0;
    g[i] = cfg_.phase_min + p;
  }
}

const Individual& GeneticSearch::tournament(const std::vector<Individual>& pop,
                                            std::mt19937_64& rng) const {
  std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
  const Individual* best = &pop[pick(rng)];
  for (int i = 1; i < cfg_.tournament_size; ++i) {
    const Individual& c = pop[pick(rng)];
    if (c.eval.cost < best->eval.cost) best = &c;
  }
  return *best;
}

Genes GeneticSearch::breed(const std::vector<Individual>& pop,
                           std::mt19937_64& rng, double scale) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> mix(-0.25, 1.25);
  std::normal_distribution<double> normal(0.0, 1.0);

  const Individual& a = tournament(pop, rng);
  const Individual& b = tournament(pop, rng);
  Genes child = a.genes;
  if (unit(rng) < cfg_.crossover_rate) {
    for (std::size_t i = 0; i < child.size(); ++i) {
      const double u = mix(rng);
      child[i] = a.genes[i] + u * (b.genes[i] - a.genes[i]);
    }
  }
  const double amp_sigma = scale * (cfg_.amplitude_max - cfg_.amplitude_min);
  const double ph_sigma = scale * (cfg_.phase_max - cfg_.phase_min);
  for (std::size_t i = 0; i < child.size(); ++i) {
    if (unit(rng) < cfg_.mutation_rate) {
      child[i] += (i < m_ ? amp_sigma : ph_sigma) * normal(rng);
    }
  }
  repair(child);
  return child;
}

Evaluation GeneticSearch::evaluate_one(const Genes& g) const {
  const std::span<const double> all(g);
  try {
    return problem_.evaluate(all.subspan(0, m_), all.subspan(m_, m_));
  } catch (const PropagationDiverged&) {
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, std::numeric_limits<double>::quiet_NaN(), inf};
  }
}

void GeneticSearch::evaluate(std::vector<Individual>& pop) {
  std::vector<std::size_t> todo;
  std::unordered_map<std::string, std::size_t> first;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const std::string k = key_of(pop[i].genes);
    if (cache_.count(k) || first.count(k)) continue;
    first.emplace(k, i);
    todo.push_back(i);
  }

  int threads = cfg_.threads == 0
                    ? static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))
                    : cfg_.threads;
  threads = std::max(1, std::min<int>(threads, static_cast<int>(todo.size())));
  std::vector<Evaluation> results(todo.size());
  if (threads <= 1) {
    for (std::size_t j = 0; j < todo.size(); ++j)
      results[j] = evaluate_one(pop[todo[j]].genes);
  } else {
    std::vector<std::jthread> workers;
    for (int t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t j = static_cast<std::size_t>(t); j < todo.size();
             j += static_cast<std::size_t>(threads))
          results[j] = evaluate_one(pop[todo[j]].genes);
      });
    }
  }
  for (std::size_t j = 0; j < todo.size(); ++j)
    cache_.emplace(key_of(pop[todo[j]].genes), results[j]);
  evaluations_ += static_cast<long>(todo.size());
  for (auto& ind : pop) ind.eval = cache_.at(key_of(ind.genes));
}

OptimizationRecord GeneticSearch::run() {
  const auto n = static_cast<std::size_t>(cfg_.population_size);
  const long budget = cfg_.max_evaluations > 0
                          ? cfg_.max_evaluations
                          : static_cast<long>(cfg_.population_size) * cfg_.generations;

  std::vector<Individual> pop(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = stream_for(cfg_.rng_seed, 0, i);
    pop[i].genes = random_genes(rng);
  }
  evaluate(pop);

  auto by_cost = [](const Individual& a, const Individual& b) {
    return a.eval.cost < b.eval.cost;
  };

  OptimizationRecord rec;
  rec.seed = cfg_.rng_seed;
  double scale = cfg_.mutation_scale;
  int stagnant = 0;

  std::stable_sort(pop.begin(), pop.end(), by_cost);
  Individual best = pop.front();
  rec.history.push_back({0, best.eval.cost, best.eval.yield, best.eval.fluence,
                         evaluations_});

  for (int gen = 1; gen < cfg_.generations; ++gen) {
    // Stop before a generation that could overrun the propagation budget.
    if (evaluations_ + static_cast<long>(n) - cfg_.elite_count > budget) break;

    std::vector<Individual> next;
    next.reserve(n);
    for (int e = 0; e < cfg_.elite_count && next.size() < n; ++e)
      next.push_back(pop[static_cast<std::size_t>(e)]);
    for (std::size_t slot = next.size(); slot < n; ++slot) {
      auto rng = stream_for(cfg_.rng_seed, static_cast<std::uint64_t>(gen), slot);
      next.push_back({breed(pop, rng, scale), {}});
    }
    evaluate(next);
    std::stable_sort(next.begin(), next.end(), by_cost);
    pop = std::move(next);

    if (pop.front().eval.cost < best.eval.cost) {
      best = pop.front();
      stagnant = 0;
    } else if (++stagnant >= cfg_.stagnation_window) {
      scale *= 0.5;
      stagnant = 0;
    }
    rec.history.push_back({gen, best.eval.cost, best.eval.yield,
                           best.eval.fluence, evaluations_});
  }

  const std::span<const double> g(best.genes);
  rec.best_field = problem_.make_field(g.subspan(0, m_), g.subspan(m_, m_));
  rec.best = best.eval;
  rec.evaluations = evaluations_;
  return rec;
}

}  // namespace

void CostParams::validate() const {
  if (!(target_yield >= 0.0 && target_yield <= 1.0))
    throw ConfigError("target yield must lie in [0, 1] (fraction)");
  if (!(fluence_weight > 0.0) || !std::isfinite(fluence_weight))
    throw ConfigError("fluence weight alpha must be positive");
}

void GAConfig::validate() const {
  if (population_size < 4) throw ConfigError("population_size must be >= 4");
  if (generations < 1) throw ConfigError("generations must be >= 1");
  if (tournament_size < 1 || tournament_size > population_size)
    throw ConfigError("tournament_size must lie in [1, population_size]");
  for (double r : {crossover_rate, mutation_rate}) {
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("GA rates must lie in [0, 1]");
  }
  if (!(mutation_scale > 0.0)) throw ConfigError("mutation_scale must be positive");
  if (stagnation_window < 1) throw ConfigError("stagnation_window must be >= 1");
  if (elite_count < 0 || elite_count >= population_size)
    throw ConfigError("elite_count must lie in [0, population_size)");
  if (!(amplitude_max > amplitude_min) || amplitude_min < 0.0)
    throw ConfigError("amplitude bounds must be nonempty and nonnegative");
  if (!(phase_max > phase_min)) throw ConfigError("phase bounds must be nonempty");
  if (max_evaluations < 0) throw ConfigError("max_evaluations must be >= 0");
  if (threads < 0) throw ConfigError("threads must be >= 0");
}

ControlProblem::ControlProblem(LevelSystem system, const Decoherence& gamma,
                               CostParams params, ControlField field_template,
                               PropagationConfig prop)
    : system_(std::move(system)),
      params_(params),
      template_(std::move(field_template)),
      prop_(prop),
      generator_(system_, gamma),
      basis_([&] {
        std::vector<double> w;
        for (const auto& c : template_.components) w.push_back(c.carrier);
        return w;
      }(),
             template_.center_time, template_.width, prop_.horizon, prop_.dt),
      rho0_(pure_state(system_.n_levels(), system_.initial_state)) {
  params_.validate();
  prop_.validate();
  template_.horizon = prop_.horizon;
  template_.validate();
  if (prop_.frame == Frame::interaction)
    generator_.tabulate(prop_.dt, step_count(prop_.horizon, prop_.dt));
}

ControlProblem::ControlProblem(LevelSystem system, const Decoherence& gamma,
                               CostParams params, PropagationConfig prop)
    : ControlProblem(system, gamma, params,
                     ControlField::on_carriers(system.carriers(), 0.5 * prop.horizon,
                                               30.0, prop.horizon),
                     prop) {}

ControlField ControlProblem::make_field(std::span<const double> amplitudes,
                                        std::span<const double> phases) const {
  if (amplitudes.size() != n_controls() || phases.size() != n_controls())
    throw ConfigError("control count mismatch");
  ControlField f = template_;
  for (std::size_t l = 0; l < n_controls(); ++l) {
    f.components[l].amplitude = amplitudes[l];
    f.components[l].phase = wrap_phase(phases[l]);
  }
  return f;
}

double ControlProblem::yield(std::span<const double> amplitudes,
                             std::span<const double> phases) const {
  thread_local std::vector<double> samples;
  basis_.sample(amplitudes, phases, samples);
  PropagationConfig cfg = prop_;
  cfg.store_every = 0;
  return outcome(propagate_final(generator_, samples, rho0_, cfg), system_);
}

Evaluation ControlProblem::evaluate(std::span<const double> amplitudes,
                                    std::span<const double> phases) const {
  Evaluation e;
  e.yield = yield(amplitudes, phases);
  for (double a : amplitudes) e.fluence += a * a;
  const double d = e.yield - params_.target_yield;
  e.cost = d * d + params_.fluence_weight * e.fluence;
  return e;
}

double yield_of(const ControlField& field, const LevelSystem& system,
                const Decoherence& gamma, const PropagationConfig& prop) {
  const DensityMatrix rho0 = pure_state(system.n_levels(), system.initial_state);
  ControlField f = field;
  f.horizon = prop.horizon;
  f.validate();
  const LindbladGenerator gen(system, gamma);
  const std::vector<double> samples = sample_half_steps(f, prop.dt);
  return outcome(propagate_final(gen, samples, rho0, prop), system);
}

double cost(const ControlField& field, const LevelSystem& system,
            const Decoherence& gamma, const CostParams& params,
            const PropagationConfig& prop) {
  params.validate();
  const double o = yield_of(field, system, gamma, prop);
  const double d = o - params.target_yield;
  return d * d + params.fluence_weight * fluence(field);
}

OptimizationRecord optimize(const ControlProblem& problem, const GAConfig& cfg) {
  cfg.validate();
  return GeneticSearch(problem, cfg).run();
}

OptimizationRecord optimize(const LevelSystem& system, const Decoherence& gamma,
                            const CostParams& params, const GAConfig& cfg,
                            const PropagationConfig& prop) {
  return optimize(ControlProblem(system, gamma, params, prop), cfg);
}

CooperationReport cooperation_report(const ControlField& field,
                                     const LevelSystem& system,
                                     const Decoherence& gamma,
                                     const PropagationConfig& prop) {
  CooperationReport r;
  r.yield_both = yield_of(field, system, gamma, prop);
  r.yield_field_only = yield_of(field, system, Decoherence(0.0), prop);
  ControlField off = field;
  for (auto& c : off.components) c.amplitude = 0.0;
  r.yield_decoherence_only = yield_of(off, system, gamma, prop);
  r.sum = r.yield_field_only + r.yield_decoherence_only;
  r.fluence = fluence(field);
  r.cooperates = r.yield_both > r.sum;
  return r;
}

double cross_evaluate(const ControlField& field_from_gamma0,
                      const LevelSystem& system, const Decoherence& gamma,
                      const PropagationConfig& prop) {
  return yield_of(field_from_gamma0, system, gamma, prop);
}

}  // namespace qcoop
