// Copyright 2026 The atsg Authors.
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

#include "atsg/easg.hpp"

#include <algorithm>
#include <numeric>

#include "atsg/error.hpp"

namespace atsg {

namespace {

using Clock = std::chrono::steady_clock;

void merge_duplicates(Chromosome& c) {
  std::sort(c.genes.begin(), c.genes.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<std::pair<PureStrategy, double>> merged;
  for (auto& g : c.genes) {
    if (!merged.empty() && merged.back().first == g.first) {
      merged.back().second += g.second;
    } else {
      merged.push_back(std::move(g));
    }
  }
  c.genes = std::move(merged);
}

double fitness_of(const Chromosome& c) { return c.fitness.value(); }

}  // namespace

void EasgConfig::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (population_size < 1) throw InputError("population size must be positive");
  if (!prob(crossover_prob) || !prob(mutation_prob)) {
    throw InputError("crossover and mutation probabilities must be in [0, 1]");
  }
  if (pressure < 0.5 || pressure > 1.0) {
    throw InputError("selection pressure must be in [0.5, 1]");
  }
  if (elite < 0 || elite >= population_size) {
    throw InputError("elite count must be below the population size");
  }
  if (max_generations < 1 || stagnation < 1) {
    throw InputError("generation caps must be positive");
  }
  Alpha check(alpha);
  (void)check;
}

Chromosome single_gene(PureStrategy s) {
  Chromosome c;
  c.genes.emplace_back(std::move(s), 1.0);
  return c;
}

MixedStrategy to_mixed(const Chromosome& c) {
  MixedStrategy m;
  m.player = Player::kLeader;
  m.support = c.genes;
  return m;
}

std::vector<Chromosome> init_population(const Game& game, const EasgConfig& cfg,
                                        std::mt19937_64& rng) {
  std::vector<Chromosome> pop;
  pop.reserve(cfg.population_size);
  for (int i = 0; i < cfg.population_size; ++i) {
    pop.push_back(single_gene(random_pure_strategy(game, Player::kLeader, rng)));
  }
  return pop;
}

Chromosome crossover(const Chromosome& a, const Chromosome& b) {
  Chromosome c;
  for (const auto& [s, p] : a.genes) c.genes.emplace_back(s, p / 2);
  for (const auto& [s, p] : b.genes) c.genes.emplace_back(s, p / 2);
  merge_duplicates(c);
  return c;
}

Chromosome mutate(const Chromosome& c, const Game& game, std::mt19937_64& rng) {
  // Depths available in gene k: 0 .. deepest own infoset it decides.
  std::vector<int> depth_count(c.genes.size());
  for (std::size_t k = 0; k < c.genes.size(); ++k) {
    int deepest = 0;
    for (InfosetId i : reachable_infosets(game, c.genes[k].first)) {
      deepest = std::max(deepest, game.infoset(i).depth);
    }
    depth_count[k] = deepest + 1;
  }
  const int total = std::accumulate(depth_count.begin(), depth_count.end(), 0);
  int pick = std::uniform_int_distribution<int>(0, total - 1)(rng);
  std::size_t gene = 0;
  while (pick >= depth_count[gene]) pick -= depth_count[gene++];

  Chromosome out = c;
  out.fitness.reset();
  out.genes[gene].first = resample_pure_strategy(game, c.genes[gene].first, pick, rng);
  merge_duplicates(out);
  return out;
}

double evaluate(const Chromosome& c, const Game& game, Alpha alpha, AtMode mode) {
  const RealizationPlan plan = mixed_to_realization(game, to_mixed(c));
  return distorted_best_response(game, plan, alpha, mode).leader_utility;
}

std::vector<Chromosome> select(const std::vector<Chromosome>& pool,
                               const EasgConfig& cfg, std::mt19937_64& rng) {
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return fitness_of(pool[x]) > fitness_of(pool[y]);
  });
  std::vector<Chromosome> next;
  next.reserve(cfg.population_size);
  for (int e = 0; e < cfg.elite && e < static_cast<int>(order.size()); ++e) {
    next.push_back(pool[order[e]]);
  }
  std::uniform_int_distribution<std::size_t> any(0, pool.size() - 1);
  std::bernoulli_distribution fitter_wins(cfg.pressure);
  while (static_cast<int>(next.size()) < cfg.population_size) {
    const std::size_t x = any(rng);
    const std::size_t y = any(rng);
    const bool x_better = fitness_of(pool[x]) >= fitness_of(pool[y]);
    const std::size_t better = x_better ? x : y;
    const std::size_t worse = x_better ? y : x;
    next.push_back(pool[fitter_wins(rng) ? better : worse]);
  }
  return next;
}

SolveResult run_easg(const Game& game, const EasgConfig& cfg, EasgTrace* trace) {
  cfg.validate();
  const auto start = Clock::now();
  const Alpha alpha(cfg.alpha);
  std::mt19937_64 rng(cfg.seed);

  auto evaluate_all = [&](std::vector<Chromosome>& pop) {
    for (Chromosome& c : pop) {
      if (!c.fitness) c.fitness = evaluate(c, game, alpha, cfg.mode);
    }
  };
  auto check_deadline = [&] {
    if (cfg.deadline && Clock::now() >= *cfg.deadline) throw TimeLimitExceeded();
  };

  check_deadline();
  std::vector<Chromosome> pop = init_population(game, cfg, rng);
  evaluate_all(pop);
  Chromosome best = *std::max_element(
      pop.begin(), pop.end(),
      [](const Chromosome& x, const Chromosome& y) { return fitness_of(x) < fitness_of(y); });
  if (trace) trace->best_per_generation.push_back(fitness_of(best));

  std::bernoulli_distribution cross(cfg.crossover_prob);
  std::bernoulli_distribution mut(cfg.mutation_prob);
  long generation = 1;
  int stagnant = 0;
  while (generation < cfg.max_generations && stagnant < cfg.stagnation) {
    check_deadline();
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return fitness_of(pop[x]) > fitness_of(pop[y]);
    });
    std::vector<Chromosome> elites;
    for (int e = 0; e < cfg.elite; ++e) elites.push_back(pop[order[e]]);

    std::vector<std::size_t> parents;
    for (std::size_t k = 0; k < pop.size(); ++k) {
      if (cross(rng)) parents.push_back(k);
    }
    for (std::size_t k = 0; k + 1 < parents.size(); k += 2) {
      pop.push_back(crossover(pop[parents[k]], pop[parents[k + 1]]));
    }
    for (Chromosome& c : pop) {
      if (mut(rng)) c = mutate(c, game, rng);
    }
    evaluate_all(pop);
    elites.insert(elites.end(), std::make_move_iterator(pop.begin()),
                  std::make_move_iterator(pop.end()));
    pop = select(elites, cfg, rng);
    ++generation;

    const Chromosome& gen_best = *std::max_element(
        pop.begin(), pop.end(),
        [](const Chromosome& x, const Chromosome& y) { return fitness_of(x) < fitness_of(y); });
    if (fitness_of(gen_best) > fitness_of(best) + kTolerance) {
      best = gen_best;
      stagnant = 0;
    } else {
      ++stagnant;
    }
    if (trace) trace->best_per_generation.push_back(fitness_of(best));
  }

  SolveResult result;
  result.method = "easg";
  result.alpha = cfg.alpha;
  result.mode = cfg.mode;
  result.leader_mixed = to_mixed(best);
  evaluate_into(game, mixed_to_realization(game, *result.leader_mixed), result);
  result.stats.generations = generation;
  result.stats.wall_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return result;
}

}  // namespace atsg
