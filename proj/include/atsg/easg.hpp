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

#ifndef ATSG_EASG_HPP_
#define ATSG_EASG_HPP_

// Evolutionary search over leader mixed strategies. A chromosome is a small
// mixed strategy (pure strategies with probabilities); its fitness is the
// leader's true utility against the follower's distorted best response.

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "atsg/anchoring.hpp"
#include "atsg/game.hpp"
#include "atsg/result.hpp"
#include "atsg/strategy.hpp"

namespace atsg {

struct EasgConfig {
  int population_size = 30;
  double crossover_prob = 0.8;
  double mutation_prob = 0.5;
  double pressure = 0.9;  // probability that the fitter contestant wins
  int elite = 2;
  int max_generations = 1000;
  int stagnation = 20;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  AtMode mode = AtMode::kLinear;
  std::optional<std::chrono::steady_clock::time_point> deadline;

  // Throws InputError on out-of-range values.
  void validate() const;
};

struct Chromosome {
  std::vector<std::pair<PureStrategy, double>> genes;
  std::optional<double> fitness;
};

Chromosome single_gene(PureStrategy s);
MixedStrategy to_mixed(const Chromosome& c);

std::vector<Chromosome> init_population(const Game& game, const EasgConfig& cfg,
                                        std::mt19937_64& rng);
// Union of both parents with every probability halved; equal strategies are
// merged by summing.
Chromosome crossover(const Chromosome& a, const Chromosome& b);
// Picks a (gene, own depth) pair uniformly and redraws that gene's actions
// from the depth onwards. Probabilities are untouched.
Chromosome mutate(const Chromosome& c, const Game& game, std::mt19937_64& rng);
double evaluate(const Chromosome& c, const Game& game, Alpha alpha, AtMode mode);
// n_e fittest survive, the rest of the slots go to binary tournaments.
// `pool` must be evaluated.
std::vector<Chromosome> select(const std::vector<Chromosome>& pool,
                               const EasgConfig& cfg, std::mt19937_64& rng);

struct EasgTrace {
  // Best fitness seen so far, one entry per generation (the initial
  // population counts as the first).
  std::vector<double> best_per_generation;
};

SolveResult run_easg(const Game& game, const EasgConfig& cfg,
                     EasgTrace* trace = nullptr);

}  // namespace atsg

#endif  // ATSG_EASG_HPP_
