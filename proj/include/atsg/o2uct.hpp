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

#ifndef ATSG_O2UCT_HPP_
#define ATSG_O2UCT_HPP_

// Sampling-based heuristic: a UCT tree proposes follower pure strategies;
// for each one the leader strategy is adjusted by accept/reject mixing steps,
// first until the sampled strategy becomes the follower's distorted best
// response (feasibility passes), then to raise the leader's utility while it
// stays one (positive passes).

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "atsg/anchoring.hpp"
#include "atsg/game.hpp"
#include "atsg/result.hpp"
#include "atsg/strategy.hpp"

namespace atsg {

struct O2uctConfig {
  long max_positive_passes = 5000;
  double min_improvement = 1e-5;
  long improvement_window = 500;   // samples
  long max_feasibility_passes = 10000;
  long positive_patience = 10;     // consecutive rejections per sample
  long max_samples = 100000;
  double uct_c = 1.4;
  double step = 0.2;
  double step_decay = 0.999;
  double min_step = 1e-3;
  // Share of proposals aimed at a pure strategy chosen from the current
  // objective's linearization rather than uniformly.
  double guided_share = 0.5;
  // Incentive repairs tried after a positive-pass move breaks the target's
  // best-response status.
  int repairs = 3;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  AtMode mode = AtMode::kLinear;
  std::optional<std::chrono::steady_clock::time_point> deadline;

  void validate() const;
};

struct UctNode {
  InfosetId infoset = kNone;  // next follower infoset to decide; kNone = leaf
  long visits = 0;
  double total_reward = 0.0;
  std::vector<std::unique_ptr<UctNode>> children;  // by action
};

class UctTree {
 public:
  UctTree(const Game& game, double c);

  // Descends by UCB1 (unvisited children first, chosen uniformly), expands
  // one node and completes the strategy uniformly at random. The path is
  // kept for the next backpropagate() call.
  PureStrategy sample(std::mt19937_64& rng);
  // `reward` must already be scaled to [0, 1].
  void backpropagate(double reward);

  const UctNode& root() const { return *root_; }

 private:
  const Game& game_;
  double c_;
  std::unique_ptr<UctNode> root_;
  std::vector<UctNode*> path_;
};

// Adjustment state for one sampled follower strategy.
struct AdjustState {
  RealizationPlan plan;
  double step = 0.2;
  // Follower responses that displaced the target after earlier moves.
  std::vector<PureStrategy> blockers;
};

// One feasibility pass: mixes the plan toward a leader pure strategy and
// keeps the move iff the margin u_f(target) - u_f(best response) strictly
// increases. Returns whether the move was kept.
bool feasibility_pass(const Game& game, AdjustState& state,
                      const PureStrategy& target, const O2uctConfig& cfg,
                      std::mt19937_64& rng);
// One positive pass: keeps the move iff the leader's utility against
// `target` strictly increases and `target` stays a distorted best response.
bool positive_pass(const Game& game, AdjustState& state,
                   const PureStrategy& target, const O2uctConfig& cfg,
                   std::mt19937_64& rng);

// Margin of `target` under the plan's distorted perception (<= 0; 0 when it
// is a best response).
double feasibility_margin(const Game& game, const RealizationPlan& plan,
                          const PureStrategy& target, Alpha alpha, AtMode mode);

struct O2uctTrace {
  std::vector<double> best_per_sample;
};

SolveResult run_o2uct(const Game& game, const O2uctConfig& cfg,
                      O2uctTrace* trace = nullptr);

}  // namespace atsg

#endif  // ATSG_O2UCT_HPP_
