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

#ifndef ATSG_STRATEGY_HPP_
#define ATSG_STRATEGY_HPP_

// Strategy encodings over a Game and the operations between them: behavior
// strategies, realization plans (sequence form), reduced pure strategies and
// mixed strategies, plus payoff evaluation and follower best response.

#include <compare>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "atsg/game.hpp"

namespace atsg {

// Per-infoset action distribution. `probs` is indexed by InfosetId; entries
// of the other player's infosets are empty.
struct BehaviorStrategy {
  Player player = Player::kLeader;
  std::vector<std::vector<double>> probs;
};

// Probability of each of the player's sequences, indexed by SeqId.
struct RealizationPlan {
  Player player = Player::kLeader;
  std::vector<double> values;

  double operator[](SeqId s) const { return values[s]; }
};

// Reduced pure strategy: an action for every infoset reachable under the
// strategy's own earlier choices, kNone elsewhere. Indexed by InfosetId.
struct PureStrategy {
  Player player = Player::kLeader;
  std::vector<int> actions;

  int action(InfosetId i) const { return actions[i]; }
  bool defines(InfosetId i) const { return actions[i] != kNone; }

  friend bool operator==(const PureStrategy&, const PureStrategy&) = default;
  friend auto operator<=>(const PureStrategy&, const PureStrategy&) = default;
};

struct MixedStrategy {
  Player player = Player::kLeader;
  std::vector<std::pair<PureStrategy, double>> support;
};

struct Utilities {
  double leader = 0.0;
  double follower = 0.0;
};

struct BestResponse {
  PureStrategy strategy;
  // Follower utility under the weights the response was computed for
  // (distorted when the weights are).
  double follower_utility = 0.0;
  // Leader's undistorted expected utility against the response.
  double leader_utility = 0.0;
};

// Validation; each throws InputError describing the first violation.
void validate(const Game& game, const BehaviorStrategy& b);
void validate(const Game& game, const RealizationPlan& r,
              double tol = kTolerance);
void validate(const Game& game, const PureStrategy& s);
void validate(const Game& game, const MixedStrategy& m);

BehaviorStrategy uniform_behavior(const Game& game, Player p);
PureStrategy empty_pure_strategy(const Game& game, Player p);

RealizationPlan behavior_to_realization(const Game& game,
                                        const BehaviorStrategy& b);
// Infosets whose incoming flow is zero get the uniform distribution.
BehaviorStrategy realization_to_behavior(const Game& game,
                                         const RealizationPlan& r);
RealizationPlan pure_to_realization(const Game& game, const PureStrategy& s);
// Value of a sequence = total probability of the pure strategies that play
// every move of it.
RealizationPlan mixed_to_realization(const Game& game, const MixedStrategy& m);
BehaviorStrategy mixed_to_behavior(const Game& game, const MixedStrategy& m);

// True when `s` plays every move of sequence `seq`.
bool plays_sequence(const Game& game, const PureStrategy& s, SeqId seq);

// Own infosets reachable under `s` (its defined domain), in decision order.
std::vector<InfosetId> reachable_infosets(const Game& game,
                                          const PureStrategy& s);

// Number of reduced pure strategies (saturating; returned as long double).
long double count_pure_strategies(const Game& game, Player p);

// All reduced pure strategies in depth-first infoset order: an infoset is
// decided, then the infosets opened by its action, then its siblings. Throws
// EnumerationCapExceeded when the count exceeds `cap`.
std::vector<PureStrategy> enumerate_pure_strategies(const Game& game, Player p,
                                                    long long cap);

// Uniform action at every reachable infoset.
PureStrategy random_pure_strategy(const Game& game, Player p,
                                  std::mt19937_64& rng);
// Keeps the actions of `base` at own infosets of depth < from_depth and
// draws every deeper reachable action uniformly.
PureStrategy resample_pure_strategy(const Game& game, const PureStrategy& base,
                                    int from_depth, std::mt19937_64& rng);
// Pure strategy maximizing sum_s coef[s] * [strategy plays s].
PureStrategy best_pure_for_weights(const Game& game, Player p,
                                   std::span<const double> coef);

Utilities expected_utilities(const Game& game, const RealizationPlan& leader,
                             const RealizationPlan& follower);

// Follower best response to `leader`. Among follower-optimal responses
// (within kTolerance) the one maximizing the leader's utility is chosen, then
// the lowest action index.
BestResponse best_response(const Game& game, const RealizationPlan& leader);

// Best response when the follower perceives leader sequence weights
// `perceived` (indexed by leader SeqId) while the leader's true utility is
// computed from `leader`. best_response() is the case perceived == leader.
BestResponse best_response_weighted(const Game& game,
                                    std::span<const double> perceived,
                                    const RealizationPlan& leader,
                                    double tol = kTolerance);

// Follower utility of a fixed pure strategy under perceived leader weights.
double follower_value(const Game& game, std::span<const double> perceived,
                      const PureStrategy& follower);
// Leader's true utility against a fixed follower pure strategy.
double leader_value(const Game& game, const RealizationPlan& leader,
                    const PureStrategy& follower);

}  // namespace atsg

#endif  // ATSG_STRATEGY_HPP_
