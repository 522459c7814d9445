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

#ifndef ATSG_ANCHORING_HPP_
#define ATSG_ANCHORING_HPP_

// Anchoring bias: the follower perceives each leader action probability q in
// an infoset with M actions as (1 - alpha) q + alpha / M.
//
// Two sequence-level forms are provided:
//   exact  - p'(s)  = product over the moves of s of the distorted edge
//            probabilities (non-linear in the realization plan);
//   linear - p''(s) = alpha / M_n * p(init(s)) + (1 - alpha) p(s), which only
//            distorts the final move and stays linear in p.
// Neither form is normalized; the weights are only used to compare follower
// utilities, and such comparisons do not depend on a positive rescaling.

#include <string_view>
#include <vector>

#include "atsg/game.hpp"
#include "atsg/strategy.hpp"

namespace atsg {

class Alpha {
 public:
  // Throws InputError unless 0 <= value < 1.
  explicit Alpha(double value);
  double value() const { return value_; }

 private:
  double value_;
};

enum class AtMode { kExact, kLinear };

std::string_view to_string(AtMode mode);
// Accepts "exact" or "linear"; throws InputError otherwise.
AtMode parse_at_mode(std::string_view text);

// Follower-perceived leader sequence weights, indexed by leader SeqId.
struct DistortedWeights {
  AtMode mode = AtMode::kLinear;
  std::vector<double> weights;

  double operator[](SeqId s) const { return weights[s]; }
};

BehaviorStrategy distort_local(const Game& game, const BehaviorStrategy& b,
                               Alpha alpha);

DistortedWeights distorted_weights_exact(const Game& game,
                                         const BehaviorStrategy& leader,
                                         Alpha alpha);
DistortedWeights distorted_weights_linear(const Game& game,
                                          const RealizationPlan& leader,
                                          Alpha alpha);
// Dispatches on mode; exact mode goes through realization_to_behavior.
DistortedWeights distorted_weights(const Game& game,
                                   const RealizationPlan& leader, Alpha alpha,
                                   AtMode mode);

// Follower best response under distorted perception. Ties in distorted
// follower utility are broken by the leader's undistorted utility, then by
// the lowest action index. The returned leader utility is undistorted.
BestResponse distorted_best_response(const Game& game,
                                     const RealizationPlan& leader,
                                     Alpha alpha, AtMode mode);
BestResponse distorted_best_response(const Game& game,
                                     const DistortedWeights& weights,
                                     const RealizationPlan& leader);

}  // namespace atsg

#endif  // ATSG_ANCHORING_HPP_
