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

#include "atsg/anchoring.hpp"

#include <cmath>
#include <string>

namespace atsg {

Alpha::Alpha(double value) : value_(value) {
  if (!(value >= 0.0 && value < 1.0)) {
    throw InputError("alpha must lie in [0, 1), got " + std::to_string(value));
  }
}

std::string_view to_string(AtMode mode) {
  return mode == AtMode::kExact ? "exact" : "linear";
}

AtMode parse_at_mode(std::string_view text) {
  if (text == "exact") return AtMode::kExact;
  if (text == "linear") return AtMode::kLinear;
  throw InputError("unknown anchoring mode '" + std::string(text) +
                   "' (expected exact|linear)");
}

BehaviorStrategy distort_local(const Game& game, const BehaviorStrategy& b,
                               Alpha alpha) {
  const double a = alpha.value();
  BehaviorStrategy out = b;
  for (InfosetId i : game.infosets(b.player)) {
    auto& row = out.probs[i];
    const double floor = a / static_cast<double>(row.size());
    for (double& q : row) q = (1.0 - a) * q + floor;
  }
  return out;
}

DistortedWeights distorted_weights_exact(const Game& game,
                                         const BehaviorStrategy& leader,
                                         Alpha alpha) {
  const RealizationPlan r =
      behavior_to_realization(game, distort_local(game, leader, alpha));
  return DistortedWeights{AtMode::kExact, r.values};
}

DistortedWeights distorted_weights_linear(const Game& game,
                                          const RealizationPlan& leader,
                                          Alpha alpha) {
  const double a = alpha.value();
  const auto table = game.sequence_table(leader.player);
  DistortedWeights w{AtMode::kLinear, std::vector<double>(table.size())};
  w.weights[kEmptySequence] = 1.0;
  for (SeqId s = 1; s < static_cast<SeqId>(table.size()); ++s) {
    const SequenceEntry& e = table[s];
    const double m = game.infoset(e.infoset).num_actions();
    w.weights[s] = leader.values[e.parent] * a / m + (1.0 - a) * leader.values[s];
  }
  return w;
}

DistortedWeights distorted_weights(const Game& game,
                                   const RealizationPlan& leader, Alpha alpha,
                                   AtMode mode) {
  if (mode == AtMode::kLinear) return distorted_weights_linear(game, leader, alpha);
  return distorted_weights_exact(game, realization_to_behavior(game, leader),
                                 alpha);
}

BestResponse distorted_best_response(const Game& game,
                                     const RealizationPlan& leader,
                                     Alpha alpha, AtMode mode) {
  return distorted_best_response(
      game, distorted_weights(game, leader, alpha, mode), leader);
}

BestResponse distorted_best_response(const Game& game,
                                     const DistortedWeights& weights,
                                     const RealizationPlan& leader) {
  return best_response_weighted(game, weights.weights, leader);
}

}  // namespace atsg
