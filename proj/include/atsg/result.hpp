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

#ifndef ATSG_RESULT_HPP_
#define ATSG_RESULT_HPP_

// Common result type returned by every solver, and its JSON form.

#include <optional>
#include <string>

#include "atsg/anchoring.hpp"
#include "atsg/game.hpp"
#include "atsg/strategy.hpp"

namespace atsg {

struct SolveStats {
  double wall_ms = 0.0;
  long lp_solves = 0;
  long bnb_nodes = 0;
  long pivots = 0;
  long generations = 0;      // easg
  long samples = 0;          // o2uct follower samples
  long positive_passes = 0;  // o2uct
  long feasibility_passes = 0;
};

struct SolveResult {
  std::string method;
  double alpha = 0.0;
  AtMode mode = AtMode::kLinear;
  RealizationPlan leader_plan;
  BehaviorStrategy leader_behavior;
  std::optional<MixedStrategy> leader_mixed;
  PureStrategy follower;
  // Leader's true expected utility against `follower`.
  double leader_utility = 0.0;
  // Follower utility under the distorted perception of `leader_plan`.
  double follower_utility = 0.0;
  SolveStats stats;
};

// Fills follower, utilities and behavior from `plan` through
// distorted_best_response.
void evaluate_into(const Game& game, RealizationPlan plan, SolveResult& result);

// JSON text of a result. Sequences and infosets are written with their
// labels so the output is readable without the game file. Wall time is
// included only when `with_timing` is set.
std::string result_to_json(const Game& game, const SolveResult& result,
                           bool with_timing);

}  // namespace atsg

#endif  // ATSG_RESULT_HPP_
