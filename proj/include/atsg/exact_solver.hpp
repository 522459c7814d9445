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

#ifndef ATSG_EXACT_SOLVER_HPP_
#define ATSG_EXACT_SOLVER_HPP_

// Exact leader-optimal commitment against an anchoring-biased follower
// (linear form) through the sequence-form MILP
//
//   max  sum_z p(z) u_l(z)
//   s.t. v_{I(s)} = slack(s) + sum_{I' after s} v_{I'}
//                   + sum_t g_f(t, s) [(1 - a) r_l(t) + a / M_t r_l(init t)]
//        r_l(empty) = r_f(empty) = 1, flow conservation for both players,
//        0 <= slack(s) <= (1 - r_f(s)) BigM,
//        0 <= p(z) <= r_l(seq_l(z)), p(z) <= r_f(seq_f(z)), sum_z p(z) = 1,
//        r_f binary, r_l in [0, 1].
//
// For the empty leader sequence the plain term g_f(empty, s) r_l(empty) is
// used. With a = 0 this is the classic sequence-form SSE program.

#include <chrono>
#include <optional>
#include <vector>

#include "atsg/anchoring.hpp"
#include "atsg/game.hpp"
#include "atsg/lp.hpp"
#include "atsg/result.hpp"
#include "atsg/strategy.hpp"

namespace atsg {

struct SequenceFormModel {
  lp::MilpModel milp;
  double alpha = 0.0;
  double big_m = 0.0;
  // Column indices.
  std::vector<int> r_leader;    // by leader SeqId
  std::vector<int> r_follower;  // by follower SeqId
  std::vector<int> v;           // by follower InfosetId
  int v_root = -1;              // value of the empty follower sequence
  std::vector<int> slack;       // by follower SeqId
  std::vector<int> p;           // by position in game.leaves()
};

// Slack bound used for the follower's best-response constraints. Perceived
// leader weights over a follower strategy's leaves sum to at most
// 1 + alpha * D (D = longest leader sequence), so every value gap is bounded
// by the follower's absolute payoff span times that factor.
double big_m_for(const Game& game, double alpha);

SequenceFormModel build_model(const Game& game, Alpha alpha);

struct ExactOptions {
  long node_limit = 1'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  // Largest follower strategy set solve_multilp will enumerate.
  long long enumeration_cap = 100'000;
  // Parallel LP solves in solve_multilp; 0 reads ATSG_WORKERS, default 1.
  int workers = 0;
};

SolveResult solve_bnb(const Game& game, Alpha alpha,
                      const ExactOptions& options = {});
SolveResult solve_multilp(const Game& game, Alpha alpha,
                          const ExactOptions& options = {});

// Best leader plan that makes `follower` a (perceived) best response, or
// nullopt when no leader plan induces it.
struct InducedPlan {
  RealizationPlan plan;
  double leader_utility = 0.0;
  long pivots = 0;
};
std::optional<InducedPlan> solve_fixed_follower(const Game& game,
                                                const SequenceFormModel& model,
                                                const PureStrategy& follower);

// Number of worker threads requested through ATSG_WORKERS (at least 1).
int worker_count_from_env();

}  // namespace atsg

#endif  // ATSG_EXACT_SOLVER_HPP_
