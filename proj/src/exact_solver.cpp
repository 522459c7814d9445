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

#include "atsg/exact_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "atsg/error.hpp"
#include "lp_internal.hpp"

namespace atsg {

using lp::Relation;
using lp::Term;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Clamps LP noise and restores exact flow conservation.
RealizationPlan clean_plan(const Game& game, const std::vector<double>& values,
                           const std::vector<int>& columns) {
  RealizationPlan raw{Player::kLeader, std::vector<double>(columns.size())};
  for (std::size_t s = 0; s < columns.size(); ++s) {
    raw.values[s] = std::clamp(values[columns[s]], 0.0, 1.0);
  }
  raw.values[kEmptySequence] = 1.0;
  return behavior_to_realization(game, realization_to_behavior(game, raw));
}

PureStrategy follower_from_columns(const Game& game,
                                   const std::vector<double>& values,
                                   const std::vector<int>& columns) {
  PureStrategy s = empty_pure_strategy(game, Player::kFollower);
  for (InfosetId i : game.infosets(Player::kFollower)) {
    const Infoset& is = game.infoset(i);
    if (values[columns[is.parent_seq]] < 0.5) continue;
    int best = 0;
    for (int a = 1; a < is.num_actions(); ++a) {
      if (values[columns[is.action_seq[a]]] > values[columns[is.action_seq[best]]]) {
        best = a;
      }
    }
    s.actions[i] = best;
  }
  return s;
}

void fill_result(const Game& game, Alpha alpha, RealizationPlan plan,
                 PureStrategy follower, SolveResult& result) {
  result.alpha = alpha.value();
  result.mode = AtMode::kLinear;
  result.leader_behavior = realization_to_behavior(game, plan);
  const DistortedWeights w = distorted_weights_linear(game, plan, alpha);
  result.follower_utility = follower_value(game, w.weights, follower);
  result.leader_utility = leader_value(game, plan, follower);
  result.leader_plan = std::move(plan);
  result.follower = std::move(follower);
}

}  // namespace

double big_m_for(const Game& game, double alpha) {
  const auto [lo, hi] = utility_range(game, Player::kFollower);
  const double span = std::max(0.0, hi) - std::min(0.0, lo);
  return span * (1.0 + alpha * game.max_sequence_length(Player::kLeader)) + 1.0;
}

SequenceFormModel build_model(const Game& game, Alpha alpha) {
  SequenceFormModel m;
  m.alpha = alpha.value();
  m.big_m = big_m_for(game, m.alpha);
  lp::LinearProgram& lp = m.milp.lp;
  const double a = m.alpha;
  const int nl = game.num_sequences(Player::kLeader);
  const int nf = game.num_sequences(Player::kFollower);

  m.r_leader.resize(nl);
  for (SeqId s = 0; s < nl; ++s) {
    m.r_leader[s] = lp.add_variable(0.0, 1.0, 0.0, "rl_" + std::to_string(s));
  }
  m.r_follower.resize(nf);
  for (SeqId s = 0; s < nf; ++s) {
    m.r_follower[s] = lp.add_variable(0.0, 1.0, 0.0, "rf_" + std::to_string(s));
  }
  m.v.assign(game.num_infosets(), -1);
  for (InfosetId i : game.infosets(Player::kFollower)) {
    m.v[i] = lp.add_variable(-lp::kInf, lp::kInf, 0.0, "v_" + std::to_string(i));
  }
  m.v_root = lp.add_variable(-lp::kInf, lp::kInf, 0.0, "v_root");
  m.slack.resize(nf);
  for (SeqId s = 0; s < nf; ++s) {
    m.slack[s] = lp.add_variable(0.0, lp::kInf, 0.0, "s_" + std::to_string(s));
  }
  const auto leaves = game.leaves();
  m.p.resize(leaves.size());
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    m.p[k] = lp.add_variable(0.0, lp::kInf, game.node(leaves[k]).u_leader,
                             "p_" + std::to_string(k));
  }

  // Best-response value equations, one per follower sequence.
  std::vector<std::vector<NodeId>> leaves_by_seq(nf);
  for (NodeId z : leaves) {
    leaves_by_seq[game.node(z).seq[index_of(Player::kFollower)]].push_back(z);
  }
  for (SeqId s = 0; s < nf; ++s) {
    const SequenceEntry& e = game.sequence_entry(Player::kFollower, s);
    std::vector<Term> terms;
    terms.push_back({s == kEmptySequence ? m.v_root : m.v[e.infoset], 1.0});
    terms.push_back({m.slack[s], -1.0});
    for (InfosetId c : e.child_infosets) terms.push_back({m.v[c], -1.0});
    for (NodeId z : leaves_by_seq[s]) {
      const Node& leaf = game.node(z);
      const SeqId t = leaf.seq[index_of(Player::kLeader)];
      const double u = leaf.u_follower;
      if (u == 0.0) continue;
      if (t == kEmptySequence) {
        terms.push_back({m.r_leader[t], -u});
      } else {
        const SeqId parent = game.sequence_entry(Player::kLeader, t).parent;
        const double mt = game.last_action_count(Player::kLeader, t);
        terms.push_back({m.r_leader[t], -(1.0 - a) * u});
        if (a != 0.0) terms.push_back({m.r_leader[parent], -a / mt * u});
      }
    }
    lp.add_constraint(std::move(terms), Relation::kEqual, 0.0,
                      "value_" + std::to_string(s));
  }

  lp.add_constraint({{m.r_leader[kEmptySequence], 1.0}}, Relation::kEqual, 1.0,
                    "root_l");
  lp.add_constraint({{m.r_follower[kEmptySequence], 1.0}}, Relation::kEqual, 1.0,
                    "root_f");
  for (Player pl : {Player::kLeader, Player::kFollower}) {
    const std::vector<int>& col = pl == Player::kLeader ? m.r_leader : m.r_follower;
    for (InfosetId i : game.infosets(pl)) {
      const Infoset& is = game.infoset(i);
      std::vector<Term> terms{{col[is.parent_seq], 1.0}};
      for (SeqId s : is.action_seq) terms.push_back({col[s], -1.0});
      lp.add_constraint(std::move(terms), Relation::kEqual, 0.0,
                        "flow_" + std::to_string(i));
    }
  }
  for (SeqId s = 0; s < nf; ++s) {
    lp.add_constraint({{m.slack[s], 1.0}, {m.r_follower[s], m.big_m}},
                      Relation::kLessEqual, m.big_m, "bigm_" + std::to_string(s));
  }
  std::vector<Term> total;
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    const Node& leaf = game.node(leaves[k]);
    lp.add_constraint({{m.p[k], 1.0}, {m.r_leader[leaf.seq[0]], -1.0}},
                      Relation::kLessEqual, 0.0, "pl_" + std::to_string(k));
    lp.add_constraint({{m.p[k], 1.0}, {m.r_follower[leaf.seq[1]], -1.0}},
                      Relation::kLessEqual, 0.0, "pf_" + std::to_string(k));
    total.push_back({m.p[k], 1.0});
  }
  lp.add_constraint(std::move(total), Relation::kEqual, 1.0, "mass");
  m.milp.binaries = m.r_follower;
  return m;
}

std::optional<InducedPlan> solve_fixed_follower(const Game& game,
                                                const SequenceFormModel& model,
                                                const PureStrategy& follower) {
  const lp::LinearProgram& lp = model.milp.lp;
  std::vector<double> lower(lp.num_vars()), upper(lp.num_vars());
  for (int j = 0; j < lp.num_vars(); ++j) {
    lower[j] = lp.lower(j);
    upper[j] = lp.upper(j);
  }
  const RealizationPlan rf = pure_to_realization(game, follower);
  for (SeqId s = 0; s < static_cast<SeqId>(rf.values.size()); ++s) {
    lower[model.r_follower[s]] = upper[model.r_follower[s]] = rf[s];
    if (rf[s] == 1.0) lower[model.slack[s]] = upper[model.slack[s]] = 0.0;
  }
  const auto leaves = game.leaves();
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    if (rf[game.node(leaves[k]).seq[1]] == 0.0) {
      lower[model.p[k]] = upper[model.p[k]] = 0.0;
    }
  }
  lp::Solution sol = lp::solve_with_bounds(lp, lower, upper);
  if (sol.status != lp::Status::kOptimal) return std::nullopt;
  InducedPlan out;
  out.plan = clean_plan(game, sol.values, model.r_leader);
  out.leader_utility = sol.objective;
  out.pivots = sol.pivots;
  return out;
}

int worker_count_from_env() {
  if (const char* env = std::getenv("ATSG_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

SolveResult solve_bnb(const Game& game, Alpha alpha,
                      const ExactOptions& options) {
  const auto start = Clock::now();
  const SequenceFormModel model = build_model(game, alpha);
  lp::MilpOptions mo;
  mo.node_limit = options.node_limit;
  mo.deadline = options.deadline;
  lp::MilpResult r = lp::solve_milp(model.milp, mo);
  if (r.solution.status != lp::Status::kOptimal) {
    throw Error("sequence-form MILP reported " +
                std::string(lp::to_string(r.solution.status)) +
                " on a valid game");
  }
  SolveResult result;
  result.method = "bnb";
  fill_result(game, alpha, clean_plan(game, r.solution.values, model.r_leader),
              follower_from_columns(game, r.solution.values, model.r_follower),
              result);
  result.stats.lp_solves = r.stats.lp_solves;
  result.stats.bnb_nodes = r.stats.nodes;
  result.stats.pivots = r.stats.pivots;
  result.stats.wall_ms = elapsed_ms(start);
  return result;
}

SolveResult solve_multilp(const Game& game, Alpha alpha,
                          const ExactOptions& options) {
  const auto start = Clock::now();
  const std::vector<PureStrategy> strategies =
      enumerate_pure_strategies(game, Player::kFollower, options.enumeration_cap);
  const SequenceFormModel model = build_model(game, alpha);

  const std::size_t n = strategies.size();
  std::vector<std::optional<InducedPlan>> plans(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> timed_out{false};
  auto work = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= n || timed_out.load()) return;
      if (options.deadline && Clock::now() >= *options.deadline) {
        timed_out = true;
        return;
      }
      plans[k] = solve_fixed_follower(game, model, strategies[k]);
    }
  };
  const int workers = options.workers > 0 ? options.workers : worker_count_from_env();
  if (workers <= 1 || n < 2) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < std::min<int>(workers, static_cast<int>(n)); ++w) {
      pool.emplace_back(work);
    }
  }
  if (timed_out) throw TimeLimitExceeded();

  // Ordered reduction: best LP objective, then recomputed leader utility,
  // then enumeration order.
  long pivots = 0;
  std::size_t best = n;
  double best_obj = 0.0, best_true = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!plans[k]) continue;
    pivots += plans[k]->pivots;
    const double obj = plans[k]->leader_utility;
    const double truth = leader_value(game, plans[k]->plan, strategies[k]);
    const bool better =
        best == n || obj > best_obj + kTolerance ||
        (obj >= best_obj - kTolerance && truth > best_true + kTolerance);
    if (better) {
      best = k;
      best_obj = obj;
      best_true = truth;
    }
  }
  if (best == n) {
    throw Error("no follower strategy is inducible; the game is malformed");
  }
  SolveResult result;
  result.method = "multilp";
  fill_result(game, alpha, std::move(plans[best]->plan), strategies[best], result);
  result.stats.lp_solves = static_cast<long>(n);
  result.stats.pivots = pivots;
  result.stats.wall_ms = elapsed_ms(start);
  return result;
}

}  // namespace atsg
