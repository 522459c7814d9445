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

#include "atsg/o2uct.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include "atsg/error.hpp"

namespace atsg {

namespace {

using Clock = std::chrono::steady_clock;

// Linear-form coefficients of a follower strategy's perceived utility in the
// leader realization plan: u_f = sum_s coef[s] r(s) (+ the empty-sequence
// term, which is constant).
std::vector<double> follower_coefficients(const Game& game, const PureStrategy& f,
                                          double alpha) {
  const RealizationPlan rf = pure_to_realization(game, f);
  const int nl = game.num_sequences(Player::kLeader);
  std::vector<double> g(nl, 0.0);
  for (NodeId z : game.leaves()) {
    const Node& leaf = game.node(z);
    if (rf[leaf.seq[1]] == 1.0) g[leaf.seq[0]] += leaf.u_follower;
  }
  std::vector<double> coef(nl, 0.0);
  coef[kEmptySequence] = g[kEmptySequence];
  for (SeqId s = 1; s < nl; ++s) {
    const double m = game.last_action_count(Player::kLeader, s);
    coef[s] += (1.0 - alpha) * g[s];
    coef[game.sequence_entry(Player::kLeader, s).parent] += alpha / m * g[s];
  }
  return coef;
}

std::vector<double> leader_coefficients(const Game& game, const PureStrategy& f) {
  const RealizationPlan rf = pure_to_realization(game, f);
  std::vector<double> coef(game.num_sequences(Player::kLeader), 0.0);
  for (NodeId z : game.leaves()) {
    const Node& leaf = game.node(z);
    if (rf[leaf.seq[1]] == 1.0) coef[leaf.seq[0]] += leaf.u_leader;
  }
  return coef;
}

RealizationPlan mix(const RealizationPlan& r, const RealizationPlan& toward,
                    double step) {
  RealizationPlan out = r;
  for (std::size_t s = 0; s < out.values.size(); ++s) {
    out.values[s] = (1.0 - step) * r.values[s] + step * toward.values[s];
  }
  out.values[kEmptySequence] = 1.0;
  return out;
}

// Rescales each infoset's action sequences so they sum to the parent
// sequence again; extrapolating steps would otherwise amplify rounding.
void restore_flow(const Game& game, RealizationPlan& r, InfosetId i) {
  const Infoset& info = game.infoset(i);
  const double parent = r.values[info.parent_seq];
  double sum = 0.0;
  for (SeqId s : info.action_seq) sum += r.values[s];
  for (SeqId s : info.action_seq) {
    r.values[s] = sum > 0.0 ? r.values[s] * parent / sum
                            : parent / static_cast<double>(info.action_seq.size());
    for (InfosetId child : game.sequence_entry(Player::kLeader, s).child_infosets) {
      restore_flow(game, r, child);
    }
  }
}

// r' = (1 + step) r - step v; the caller keeps r' non-negative.
RealizationPlan away(const Game& game, const RealizationPlan& r, const RealizationPlan& v,
                     double step) {
  RealizationPlan out = r;
  for (std::size_t s = 0; s < out.values.size(); ++s) {
    out.values[s] = std::max(0.0, (1.0 + step) * r.values[s] - step * v.values[s]);
  }
  out.values[kEmptySequence] = 1.0;
  for (InfosetId i : game.root_infosets(Player::kLeader)) restore_flow(game, out, i);
  return out;
}

// The plan with the behavior at one uniformly chosen leader infoset made
// pure on a uniformly chosen action.
RealizationPlan local_target(const Game& game, const RealizationPlan& r,
                             std::mt19937_64& rng) {
  const auto ids = game.infosets(Player::kLeader);
  if (ids.empty()) return r;
  BehaviorStrategy b = realization_to_behavior(game, r);
  const InfosetId i = ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)];
  const int n = game.infoset(i).num_actions();
  const int a = std::uniform_int_distribution<int>(0, n - 1)(rng);
  for (int k = 0; k < n; ++k) b.probs[i][k] = k == a ? 1.0 : 0.0;
  return behavior_to_realization(game, b);
}

constexpr double kSupportTol = 1e-12;
constexpr double kAvoid = 1e6;

struct Evaluation {
  DistortedWeights weights;
  BestResponse br;
  double target_value = 0.0;  // perceived follower utility of the target
  double margin() const { return target_value - br.follower_utility; }
};

Evaluation evaluate(const Game& game, const RealizationPlan& plan,
                    const PureStrategy& target, Alpha alpha, AtMode mode) {
  Evaluation e;
  e.weights = distorted_weights(game, plan, alpha, mode);
  e.br = best_response_weighted(game, e.weights.weights, plan);
  e.target_value = follower_value(game, e.weights.weights, target);
  return e;
}

void reject(AdjustState& state, const O2uctConfig& cfg) {
  state.step = std::max(cfg.min_step, state.step * cfg.step_decay);
}

// Observer invoked on every evaluated plan so the caller can keep the best
// re-evaluated leader utility.
using Observer = std::function<void(const RealizationPlan&, const BestResponse&)>;

bool feasibility_pass_impl(const Game& game, AdjustState& state,
                           const PureStrategy& target, const O2uctConfig& cfg,
                           std::mt19937_64& rng, const Observer& observe) {
  const Alpha alpha(cfg.alpha);
  const Evaluation now = evaluate(game, state.plan, target, alpha, cfg.mode);
  PureStrategy toward;
  if (std::bernoulli_distribution(cfg.guided_share)(rng)) {
    std::vector<double> c = follower_coefficients(game, target, cfg.alpha);
    const std::vector<double> b = follower_coefficients(game, now.br.strategy, cfg.alpha);
    for (std::size_t s = 0; s < c.size(); ++s) c[s] -= b[s];
    toward = best_pure_for_weights(game, Player::kLeader, c);
  } else {
    toward = random_pure_strategy(game, Player::kLeader, rng);
  }
  RealizationPlan cand = mix(state.plan, pure_to_realization(game, toward), state.step);
  const Evaluation next = evaluate(game, cand, target, alpha, cfg.mode);
  if (observe) observe(cand, next.br);
  if (next.margin() > now.margin()) {
    state.plan = std::move(cand);
    return true;
  }
  reject(state, cfg);
  return false;
}

// Mix `plan` toward a leader pure strategy trading leader utility against
// the target's advantage over the blocking responses, with the smallest
// weight (by bisection) that makes the target a best response again. Several
// trade-offs are tried and the one leaving the highest leader utility wins.
// False if none restores the target.
bool repair(const Game& game, RealizationPlan& plan, const PureStrategy& target,
            const std::vector<PureStrategy>& blockers, const O2uctConfig& cfg) {
  const Alpha alpha(cfg.alpha);
  const std::vector<double> t = follower_coefficients(game, target, cfg.alpha);
  const std::vector<double> cl = leader_coefficients(game, target);
  std::vector<std::vector<double>> dirs;
  std::vector<double> sum(t.size(), 0.0);
  for (const PureStrategy& blocker : blockers) {
    std::vector<double> d = follower_coefficients(game, blocker, cfg.alpha);
    for (std::size_t s = 0; s < d.size(); ++s) {
      d[s] = t[s] - d[s];
      sum[s] += d[s];
    }
    dirs.push_back(std::move(d));
  }
  if (blockers.size() > 1) dirs.push_back(std::move(sum));

  std::optional<RealizationPlan> best;
  double best_value = -std::numeric_limits<double>::infinity();
  std::set<PureStrategy> tried;
  for (const std::vector<double>& d : dirs) {
    for (double lambda : {0.25, 1.0, 4.0, 16.0, 64.0, -1.0}) {
      std::vector<double> c = d;
      if (lambda > 0.0) {
        for (std::size_t s = 0; s < c.size(); ++s) c[s] = cl[s] + lambda * d[s];
      }
      PureStrategy pw = best_pure_for_weights(game, Player::kLeader, c);
      if (!tried.insert(pw).second) continue;
      const RealizationPlan w = pure_to_realization(game, pw);
      auto margin = [&](double s) {
        return evaluate(game, mix(plan, w, s), target, alpha, cfg.mode).margin();
      };
      if (margin(1.0) < -kTolerance) continue;
      double lo = 0.0;
      double hi = 1.0;
      for (int it = 0; it < 30; ++it) {
        const double mid = 0.5 * (lo + hi);
        (margin(mid) >= -kTolerance ? hi : lo) = mid;
      }
      RealizationPlan cand = mix(plan, w, hi);
      const double v = leader_value(game, cand, target);
      if (v > best_value) {
        best_value = v;
        best = std::move(cand);
      }
    }
  }
  if (!best) return false;
  plan = std::move(*best);
  return true;
}

void remember(std::vector<PureStrategy>& list, const PureStrategy& s) {
  if (std::find(list.begin(), list.end(), s) == list.end()) list.push_back(s);
}

bool positive_pass_impl(const Game& game, AdjustState& state,
                        const PureStrategy& target, const O2uctConfig& cfg,
                        std::mt19937_64& rng, const Observer& observe) {
  const Alpha alpha(cfg.alpha);
  const double before = leader_value(game, state.plan, target);
  RealizationPlan cand;
  if (std::bernoulli_distribution(cfg.guided_share)(rng)) {
    std::vector<double> c = leader_coefficients(game, target);
    if (!state.blockers.empty()) {
      // Trade leader gain against the slack over the blocking responses.
      const std::vector<double> t = follower_coefficients(game, target, cfg.alpha);
      std::uniform_real_distribution<double> log_lambda(std::log(0.25), std::log(8.0));
      for (const PureStrategy& blocker : state.blockers) {
        if (!std::bernoulli_distribution(0.5)(rng)) continue;
        const double lambda = std::exp(log_lambda(rng));
        const std::vector<double> b = follower_coefficients(game, blocker, cfg.alpha);
        for (std::size_t s = 0; s < c.size(); ++s) c[s] += lambda * (t[s] - b[s]);
      }
    }
    if (std::bernoulli_distribution(0.5)(rng)) {
      cand = mix(state.plan, pure_to_realization(game, best_pure_for_weights(game, Player::kLeader, c)),
                 state.step);
    } else {
      // Away step: shift mass off the worst pure strategy the plan still
      // plays with positive probability.
      for (std::size_t s = 0; s < c.size(); ++s) {
        c[s] = -c[s] - (state.plan.values[s] <= kSupportTol ? kAvoid : 0.0);
      }
      const RealizationPlan v =
          pure_to_realization(game, best_pure_for_weights(game, Player::kLeader, c));
      double cap = std::numeric_limits<double>::infinity();
      for (std::size_t s = 1; s < c.size(); ++s) {
        const double r = state.plan.values[s];
        if (v.values[s] == 1.0 && r < 1.0) cap = std::min(cap, r / (1.0 - r));
      }
      cand = away(game, state.plan, v, std::min(state.step, cap));
    }
  } else if (std::bernoulli_distribution(0.5)(rng)) {
    cand = mix(state.plan, pure_to_realization(game, random_pure_strategy(game, Player::kLeader, rng)),
               state.step);
  } else {
    cand = mix(state.plan, local_target(game, state.plan, rng), state.step);
  }
  Evaluation next = evaluate(game, cand, target, alpha, cfg.mode);
  if (observe) observe(cand, next.br);
  std::vector<PureStrategy> blockers;
  for (int k = 0; k < cfg.repairs && next.margin() < -kTolerance; ++k) {
    if (std::find(blockers.begin(), blockers.end(), next.br.strategy) == blockers.end()) {
      blockers.push_back(next.br.strategy);
    }
    if (!repair(game, cand, target, blockers, cfg)) break;
    next = evaluate(game, cand, target, alpha, cfg.mode);
    if (observe) observe(cand, next.br);
  }
  const bool still_best = next.margin() >= -kTolerance;
  if (still_best && leader_value(game, cand, target) > before) {
    state.plan = std::move(cand);
    return true;
  }
  for (const PureStrategy& b : blockers) remember(state.blockers, b);
  if (!still_best) remember(state.blockers, next.br.strategy);
  reject(state, cfg);
  return false;
}

}  // namespace

void O2uctConfig::validate() const {
  if (max_positive_passes < 1 || improvement_window < 1 ||
      max_feasibility_passes < 1 || positive_patience < 1 || max_samples < 1 ||
      repairs < 0) {
    throw InputError("o2uct caps must be positive");
  }
  if (!(min_improvement >= 0.0) || !(uct_c >= 0.0)) {
    throw InputError("o2uct tolerances must be non-negative");
  }
  if (!(step > 0.0 && step <= 1.0) || !(min_step > 0.0 && min_step <= step) ||
      !(step_decay > 0.0 && step_decay <= 1.0)) {
    throw InputError("o2uct step parameters out of range");
  }
  if (!(guided_share >= 0.0 && guided_share <= 1.0)) {
    throw InputError("guided share must be in [0, 1]");
  }
  Alpha check(alpha);
  (void)check;
}

UctTree::UctTree(const Game& game, double c)
    : game_(game), c_(c), root_(std::make_unique<UctNode>()) {
  const auto roots = game.root_infosets(Player::kFollower);
  root_->infoset = roots.empty() ? kNone : roots.front();
}

PureStrategy UctTree::sample(std::mt19937_64& rng) {
  const Player f = Player::kFollower;
  PureStrategy s = empty_pure_strategy(game_, f);
  const auto roots = game_.root_infosets(f);
  std::vector<InfosetId> stack(roots.rbegin(), roots.rend());
  path_.assign(1, root_.get());
  UctNode* node = root_.get();
  bool in_tree = true;
  while (!stack.empty()) {
    const InfosetId i = stack.back();
    stack.pop_back();
    const Infoset& info = game_.infoset(i);
    const int n = info.num_actions();
    int a = 0;
    bool fresh = false;
    if (in_tree) {
      if (node->children.empty()) node->children.resize(n);
      std::vector<int> unvisited;
      for (int k = 0; k < n; ++k) {
        if (!node->children[k] || node->children[k]->visits == 0) unvisited.push_back(k);
      }
      if (!unvisited.empty()) {
        a = unvisited[std::uniform_int_distribution<std::size_t>(0, unvisited.size() - 1)(rng)];
        fresh = true;
      } else {
        double best = -std::numeric_limits<double>::infinity();
        const double log_n = std::log(static_cast<double>(node->visits));
        for (int k = 0; k < n; ++k) {
          const UctNode& ch = *node->children[k];
          const double score = ch.total_reward / ch.visits +
                               c_ * std::sqrt(log_n / ch.visits);
          if (score > best) {
            best = score;
            a = k;
          }
        }
      }
    } else {
      a = std::uniform_int_distribution<int>(0, n - 1)(rng);
    }
    s.actions[i] = a;
    const auto& next = game_.sequence_entry(f, info.action_seq[a]).child_infosets;
    stack.insert(stack.end(), next.rbegin(), next.rend());
    if (in_tree) {
      auto& child = node->children[a];
      if (!child) {
        child = std::make_unique<UctNode>();
        child->infoset = stack.empty() ? kNone : stack.back();
      }
      node = child.get();
      path_.push_back(node);
      if (fresh) in_tree = false;
    }
  }
  return s;
}

void UctTree::backpropagate(double reward) {
  for (UctNode* n : path_) {
    ++n->visits;
    n->total_reward += reward;
  }
  path_.clear();
}

bool feasibility_pass(const Game& game, AdjustState& state,
                      const PureStrategy& target, const O2uctConfig& cfg,
                      std::mt19937_64& rng) {
  return feasibility_pass_impl(game, state, target, cfg, rng, nullptr);
}

bool positive_pass(const Game& game, AdjustState& state,
                   const PureStrategy& target, const O2uctConfig& cfg,
                   std::mt19937_64& rng) {
  return positive_pass_impl(game, state, target, cfg, rng, nullptr);
}

double feasibility_margin(const Game& game, const RealizationPlan& plan,
                          const PureStrategy& target, Alpha alpha, AtMode mode) {
  return evaluate(game, plan, target, alpha, mode).margin();
}

SolveResult run_o2uct(const Game& game, const O2uctConfig& cfg, O2uctTrace* trace) {
  cfg.validate();
  const auto start = Clock::now();
  const Alpha alpha(cfg.alpha);
  std::mt19937_64 rng(cfg.seed);

  const auto [u_min, u_max] = utility_range(game, Player::kLeader);
  const double infeasible_reward = u_min - 1.0;
  auto scale = [&](double r) { return (r - infeasible_reward) / (u_max - infeasible_reward); };

  RealizationPlan best_plan =
      behavior_to_realization(game, uniform_behavior(game, Player::kLeader));
  double best_u = distorted_best_response(game, best_plan, alpha, cfg.mode).leader_utility;
  Observer observe = [&](const RealizationPlan& plan, const BestResponse& br) {
    if (br.leader_utility > best_u) {
      best_u = br.leader_utility;
      best_plan = plan;
    }
  };

  struct Memo {
    AdjustState state;
    bool infeasible = false;
    double reward = 0.0;
  };
  std::map<PureStrategy, Memo> memo;
  UctTree tree(game, cfg.uct_c);
  std::vector<double> history;
  SolveStats stats;

  auto check_deadline = [&] {
    if (cfg.deadline && Clock::now() >= *cfg.deadline) throw TimeLimitExceeded();
  };

  while (stats.samples < cfg.max_samples &&
         stats.positive_passes < cfg.max_positive_passes) {
    check_deadline();
    const PureStrategy target = tree.sample(rng);
    ++stats.samples;
    auto [it, inserted] = memo.try_emplace(target);
    Memo& m = it->second;
    if (inserted) m.state = AdjustState{best_plan, cfg.step};

    if (!m.infeasible) {
      double margin = feasibility_margin(game, m.state.plan, target, alpha, cfg.mode);
      long consecutive = 0;
      while (margin < -kTolerance) {
        if (consecutive >= cfg.max_feasibility_passes) {
          m.infeasible = true;
          break;
        }
        if ((consecutive & 255) == 0) check_deadline();
        feasibility_pass_impl(game, m.state, target, cfg, rng, observe);
        ++consecutive;
        ++stats.feasibility_passes;
        margin = feasibility_margin(game, m.state.plan, target, alpha, cfg.mode);
      }
    }
    if (m.infeasible) {
      m.reward = infeasible_reward;
    } else {
      long rejections = 0;
      while (rejections < cfg.positive_patience &&
             stats.positive_passes < cfg.max_positive_passes) {
        const bool kept =
            positive_pass_impl(game, m.state, target, cfg, rng, observe);
        ++stats.positive_passes;
        rejections = kept ? 0 : rejections + 1;
      }
      m.reward = leader_value(game, m.state.plan, target);
      observe(m.state.plan,
              distorted_best_response(game, m.state.plan, alpha, cfg.mode));
    }
    tree.backpropagate(scale(m.reward));

    history.push_back(best_u);
    if (trace) trace->best_per_sample.push_back(best_u);
    const long n = static_cast<long>(history.size());
    if (n > cfg.improvement_window &&
        history[n - 1] - history[n - 1 - cfg.improvement_window] < cfg.min_improvement) {
      break;
    }
  }

  SolveResult result;
  result.method = "o2uct";
  result.alpha = cfg.alpha;
  result.mode = cfg.mode;
  evaluate_into(game, best_plan, result);
  result.stats = stats;
  result.stats.wall_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return result;
}

}  // namespace atsg
