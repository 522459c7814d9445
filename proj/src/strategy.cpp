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

#include "atsg/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace atsg {
namespace {

[[noreturn]] void invalid(const std::string& msg) { throw InputError(msg); }


}  // namespace

void validate(const Game& game, const BehaviorStrategy& b) {
  if (static_cast<int>(b.probs.size()) != game.num_infosets()) {
    invalid("behavior strategy: wrong table size");
  }
  for (const Infoset& info : game.infosets()) {
    const auto& row = b.probs[info.id];
    if (info.player != b.player) {
      if (!row.empty()) invalid("behavior strategy: entry for opponent infoset");
      continue;
    }
    if (static_cast<int>(row.size()) != info.num_actions()) {
      invalid("behavior strategy: infoset '" + info.label +
              "' has the wrong number of probabilities");
    }
    double sum = 0.0;
    for (double q : row) {
      if (!(q >= 0.0)) invalid("behavior strategy: negative probability at '" +
                               info.label + "'");
      sum += q;
    }
    if (std::abs(sum - 1.0) > kTolerance) {
      invalid("behavior strategy: probabilities at '" + info.label +
              "' do not sum to 1");
    }
  }
}

void validate(const Game& game, const RealizationPlan& r, double tol) {
  const Player p = r.player;
  if (static_cast<int>(r.values.size()) != game.num_sequences(p)) {
    invalid("realization plan: wrong table size");
  }
  if (std::abs(r.values[kEmptySequence] - 1.0) > tol) {
    invalid("realization plan: value of the empty sequence is not 1");
  }
  for (double v : r.values) {
    if (v < -tol || v > 1.0 + tol) invalid("realization plan: value outside [0,1]");
  }
  for (InfosetId i : game.infosets(p)) {
    const Infoset& info = game.infoset(i);
    double sum = 0.0;
    for (SeqId s : info.action_seq) sum += r.values[s];
    if (std::abs(sum - r.values[info.parent_seq]) > tol) {
      invalid("realization plan: flow not conserved at '" + info.label + "'");
    }
  }
}

void validate(const Game& game, const PureStrategy& s) {
  if (static_cast<int>(s.actions.size()) != game.num_infosets()) {
    invalid("pure strategy: wrong table size");
  }
  std::vector<char> reachable(game.num_infosets(), 0);
  for (InfosetId i : reachable_infosets(game, s)) reachable[i] = 1;
  for (const Infoset& info : game.infosets()) {
    const int a = s.actions[info.id];
    if (reachable[info.id]) {
      if (a < 0 || a >= info.num_actions()) {
        invalid("pure strategy: no valid action at reachable infoset '" +
                info.label + "'");
      }
    } else if (a != kNone) {
      invalid("pure strategy: action set at unreachable infoset '" +
              info.label + "'");
    }
  }
}

void validate(const Game& game, const MixedStrategy& m) {
  double sum = 0.0;
  for (std::size_t k = 0; k < m.support.size(); ++k) {
    const auto& [pure, prob] = m.support[k];
    if (pure.player != m.player) invalid("mixed strategy: wrong player");
    validate(game, pure);
    if (!(prob >= 0.0)) invalid("mixed strategy: negative probability");
    sum += prob;
    for (std::size_t j = 0; j < k; ++j) {
      if (m.support[j].first == pure) {
        invalid("mixed strategy: duplicate pure strategy");
      }
    }
  }
  if (std::abs(sum - 1.0) > kTolerance) {
    invalid("mixed strategy: probabilities do not sum to 1");
  }
}

BehaviorStrategy uniform_behavior(const Game& game, Player p) {
  BehaviorStrategy b{p, std::vector<std::vector<double>>(game.num_infosets())};
  for (InfosetId i : game.infosets(p)) {
    const int m = game.infoset(i).num_actions();
    b.probs[i].assign(m, 1.0 / m);
  }
  return b;
}

PureStrategy empty_pure_strategy(const Game& game, Player p) {
  return PureStrategy{p, std::vector<int>(game.num_infosets(), kNone)};
}

RealizationPlan behavior_to_realization(const Game& game,
                                        const BehaviorStrategy& b) {
  const auto table = game.sequence_table(b.player);
  RealizationPlan r{b.player, std::vector<double>(table.size(), 0.0)};
  r.values[kEmptySequence] = 1.0;
  for (SeqId s = 1; s < static_cast<SeqId>(table.size()); ++s) {
    const SequenceEntry& e = table[s];
    r.values[s] = r.values[e.parent] * b.probs[e.infoset][e.action];
  }
  return r;
}

BehaviorStrategy realization_to_behavior(const Game& game,
                                         const RealizationPlan& r) {
  BehaviorStrategy b{r.player,
                     std::vector<std::vector<double>>(game.num_infosets())};
  for (InfosetId i : game.infosets(r.player)) {
    const Infoset& info = game.infoset(i);
    const int m = info.num_actions();
    double flow = 0.0;
    for (SeqId s : info.action_seq) flow += std::max(0.0, r.values[s]);
    auto& row = b.probs[i];
    if (flow <= 1e-12) {
      row.assign(m, 1.0 / m);
      continue;
    }
    row.resize(m);
    for (int a = 0; a < m; ++a) {
      row[a] = std::max(0.0, r.values[info.action_seq[a]]) / flow;
    }
  }
  return b;
}

RealizationPlan pure_to_realization(const Game& game, const PureStrategy& s) {
  const auto table = game.sequence_table(s.player);
  RealizationPlan r{s.player, std::vector<double>(table.size(), 0.0)};
  r.values[kEmptySequence] = 1.0;
  for (SeqId q = 1; q < static_cast<SeqId>(table.size()); ++q) {
    const SequenceEntry& e = table[q];
    if (r.values[e.parent] != 0.0 && s.actions[e.infoset] == e.action) {
      r.values[q] = 1.0;
    }
  }
  return r;
}

RealizationPlan mixed_to_realization(const Game& game, const MixedStrategy& m) {
  RealizationPlan r{m.player,
                    std::vector<double>(game.num_sequences(m.player), 0.0)};
  for (const auto& [pure, prob] : m.support) {
    const RealizationPlan pr = pure_to_realization(game, pure);
    for (std::size_t s = 0; s < pr.values.size(); ++s) {
      r.values[s] += prob * pr.values[s];
    }
  }
  return r;
}

BehaviorStrategy mixed_to_behavior(const Game& game, const MixedStrategy& m) {
  return realization_to_behavior(game, mixed_to_realization(game, m));
}

bool plays_sequence(const Game& game, const PureStrategy& s, SeqId seq) {
  for (SeqId cur = seq; cur != kEmptySequence;) {
    const SequenceEntry& e = game.sequence_entry(s.player, cur);
    if (s.actions[e.infoset] != e.action) return false;
    cur = e.parent;
  }
  return true;
}

std::vector<InfosetId> reachable_infosets(const Game& game,
                                          const PureStrategy& s) {
  std::vector<InfosetId> out;
  std::vector<InfosetId> stack;
  const auto roots = game.root_infosets(s.player);
  stack.assign(roots.rbegin(), roots.rend());
  while (!stack.empty()) {
    const InfosetId i = stack.back();
    stack.pop_back();
    out.push_back(i);
    const int a = s.actions[i];
    if (a < 0 || a >= game.infoset(i).num_actions()) continue;
    const auto& next =
        game.sequence_entry(s.player, game.infoset(i).action_seq[a])
            .child_infosets;
    stack.insert(stack.end(), next.rbegin(), next.rend());
  }
  return out;
}

long double count_pure_strategies(const Game& game, Player p) {
  const auto table = game.sequence_table(p);
  std::vector<long double> count(table.size(), 1.0L);
  for (SeqId s = static_cast<SeqId>(table.size()) - 1; s >= 0; --s) {
    long double c = 1.0L;
    for (InfosetId i : table[s].child_infosets) {
      long double options = 0.0L;
      for (SeqId child : game.infoset(i).action_seq) options += count[child];
      c *= options;
    }
    count[s] = c;
  }
  return count[kEmptySequence];
}

namespace {

void enumerate_rec(const Game& game, std::vector<InfosetId>& pending,
                   PureStrategy& cur, std::vector<PureStrategy>& out) {
  if (pending.empty()) {
    out.push_back(cur);
    return;
  }
  const InfosetId i = pending.back();
  pending.pop_back();
  const Infoset& info = game.infoset(i);
  for (int a = 0; a < info.num_actions(); ++a) {
    cur.actions[i] = a;
    const auto& next =
        game.sequence_entry(cur.player, info.action_seq[a]).child_infosets;
    pending.insert(pending.end(), next.rbegin(), next.rend());
    enumerate_rec(game, pending, cur, out);
    pending.resize(pending.size() - next.size());
  }
  cur.actions[i] = kNone;
  pending.push_back(i);
}

}  // namespace

std::vector<PureStrategy> enumerate_pure_strategies(const Game& game, Player p,
                                                    long long cap) {
  const long double count = count_pure_strategies(game, p);
  if (count > static_cast<long double>(cap)) {
    const long double clamped =
        std::min(count, static_cast<long double>(
                            std::numeric_limits<long long>::max()));
    throw EnumerationCapExceeded(static_cast<long long>(clamped), cap);
  }
  std::vector<PureStrategy> out;
  out.reserve(static_cast<std::size_t>(count));
  PureStrategy cur = empty_pure_strategy(game, p);
  const auto roots = game.root_infosets(p);
  std::vector<InfosetId> pending(roots.rbegin(), roots.rend());
  enumerate_rec(game, pending, cur, out);
  return out;
}

PureStrategy random_pure_strategy(const Game& game, Player p,
                                  std::mt19937_64& rng) {
  return resample_pure_strategy(game, empty_pure_strategy(game, p), 0, rng);
}

PureStrategy resample_pure_strategy(const Game& game, const PureStrategy& base,
                                    int from_depth, std::mt19937_64& rng) {
  const Player p = base.player;
  PureStrategy s = empty_pure_strategy(game, p);
  std::vector<InfosetId> stack;
  const auto roots = game.root_infosets(p);
  stack.assign(roots.rbegin(), roots.rend());
  while (!stack.empty()) {
    const InfosetId i = stack.back();
    stack.pop_back();
    const Infoset& info = game.infoset(i);
    int a;
    if (info.depth < from_depth && base.defines(i)) {
      a = base.action(i);
    } else {
      std::uniform_int_distribution<int> pick(0, info.num_actions() - 1);
      a = pick(rng);
    }
    s.actions[i] = a;
    const auto& next = game.sequence_entry(p, info.action_seq[a]).child_infosets;
    stack.insert(stack.end(), next.rbegin(), next.rend());
  }
  return s;
}

PureStrategy best_pure_for_weights(const Game& game, Player p,
                                   std::span<const double> coef) {
  const auto table = game.sequence_table(p);
  const int n = static_cast<int>(table.size());
  // value[s] = coef[s] + best continuation below s; children have larger ids.
  std::vector<double> value(coef.begin(), coef.end());
  std::vector<int> choice(game.num_infosets(), kNone);
  for (SeqId s = n - 1; s >= 0; --s) {
    for (InfosetId i : table[s].child_infosets) {
      const Infoset& info = game.infoset(i);
      int best = 0;
      for (int a = 1; a < info.num_actions(); ++a) {
        if (value[info.action_seq[a]] > value[info.action_seq[best]] + kTolerance) {
          best = a;
        }
      }
      choice[i] = best;
      value[s] += value[info.action_seq[best]];
    }
  }
  PureStrategy out = empty_pure_strategy(game, p);
  std::vector<InfosetId> stack;
  const auto roots = game.root_infosets(p);
  stack.assign(roots.begin(), roots.end());
  while (!stack.empty()) {
    const InfosetId i = stack.back();
    stack.pop_back();
    out.actions[i] = choice[i];
    const auto& next =
        game.sequence_entry(p, game.infoset(i).action_seq[choice[i]]).child_infosets;
    stack.insert(stack.end(), next.begin(), next.end());
  }
  return out;
}

Utilities expected_utilities(const Game& game, const RealizationPlan& leader,
                             const RealizationPlan& follower) {
  Utilities u;
  for (NodeId z : game.leaves()) {
    const Node& leaf = game.node(z);
    const double reach = leader.values[leaf.seq[0]] * follower.values[leaf.seq[1]];
    u.leader += reach * leaf.u_leader;
    u.follower += reach * leaf.u_follower;
  }
  return u;
}

BestResponse best_response(const Game& game, const RealizationPlan& leader) {
  return best_response_weighted(game, leader.values, leader);
}

BestResponse best_response_weighted(const Game& game,
                                    std::span<const double> perceived,
                                    const RealizationPlan& leader,
                                    double tol) {
  const auto table = game.sequence_table(Player::kFollower);
  const int n = static_cast<int>(table.size());
  // Subtree values per follower sequence: (perceived follower, true leader).
  std::vector<double> vf(n, 0.0), vl(n, 0.0);
  for (NodeId z : game.leaves()) {
    const Node& leaf = game.node(z);
    vf[leaf.seq[1]] += perceived[leaf.seq[0]] * leaf.u_follower;
    vl[leaf.seq[1]] += leader.values[leaf.seq[0]] * leaf.u_leader;
  }
  std::vector<int> choice(game.num_infosets(), kNone);
  // Children carry larger ids than their prefix, so a reverse sweep sees
  // every subtree before its parent.
  for (SeqId s = n - 1; s >= 0; --s) {
    for (InfosetId i : table[s].child_infosets) {
      const Infoset& info = game.infoset(i);
      double best_f = -std::numeric_limits<double>::infinity();
      for (SeqId c : info.action_seq) best_f = std::max(best_f, vf[c]);
      double best_l = -std::numeric_limits<double>::infinity();
      for (SeqId c : info.action_seq) {
        if (vf[c] >= best_f - tol) best_l = std::max(best_l, vl[c]);
      }
      int pick = kNone;
      for (int a = 0; a < info.num_actions(); ++a) {
        const SeqId c = info.action_seq[a];
        if (vf[c] >= best_f - tol && vl[c] >= best_l - tol) {
          pick = a;
          break;
        }
      }
      choice[i] = pick;
      vf[s] += vf[info.action_seq[pick]];
      vl[s] += vl[info.action_seq[pick]];
    }
  }
  BestResponse br;
  br.strategy = empty_pure_strategy(game, Player::kFollower);
  std::vector<InfosetId> stack(table[kEmptySequence].child_infosets.rbegin(),
                               table[kEmptySequence].child_infosets.rend());
  while (!stack.empty()) {
    const InfosetId i = stack.back();
    stack.pop_back();
    br.strategy.actions[i] = choice[i];
    const auto& next = table[game.infoset(i).action_seq[choice[i]]].child_infosets;
    stack.insert(stack.end(), next.rbegin(), next.rend());
  }
  br.follower_utility = vf[kEmptySequence];
  br.leader_utility = vl[kEmptySequence];
  return br;
}

double follower_value(const Game& game, std::span<const double> perceived,
                      const PureStrategy& follower) {
  const RealizationPlan rf = pure_to_realization(game, follower);
  double v = 0.0;
  for (NodeId z : game.leaves()) {
    const Node& leaf = game.node(z);
    if (rf.values[leaf.seq[1]] != 0.0) v += perceived[leaf.seq[0]] * leaf.u_follower;
  }
  return v;
}

double leader_value(const Game& game, const RealizationPlan& leader,
                    const PureStrategy& follower) {
  return expected_utilities(game, leader, pure_to_realization(game, follower))
      .leader;
}

}  // namespace atsg
