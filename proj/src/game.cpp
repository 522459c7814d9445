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

#include "atsg/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace atsg {
namespace {

std::string node_name(long long spec_id) {
  return "node " + std::to_string(spec_id);
}

[[noreturn]] void fail(GameErrorKind kind, const std::string& msg) {
  throw GameError(kind, msg);
}

}  // namespace

std::string_view to_string(Player p) {
  return p == Player::kLeader ? "leader" : "follower";
}

Sequence Sequence::init() const {
  if (moves_.empty()) throw EmptySequence();
  return Sequence(player_, {moves_.begin(), moves_.end() - 1});
}

Sequence Sequence::extended(InfosetId infoset, int action) const {
  std::vector<Move> moves = moves_;
  moves.emplace_back(infoset, action);
  return Sequence(player_, std::move(moves));
}

int Game::last_action_count(Player p, SeqId s) const {
  const SequenceEntry& e = sequence_entry(p, s);
  return e.infoset == kNone ? 1 : infosets_[e.infoset].num_actions();
}

Sequence Game::sequence(Player p, SeqId s) const {
  std::vector<Sequence::Move> moves;
  for (SeqId cur = s; cur != kEmptySequence;) {
    const SequenceEntry& e = sequence_entry(p, cur);
    moves.emplace_back(e.infoset, e.action);
    cur = e.parent;
  }
  std::reverse(moves.begin(), moves.end());
  return Sequence(p, std::move(moves));
}

SeqId Game::find_sequence(const Sequence& s) const {
  const Player p = s.player();
  SeqId cur = kEmptySequence;
  for (const auto& [infoset_id, action] : s.moves()) {
    if (infoset_id < 0 || infoset_id >= num_infosets()) return kNone;
    const Infoset& info = infosets_[infoset_id];
    if (info.player != p || info.parent_seq != cur) return kNone;
    if (action < 0 || action >= info.num_actions()) return kNone;
    cur = info.action_seq[action];
  }
  return cur;
}

bool Game::is_prefix(Player p, SeqId prefix, SeqId s) const {
  const int target_len = sequence_entry(p, prefix).length;
  SeqId cur = s;
  while (sequence_entry(p, cur).length > target_len) {
    cur = sequence_entry(p, cur).parent;
  }
  return cur == prefix;
}

NodeId Game::leaf_of(SeqId leader_seq, SeqId follower_seq) const {
  const std::pair<SeqId, SeqId> key{leader_seq, follower_seq};
  auto it = std::lower_bound(
      leaf_index_.begin(), leaf_index_.end(), key,
      [](const auto& entry, const auto& k) { return entry.first < k; });
  if (it == leaf_index_.end() || it->first != key) return kNone;
  return it->second;
}

Game build_game(const GameSpec& spec) {
  const std::size_t n = spec.nodes.size();
  if (n == 0) fail(GameErrorKind::kMalformed, "game has no nodes");

  std::unordered_map<long long, int> index;
  index.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!index.emplace(spec.nodes[i].id, static_cast<int>(i)).second) {
      fail(GameErrorKind::kMalformed,
           node_name(spec.nodes[i].id) + ": duplicate node id");
    }
  }
  auto root_it = index.find(spec.root);
  if (root_it == index.end()) {
    fail(GameErrorKind::kMalformed,
         "root " + node_name(spec.root) + " does not exist");
  }
  const int root = root_it->second;

  // Shape checks and child tables, in spec order.
  std::vector<std::vector<int>> children(n);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeSpec& ns = spec.nodes[i];
    const bool leaf = ns.payoffs.has_value();
    if (leaf) {
      if (!ns.actions.empty() || !ns.infoset.empty() || ns.player) {
        fail(GameErrorKind::kMalformed,
             node_name(ns.id) + ": leaf must not declare player, infoset or actions");
      }
      for (double u : *ns.payoffs) {
        if (!std::isfinite(u)) {
          fail(GameErrorKind::kMalformed,
               node_name(ns.id) + ": non-finite payoff");
        }
      }
    } else {
      if (!ns.player) {
        fail(GameErrorKind::kMalformed,
             node_name(ns.id) + ": decision node without acting player");
      }
      if (ns.infoset.empty()) {
        fail(GameErrorKind::kMalformed,
             node_name(ns.id) + ": decision node without infoset");
      }
      if (ns.actions.empty()) {
        fail(GameErrorKind::kMalformed,
             node_name(ns.id) + ": decision node needs at least one action");
      }
      children[i].assign(ns.actions.size(), -1);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const NodeSpec& ns = spec.nodes[i];
    if (static_cast<int>(i) == root) {
      if (ns.parent) {
        fail(GameErrorKind::kMalformed, node_name(ns.id) + ": root has a parent");
      }
      continue;
    }
    if (!ns.parent || !ns.incoming_action) {
      fail(GameErrorKind::kMalformed,
           node_name(ns.id) + ": non-root node needs parent and incoming_action");
    }
    auto p = index.find(*ns.parent);
    if (p == index.end()) {
      fail(GameErrorKind::kMalformed,
           node_name(ns.id) + ": unknown parent " + std::to_string(*ns.parent));
    }
    const int parent = p->second;
    if (spec.nodes[parent].payoffs) {
      fail(GameErrorKind::kMalformed,
           node_name(ns.id) + ": parent is a leaf");
    }
    const int a = *ns.incoming_action;
    if (a < 0 || a >= static_cast<int>(children[parent].size())) {
      fail(GameErrorKind::kMalformed,
           node_name(ns.id) + ": incoming_action out of range");
    }
    if (children[parent][a] != -1) {
      fail(GameErrorKind::kMalformed,
           node_name(ns.id) + ": parent action already has a child");
    }
    children[parent][a] = static_cast<int>(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < children[i].size(); ++a) {
      if (children[i][a] == -1) {
        fail(GameErrorKind::kMalformed,
             node_name(spec.nodes[i].id) + ": action " + std::to_string(a) +
                 " has no child");
      }
    }
  }

  // Preorder from the root. With one parent per node, a node the traversal
  // never reaches lies on a parent cycle.
  std::vector<int> order;
  order.reserve(n);
  {
    std::vector<int> stack = {root};
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      order.push_back(cur);
      for (auto it = children[cur].rbegin(); it != children[cur].rend(); ++it) {
        stack.push_back(*it);
      }
    }
  }
  if (order.size() != n) {
    std::vector<char> seen(n, 0);
    for (int i : order) seen[i] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (!seen[i]) {
        fail(GameErrorKind::kCycleDetected,
             node_name(spec.nodes[i].id) + ": lies on a parent cycle");
      }
    }
  }

  Game game;
  game.player_names_ = spec.player_names;
  game.nodes_.resize(n);
  std::vector<int> new_id(n);
  for (std::size_t k = 0; k < n; ++k) new_id[order[k]] = static_cast<int>(k);

  for (int p = 0; p < 2; ++p) {
    game.sequences_[p].push_back(SequenceEntry{});
  }
  std::unordered_map<std::string, InfosetId> infoset_ids;

  for (std::size_t k = 0; k < n; ++k) {
    const int src = order[k];
    const NodeSpec& ns = spec.nodes[src];
    Node& node = game.nodes_[k];
    node.id = static_cast<NodeId>(k);
    node.spec_id = ns.id;
    if (src != root) {
      node.parent = new_id[index.at(*ns.parent)];
      node.incoming_action = *ns.incoming_action;
      const Node& parent = game.nodes_[node.parent];
      node.depth = parent.depth + 1;
      node.seq = parent.seq;
      const Infoset& pinfo = game.infosets_[parent.infoset];
      node.seq[index_of(parent.player)] =
          pinfo.action_seq[node.incoming_action];
    }
    if (ns.payoffs) {
      node.u_leader = (*ns.payoffs)[0];
      node.u_follower = (*ns.payoffs)[1];
      game.leaves_.push_back(node.id);
      continue;
    }
    node.player = *ns.player;
    node.children.reserve(children[src].size());
    for (int c : children[src]) node.children.push_back(new_id[c]);

    const int pi = index_of(node.player);
    auto [it, inserted] = infoset_ids.emplace(
        ns.infoset, static_cast<InfosetId>(game.infosets_.size()));
    if (inserted) {
      Infoset info;
      info.id = it->second;
      info.label = ns.infoset;
      info.player = node.player;
      info.actions = ns.actions;
      info.parent_seq = node.seq[pi];
      auto& table = game.sequences_[pi];
      info.depth = table[info.parent_seq].length;
      table[info.parent_seq].child_infosets.push_back(info.id);
      for (int a = 0; a < info.num_actions(); ++a) {
        SequenceEntry e;
        e.parent = info.parent_seq;
        e.infoset = info.id;
        e.action = a;
        e.length = info.depth + 1;
        info.action_seq.push_back(static_cast<SeqId>(table.size()));
        table.push_back(std::move(e));
        game.max_len_[pi] = std::max(game.max_len_[pi], info.depth + 1);
      }
      game.player_infosets_[pi].push_back(info.id);
      game.infosets_.push_back(std::move(info));
    } else {
      const Infoset& info = game.infosets_[it->second];
      if (info.player != node.player) {
        fail(GameErrorKind::kInfosetPlayerMismatch,
             "infoset '" + ns.infoset + "': " + node_name(ns.id) +
                 " has acting player " + std::string(to_string(node.player)) +
                 " but the infoset belongs to " +
                 std::string(to_string(info.player)));
      }
      if (info.actions != ns.actions) {
        fail(GameErrorKind::kInfosetActionMismatch,
             "infoset '" + ns.infoset + "': " + node_name(ns.id) +
                 " declares a different action set");
      }
      if (info.parent_seq != node.seq[pi]) {
        fail(GameErrorKind::kPerfectRecallViolation,
             "infoset '" + ns.infoset + "': " + node_name(ns.id) +
                 " is reached by a different own history");
      }
    }
    node.infoset = it->second;
    game.infosets_[node.infoset].nodes.push_back(node.id);
  }

  game.leaf_index_.reserve(game.leaves_.size());
  for (NodeId z : game.leaves_) {
    const Node& leaf = game.nodes_[z];
    game.leaf_index_.push_back({{leaf.seq[0], leaf.seq[1]}, z});
  }
  std::sort(game.leaf_index_.begin(), game.leaf_index_.end());
  return game;
}

double sequence_payoff(const Game& game, Player p, SeqId leader_seq,
                       SeqId follower_seq) {
  const NodeId z = game.leaf_of(leader_seq, follower_seq);
  return z == kNone ? 0.0 : game.node(z).utility(p);
}

double sequence_payoff(const Game& game, Player p, const Sequence& leader,
                       const Sequence& follower) {
  const SeqId l = game.find_sequence(leader);
  const SeqId f = game.find_sequence(follower);
  if (l == kNone || f == kNone) return 0.0;
  return sequence_payoff(game, p, l, f);
}

std::pair<double, double> utility_range(const Game& game, Player p) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (NodeId z : game.leaves()) {
    lo = std::min(lo, game.node(z).utility(p));
    hi = std::max(hi, game.node(z).utility(p));
  }
  return {lo, hi};
}

}  // namespace atsg
