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

#ifndef ATSG_GAME_HPP_
#define ATSG_GAME_HPP_

// Two-player extensive-form games with perfect recall and no chance nodes.
//
// A Game is built once from a GameSpec, validated eagerly, and is immutable
// afterwards. Nodes are renumbered in depth-first preorder (children in action
// order); information sets are numbered in order of first appearance in that
// preorder. Each player's sequences are numbered so that the empty sequence is
// 0 and every sequence appears after its prefix.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "atsg/error.hpp"

namespace atsg {

enum class Player : std::uint8_t { kLeader = 0, kFollower = 1 };

inline constexpr std::array<Player, 2> kPlayers = {Player::kLeader,
                                                   Player::kFollower};

constexpr int index_of(Player p) { return static_cast<int>(p); }
constexpr Player opponent(Player p) {
  return p == Player::kLeader ? Player::kFollower : Player::kLeader;
}
std::string_view to_string(Player p);

using NodeId = int;
using InfosetId = int;
using SeqId = int;

inline constexpr int kNone = -1;
inline constexpr SeqId kEmptySequence = 0;

// Absolute tolerance for comparing utilities and probabilities.
inline constexpr double kTolerance = 1e-9;

struct Node {
  NodeId id = kNone;
  // Identifier used in the input spec; kept for diagnostics and output.
  long long spec_id = kNone;
  NodeId parent = kNone;
  int incoming_action = kNone;
  int depth = 0;
  // Decision nodes only.
  Player player = Player::kLeader;
  InfosetId infoset = kNone;
  std::vector<NodeId> children;  // indexed by action
  // Leaves only.
  double u_leader = 0.0;
  double u_follower = 0.0;
  // Sequence of each player that leads to this node.
  std::array<SeqId, 2> seq = {kEmptySequence, kEmptySequence};

  bool is_leaf() const { return infoset == kNone; }
  double utility(Player p) const {
    return p == Player::kLeader ? u_leader : u_follower;
  }
};

struct Infoset {
  InfosetId id = kNone;
  std::string label;
  Player player = Player::kLeader;
  std::vector<std::string> actions;
  std::vector<NodeId> nodes;
  // Own sequence leading into the infoset, and the sequence produced by
  // each action.
  SeqId parent_seq = kEmptySequence;
  std::vector<SeqId> action_seq;
  // Number of own actions taken before reaching the infoset.
  int depth = 0;

  int num_actions() const { return static_cast<int>(actions.size()); }
};

// One row of a player's sequence table. The empty sequence has no infoset.
struct SequenceEntry {
  SeqId parent = kNone;
  InfosetId infoset = kNone;
  int action = kNone;
  int length = 0;
  // Own infosets whose parent sequence is this one, in id order.
  std::vector<InfosetId> child_infosets;
};

// A player's sequence as an explicit list of (infoset, action) moves.
class Sequence {
 public:
  using Move = std::pair<InfosetId, int>;

  Sequence() = default;
  Sequence(Player player, std::vector<Move> moves)
      : player_(player), moves_(std::move(moves)) {}

  static Sequence empty(Player player) { return Sequence(player, {}); }

  Player player() const { return player_; }
  const std::vector<Move>& moves() const { return moves_; }
  bool is_empty() const { return moves_.empty(); }
  std::size_t length() const { return moves_.size(); }

  // The sequence without its final move. Throws EmptySequence on the empty
  // sequence.
  Sequence init() const;

  Sequence extended(InfosetId infoset, int action) const;

  friend bool operator==(const Sequence&, const Sequence&) = default;
  friend auto operator<=>(const Sequence&, const Sequence&) = default;

 private:
  Player player_ = Player::kLeader;
  std::vector<Move> moves_;
};

// Input description of a single node; see docs in README for the JSON form.
struct NodeSpec {
  long long id = 0;
  std::optional<long long> parent;
  std::optional<int> incoming_action;
  // Decision nodes.
  std::optional<Player> player;
  std::string infoset;
  std::vector<std::string> actions;
  // Leaves: {u_leader, u_follower}.
  std::optional<std::array<double, 2>> payoffs;
};

struct GameSpec {
  std::array<std::string, 2> player_names = {"leader", "follower"};
  long long root = 0;
  std::vector<NodeSpec> nodes;
};

class Game {
 public:
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_leaves() const { return static_cast<int>(leaves_.size()); }
  int num_infosets() const { return static_cast<int>(infosets_.size()); }
  int num_infosets(Player p) const {
    return static_cast<int>(player_infosets_[index_of(p)].size());
  }
  int num_sequences(Player p) const {
    return static_cast<int>(sequences_[index_of(p)].size());
  }

  NodeId root() const { return 0; }
  const Node& node(NodeId id) const { return nodes_[id]; }
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const NodeId> leaves() const { return leaves_; }

  const Infoset& infoset(InfosetId id) const { return infosets_[id]; }
  std::span<const Infoset> infosets() const { return infosets_; }
  // Infosets of one player, in id order.
  std::span<const InfosetId> infosets(Player p) const {
    return player_infosets_[index_of(p)];
  }

  std::span<const SequenceEntry> sequence_table(Player p) const {
    return sequences_[index_of(p)];
  }
  const SequenceEntry& sequence_entry(Player p, SeqId s) const {
    return sequences_[index_of(p)][s];
  }
  // Own infosets reachable before any own action is taken.
  std::span<const InfosetId> root_infosets(Player p) const {
    return sequences_[index_of(p)][kEmptySequence].child_infosets;
  }

  // Number of actions of the infoset in which the last move of `s` is played.
  int last_action_count(Player p, SeqId s) const;

  Sequence sequence(Player p, SeqId s) const;
  // Returns kNone when the sequence does not exist in this game.
  SeqId find_sequence(const Sequence& s) const;
  // True when `prefix` is a prefix of `s` (both ids of player p).
  bool is_prefix(Player p, SeqId prefix, SeqId s) const;

  // Leaf reached by the sequence pair, or kNone.
  NodeId leaf_of(SeqId leader_seq, SeqId follower_seq) const;

  // Largest number of own moves along any path.
  int max_sequence_length(Player p) const { return max_len_[index_of(p)]; }

  const std::array<std::string, 2>& player_names() const {
    return player_names_;
  }

 private:
  friend Game build_game(const GameSpec& spec);

  std::array<std::string, 2> player_names_;
  std::vector<Node> nodes_;
  std::vector<NodeId> leaves_;
  std::vector<Infoset> infosets_;
  std::array<std::vector<InfosetId>, 2> player_infosets_;
  std::array<std::vector<SequenceEntry>, 2> sequences_;
  std::array<int, 2> max_len_ = {0, 0};
  // Leaves sorted by (leader seq, follower seq) for leaf_of().
  std::vector<std::pair<std::pair<SeqId, SeqId>, NodeId>> leaf_index_;
};

// Validates the spec and builds the game. Throws GameError naming the
// offending node or infoset.
Game build_game(const GameSpec& spec);

// The value of u_p at the leaf reached by (leader_seq, follower_seq), or 0 if
// the pair is incompatible.
double sequence_payoff(const Game& game, Player p, SeqId leader_seq,
                       SeqId follower_seq);
double sequence_payoff(const Game& game, Player p, const Sequence& leader,
                       const Sequence& follower);

// Minimum and maximum leaf utility of a player.
std::pair<double, double> utility_range(const Game& game, Player p);

}  // namespace atsg

#endif  // ATSG_GAME_HPP_
