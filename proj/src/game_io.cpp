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

#include "atsg/game_io.hpp"

#include "json_util.hpp"

namespace atsg {
namespace {

using detail::Json;

Player parse_player(const Json& j, const std::string& where) {
  const auto name = detail::get_as<std::string>(j, where);
  if (name == "leader") return Player::kLeader;
  if (name == "follower") return Player::kFollower;
  throw ParseError(where + ": player must be \"leader\" or \"follower\"");
}

GameSpec spec_from_json(const Json& j, const std::string& source) {
  detail::require_object(j, source);
  detail::reject_unknown(j, source, {"players", "root", "nodes"});
  GameSpec spec;
  const auto players =
      detail::get_field<std::vector<std::string>>(j, source, "players");
  if (players.size() != 2) {
    throw ParseError(source + ".players: exactly two players are supported");
  }
  spec.player_names = {players[0], players[1]};
  spec.root = detail::get_field<long long>(j, source, "root");
  const Json& nodes = detail::field(j, source, "nodes");
  if (!nodes.is_array()) throw ParseError(source + ".nodes: expected an array");
  spec.nodes.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = source + ".nodes[" + std::to_string(i) + "]";
    const Json& jn = nodes[i];
    detail::require_object(jn, where);
    detail::reject_unknown(jn, where,
                           {"id", "parent", "incoming_action", "player",
                            "infoset", "actions", "payoffs"});
    NodeSpec ns;
    ns.id = detail::get_field<long long>(jn, where, "id");
    if (auto it = jn.find("parent"); it != jn.end() && !it->is_null()) {
      ns.parent = detail::get_as<long long>(*it, where + ".parent");
    }
    if (auto it = jn.find("incoming_action"); it != jn.end() && !it->is_null()) {
      ns.incoming_action = detail::get_as<int>(*it, where + ".incoming_action");
    }
    if (auto it = jn.find("player"); it != jn.end()) {
      ns.player = parse_player(*it, where + ".player");
    }
    if (auto it = jn.find("infoset"); it != jn.end()) {
      ns.infoset = detail::get_as<std::string>(*it, where + ".infoset");
    }
    if (auto it = jn.find("actions"); it != jn.end()) {
      ns.actions =
          detail::get_as<std::vector<std::string>>(*it, where + ".actions");
    }
    if (auto it = jn.find("payoffs"); it != jn.end()) {
      const auto p = detail::get_as<std::vector<double>>(*it, where + ".payoffs");
      if (p.size() != 2) {
        throw ParseError(where + ".payoffs: expected [u_leader, u_follower]");
      }
      ns.payoffs = std::array<double, 2>{p[0], p[1]};
    }
    spec.nodes.push_back(std::move(ns));
  }
  return spec;
}

}  // namespace

GameSpec parse_game_spec(const std::string& json_text,
                         const std::string& source) {
  return spec_from_json(detail::parse_json_text(json_text, source), source);
}

GameSpec load_game_spec(const std::filesystem::path& path) {
  return spec_from_json(detail::read_json_file(path), path.string());
}

Game load_game(const std::filesystem::path& path) {
  return build_game(load_game_spec(path));
}

GameSpec to_spec(const Game& game) {
  GameSpec spec;
  spec.player_names = game.player_names();
  spec.root = game.root();
  spec.nodes.reserve(game.num_nodes());
  for (const Node& node : game.nodes()) {
    NodeSpec ns;
    ns.id = node.id;
    if (node.parent != kNone) {
      ns.parent = node.parent;
      ns.incoming_action = node.incoming_action;
    }
    if (node.is_leaf()) {
      ns.payoffs = std::array<double, 2>{node.u_leader, node.u_follower};
    } else {
      const Infoset& info = game.infoset(node.infoset);
      ns.player = node.player;
      ns.infoset = info.label;
      ns.actions = info.actions;
    }
    spec.nodes.push_back(std::move(ns));
  }
  return spec;
}

std::string game_spec_to_json(const GameSpec& spec) {
  Json nodes = Json::array();
  for (const NodeSpec& ns : spec.nodes) {
    Json jn;
    jn["id"] = ns.id;
    if (ns.parent) jn["parent"] = *ns.parent;
    if (ns.incoming_action) jn["incoming_action"] = *ns.incoming_action;
    if (ns.payoffs) {
      jn["payoffs"] = {(*ns.payoffs)[0], (*ns.payoffs)[1]};
    } else {
      if (ns.player) jn["player"] = std::string(to_string(*ns.player));
      jn["infoset"] = ns.infoset;
      jn["actions"] = ns.actions;
    }
    nodes.push_back(std::move(jn));
  }
  Json j;
  j["players"] = {spec.player_names[0], spec.player_names[1]};
  j["root"] = spec.root;
  j["nodes"] = std::move(nodes);
  return j.dump(1) + "\n";
}

void save_game(const std::filesystem::path& path, const Game& game) {
  detail::write_text_file(path, game_spec_to_json(to_spec(game)));
}

}  // namespace atsg
