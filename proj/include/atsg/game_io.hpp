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

#ifndef ATSG_GAME_IO_HPP_
#define ATSG_GAME_IO_HPP_

// JSON form of a game:
//
//   {
//     "players": ["leader", "follower"],
//     "root": 0,
//     "nodes": [
//       {"id": 0, "player": "leader", "infoset": "L0", "actions": ["a", "b"]},
//       {"id": 1, "parent": 0, "incoming_action": 0, "payoffs": [2.0, 1.0]},
//       {"id": 2, "parent": 0, "incoming_action": 1, "payoffs": [4.0, 0.0]}
//     ]
//   }
//
// "player" is "leader" or "follower"; "payoffs" is [u_leader, u_follower].
// The root may carry "parent": null. Unknown fields are rejected.

#include <filesystem>
#include <string>

#include "atsg/game.hpp"

namespace atsg {

GameSpec parse_game_spec(const std::string& json_text,
                         const std::string& source = "<game>");
GameSpec load_game_spec(const std::filesystem::path& path);
Game load_game(const std::filesystem::path& path);

// Spec describing `game` exactly (node ids are the game's dense ids).
GameSpec to_spec(const Game& game);
std::string game_spec_to_json(const GameSpec& spec);
void save_game(const std::filesystem::path& path, const Game& game);

}  // namespace atsg

#endif  // ATSG_GAME_IO_HPP_
