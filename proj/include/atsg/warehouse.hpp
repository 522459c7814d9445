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

#ifndef ATSG_WAREHOUSE_HPP_
#define ATSG_WAREHOUSE_HPP_

// Warehouse patrolling games: a defender (leader) and an attacker (follower)
// move on a corridor graph with storage rooms. Each round the defender moves
// (or stays), then the attacker does; neither sees the other. Meeting in a
// vertex ends the game with that vertex's interception payoffs, the attacker
// entering a target ends it with the target's payoffs, and a game that
// reaches the horizon pays (0, 0).

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "atsg/game.hpp"

namespace atsg {

enum class VertexKind { kCorridor, kStorage };

struct WarehouseVertex {
  int x = 0;
  int y = 0;
  VertexKind kind = VertexKind::kCorridor;
  double intercept_defender = 1.0;   // > 0
  double intercept_attacker = -1.0;  // < 0
};

struct WarehouseTarget {
  int vertex = 0;
  double attacker_reward = 1.0;    // > 0
  double defender_penalty = -1.0;  // < 0
};

struct WarehouseSpec {
  int width = 4;
  int height = 4;
  int rounds = 1;
  std::vector<WarehouseVertex> vertices;  // vertex id = index
  std::vector<std::pair<int, int>> edges;
  int defender_start = 0;
  int attacker_start = 1;
  std::vector<WarehouseTarget> targets;
};

struct PayoffRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct WarehouseParams {
  int width = 4;
  int height = 4;
  int rounds = 3;
  int corridor_min = 4;
  int corridor_max = 5;
  int storage_min = 2;
  int storage_max = 4;
  int targets_min = 2;
  int targets_max = 4;
  PayoffRange intercept_defender{0.5, 1.0};
  PayoffRange intercept_attacker{-1.0, -0.5};
  PayoffRange target_attacker{0.5, 1.0};
  PayoffRange target_defender{-1.0, -0.5};
};

// Throws InputError naming the offending vertex or field.
void validate(const WarehouseSpec& spec);

// Deterministic in (seed, params).
WarehouseSpec generate_warehouse(std::uint64_t seed,
                                 const WarehouseParams& params = {});

// Neighbours of v in ascending id order.
std::vector<int> neighbours(const WarehouseSpec& spec, int v);

// Compiles with spec.rounds, or with `rounds` when given.
Game compile_warehouse(const WarehouseSpec& spec);
Game compile_warehouse(const WarehouseSpec& spec, int rounds);
GameSpec compile_warehouse_spec(const WarehouseSpec& spec, int rounds);

std::string warehouse_to_json(const WarehouseSpec& spec);
WarehouseSpec parse_warehouse(const std::string& json_text,
                              const std::string& source = "<warehouse>");
void save_warehouse(const std::filesystem::path& path, const WarehouseSpec& spec);
WarehouseSpec load_warehouse(const std::filesystem::path& path);

}  // namespace atsg

#endif  // ATSG_WAREHOUSE_HPP_
