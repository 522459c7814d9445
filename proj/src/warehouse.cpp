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

#include "atsg/warehouse.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <set>

#include "atsg/error.hpp"
#include "json_util.hpp"

namespace atsg {

using detail::Json;

namespace {

std::string vname(int v) { return "vertex " + std::to_string(v); }

double draw(std::mt19937_64& rng, PayoffRange r) {
  const double x = std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
  return std::round(x * 100.0) / 100.0;
}

int draw_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, std::max(lo, hi))(rng);
}

const char* kind_name(VertexKind k) {
  return k == VertexKind::kCorridor ? "corridor" : "storage";
}

}  // namespace

void validate(const WarehouseSpec& spec) {
  const int n = static_cast<int>(spec.vertices.size());
  if (spec.width < 1 || spec.height < 1) throw InputError("grid must be nonempty");
  if (spec.rounds < 1) throw InputError("rounds must be at least 1");
  if (n < 2) throw InputError("a warehouse needs at least two vertices");
  std::set<std::pair<int, int>> cells;
  for (int v = 0; v < n; ++v) {
    const WarehouseVertex& w = spec.vertices[v];
    if (w.x < 0 || w.x >= spec.width || w.y < 0 || w.y >= spec.height) {
      throw InputError(vname(v) + ": position outside the grid");
    }
    if (!cells.insert({w.x, w.y}).second) {
      throw InputError(vname(v) + ": grid cell already used");
    }
    if (!(w.intercept_defender > 0.0)) {
      throw InputError(vname(v) + ": defender interception reward must be > 0");
    }
    if (!(w.intercept_attacker < 0.0)) {
      throw InputError(vname(v) + ": attacker interception penalty must be < 0");
    }
  }
  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : spec.edges) {
    if (a < 0 || a >= n || b < 0 || b >= n) throw InputError("edge endpoint out of range");
    if (a == b) throw InputError(vname(a) + ": self loop");
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second) {
      throw InputError(vname(a) + ": duplicate edge to " + vname(b));
    }
  }
  if (spec.defender_start < 0 || spec.defender_start >= n ||
      spec.attacker_start < 0 || spec.attacker_start >= n) {
    throw InputError("start vertex out of range");
  }
  if (spec.defender_start == spec.attacker_start) {
    throw InputError("defender and attacker must start on distinct vertices");
  }
  if (spec.targets.empty()) throw InputError("at least one target is required");
  std::set<int> target_vertices;
  for (const WarehouseTarget& t : spec.targets) {
    if (t.vertex < 0 || t.vertex >= n) throw InputError("target vertex out of range");
    if (!target_vertices.insert(t.vertex).second) {
      throw InputError(vname(t.vertex) + ": listed as a target twice");
    }
    if (!(t.attacker_reward > 0.0)) {
      throw InputError(vname(t.vertex) + ": target attacker reward must be > 0");
    }
    if (!(t.defender_penalty < 0.0)) {
      throw InputError(vname(t.vertex) + ": target defender penalty must be < 0");
    }
    if (t.vertex == spec.attacker_start) {
      throw InputError(vname(t.vertex) + ": attacker starts on a target");
    }
  }
  // Connectivity.
  std::vector<char> reached(n, 0);
  std::queue<int> q;
  q.push(0);
  reached[0] = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int u : neighbours(spec, v)) {
      if (!reached[u]) {
        reached[u] = 1;
        q.push(u);
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    if (!reached[v]) throw InputError(vname(v) + ": not connected to vertex 0");
  }
}

std::vector<int> neighbours(const WarehouseSpec& spec, int v) {
  std::vector<int> out;
  for (auto [a, b] : spec.edges) {
    if (a == v) out.push_back(b);
    if (b == v) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

WarehouseSpec generate_warehouse(std::uint64_t seed, const WarehouseParams& params) {
  if (params.width < 2 || params.height < 2) {
    throw InputError("warehouse grid must be at least 2x2");
  }
  if (params.rounds < 1) throw InputError("rounds must be at least 1");
  std::mt19937_64 rng(seed);
  const int w = params.width, h = params.height;
  const int cells = w * h;
  auto cell = [&](int x, int y) { return y * w + x; };
  const int dx[4] = {1, -1, 0, 0};
  const int dy[4] = {0, 0, 1, -1};

  for (;;) {
    // Corridor: a self-avoiding walk.
    const int want = std::clamp(draw_int(rng, params.corridor_min, params.corridor_max),
                                2, cells - 2);
    std::vector<int> walk{draw_int(rng, 0, cells - 1)};
    std::vector<char> used(cells, 0);
    used[walk[0]] = 1;
    while (static_cast<int>(walk.size()) < want) {
      const int x = walk.back() % w, y = walk.back() / w;
      std::vector<int> options;
      for (int k = 0; k < 4; ++k) {
        const int nx = x + dx[k], ny = y + dy[k];
        if (nx >= 0 && nx < w && ny >= 0 && ny < h && !used[cell(nx, ny)]) {
          options.push_back(cell(nx, ny));
        }
      }
      if (options.empty()) break;
      const int next = options[draw_int(rng, 0, static_cast<int>(options.size()) - 1)];
      used[next] = 1;
      walk.push_back(next);
    }
    if (static_cast<int>(walk.size()) < want) continue;

    // Storage rooms: free cells next to the corridor.
    std::vector<int> free_cells;
    for (int c = 0; c < cells; ++c) {
      if (used[c]) continue;
      const int x = c % w, y = c / w;
      for (int k = 0; k < 4; ++k) {
        const int nx = x + dx[k], ny = y + dy[k];
        if (nx >= 0 && nx < w && ny >= 0 && ny < h && used[cell(nx, ny)]) {
          free_cells.push_back(c);
          break;
        }
      }
    }
    const int storage = std::min(draw_int(rng, params.storage_min, params.storage_max),
                                 static_cast<int>(free_cells.size()));
    if (storage < std::max(1, params.targets_min)) continue;
    std::shuffle(free_cells.begin(), free_cells.end(), rng);
    free_cells.resize(storage);
    std::sort(free_cells.begin(), free_cells.end());

    WarehouseSpec spec;
    spec.width = w;
    spec.height = h;
    spec.rounds = params.rounds;
    std::vector<int> id_of(cells, -1);
    for (int c : walk) {
      id_of[c] = static_cast<int>(spec.vertices.size());
      spec.vertices.push_back({c % w, c / w, VertexKind::kCorridor, 0, 0});
    }
    for (std::size_t k = 1; k < walk.size(); ++k) {
      spec.edges.emplace_back(id_of[walk[k - 1]], id_of[walk[k]]);
    }
    for (int c : free_cells) {
      const int x = c % w, y = c / w;
      std::vector<int> doors;
      for (int k = 0; k < 4; ++k) {
        const int nx = x + dx[k], ny = y + dy[k];
        if (nx >= 0 && nx < w && ny >= 0 && ny < h && used[cell(nx, ny)]) {
          doors.push_back(id_of[cell(nx, ny)]);
        }
      }
      std::sort(doors.begin(), doors.end());
      id_of[c] = static_cast<int>(spec.vertices.size());
      spec.vertices.push_back({x, y, VertexKind::kStorage, 0, 0});
      spec.edges.emplace_back(doors[draw_int(rng, 0, static_cast<int>(doors.size()) - 1)],
                              id_of[c]);
    }
    for (WarehouseVertex& v : spec.vertices) {
      v.intercept_defender = draw(rng, params.intercept_defender);
      v.intercept_attacker = draw(rng, params.intercept_attacker);
    }
    const int corridor = static_cast<int>(walk.size());
    spec.defender_start = draw_int(rng, 0, corridor - 1);
    spec.attacker_start = draw_int(rng, 0, corridor - 2);
    if (spec.attacker_start >= spec.defender_start) ++spec.attacker_start;

    const int num_targets = std::min(draw_int(rng, params.targets_min, params.targets_max),
                                     storage);
    std::vector<int> rooms(storage);
    for (int k = 0; k < storage; ++k) rooms[k] = corridor + k;
    std::shuffle(rooms.begin(), rooms.end(), rng);
    rooms.resize(num_targets);
    std::sort(rooms.begin(), rooms.end());
    for (int v : rooms) {
      WarehouseTarget t;
      t.vertex = v;
      t.attacker_reward = draw(rng, params.target_attacker);
      t.defender_penalty = draw(rng, params.target_defender);
      spec.targets.push_back(t);
    }
    validate(spec);
    return spec;
  }
}

namespace {

struct Compiler {
  const WarehouseSpec& spec;
  int rounds;
  std::vector<std::vector<int>> adj;
  std::vector<const WarehouseTarget*> target_at;
  GameSpec out;

  static std::string history_label(char who, const std::vector<int>& hist) {
    std::string s(1, who);
    s += ':';
    for (std::size_t k = 0; k < hist.size(); ++k) {
      if (k) s += '-';
      s += std::to_string(hist[k]);
    }
    return s;
  }

  // Options at v: stay first, then neighbours in ascending order.
  std::vector<int> moves(int v) const {
    std::vector<int> m{v};
    m.insert(m.end(), adj[v].begin(), adj[v].end());
    return m;
  }

  long long add(NodeSpec n) {
    n.id = static_cast<long long>(out.nodes.size());
    out.nodes.push_back(std::move(n));
    return out.nodes.back().id;
  }

  NodeSpec child_of(long long parent, int action) {
    NodeSpec n;
    n.parent = parent;
    n.incoming_action = action;
    return n;
  }

  void leaf(long long parent, int action, double ud, double ua) {
    NodeSpec n = child_of(parent, action);
    n.payoffs = std::array<double, 2>{ud, ua};
    add(std::move(n));
  }

  void defender_turn(NodeSpec n, int round, std::vector<int>& dh,
                     std::vector<int>& ah) {
    const int d = dh.back();
    n.player = Player::kLeader;
    n.infoset = history_label('D', dh);
    const std::vector<int> opts = moves(d);
    for (int v : opts) n.actions.push_back("v" + std::to_string(v));
    const long long id = add(std::move(n));
    for (std::size_t k = 0; k < opts.size(); ++k) {
      dh.push_back(opts[k]);
      attacker_turn(child_of(id, static_cast<int>(k)), round, dh, ah);
      dh.pop_back();
    }
  }

  void attacker_turn(NodeSpec n, int round, std::vector<int>& dh,
                     std::vector<int>& ah) {
    const int a = ah.back();
    n.player = Player::kFollower;
    n.infoset = history_label('A', ah);
    const std::vector<int> opts = moves(a);
    for (int v : opts) n.actions.push_back("v" + std::to_string(v));
    const long long id = add(std::move(n));
    const int d = dh.back();
    for (std::size_t k = 0; k < opts.size(); ++k) {
      const int v = opts[k];
      const int act = static_cast<int>(k);
      if (v == d) {
        const WarehouseVertex& w = spec.vertices[v];
        leaf(id, act, w.intercept_defender, w.intercept_attacker);
      } else if (target_at[v]) {
        leaf(id, act, target_at[v]->defender_penalty, target_at[v]->attacker_reward);
      } else if (round == rounds) {
        leaf(id, act, 0.0, 0.0);
      } else {
        ah.push_back(v);
        defender_turn(child_of(id, act), round + 1, dh, ah);
        ah.pop_back();
      }
    }
  }
};

}  // namespace

GameSpec compile_warehouse_spec(const WarehouseSpec& spec, int rounds) {
  validate(spec);
  if (rounds < 1) throw InputError("rounds must be at least 1");
  Compiler c{spec, rounds, {}, {}, {}};
  const int n = static_cast<int>(spec.vertices.size());
  for (int v = 0; v < n; ++v) c.adj.push_back(neighbours(spec, v));
  c.target_at.assign(n, nullptr);
  for (const WarehouseTarget& t : spec.targets) c.target_at[t.vertex] = &t;
  c.out.player_names = {"defender", "attacker"};
  c.out.root = 0;
  std::vector<int> dh{spec.defender_start};
  std::vector<int> ah{spec.attacker_start};
  c.defender_turn(NodeSpec{}, 1, dh, ah);
  return std::move(c.out);
}

Game compile_warehouse(const WarehouseSpec& spec, int rounds) {
  return build_game(compile_warehouse_spec(spec, rounds));
}

Game compile_warehouse(const WarehouseSpec& spec) {
  return compile_warehouse(spec, spec.rounds);
}

std::string warehouse_to_json(const WarehouseSpec& spec) {
  nlohmann::ordered_json j;
  j["grid"] = {spec.width, spec.height};
  j["rounds"] = spec.rounds;
  auto vertices = nlohmann::ordered_json::array();
  for (std::size_t v = 0; v < spec.vertices.size(); ++v) {
    const WarehouseVertex& w = spec.vertices[v];
    vertices.push_back({{"id", v},
                        {"x", w.x},
                        {"y", w.y},
                        {"kind", kind_name(w.kind)},
                        {"interception", {w.intercept_defender, w.intercept_attacker}}});
  }
  j["vertices"] = std::move(vertices);
  auto edges = nlohmann::ordered_json::array();
  for (auto [a, b] : spec.edges) edges.push_back({a, b});
  j["edges"] = std::move(edges);
  j["defender_start"] = spec.defender_start;
  j["attacker_start"] = spec.attacker_start;
  auto targets = nlohmann::ordered_json::array();
  for (const WarehouseTarget& t : spec.targets) {
    targets.push_back({{"vertex", t.vertex},
                       {"attacker_reward", t.attacker_reward},
                       {"defender_penalty", t.defender_penalty}});
  }
  j["targets"] = std::move(targets);
  return j.dump(1) + "\n";
}

WarehouseSpec parse_warehouse(const std::string& json_text, const std::string& source) {
  using detail::get_as;
  using detail::get_field;
  const Json j = detail::parse_json_text(json_text, source);
  detail::require_object(j, source);
  detail::reject_unknown(j, source, {"grid", "rounds", "vertices", "edges",
                                     "defender_start", "attacker_start", "targets"});
  WarehouseSpec spec;
  const auto grid = get_field<std::vector<int>>(j, source, "grid");
  if (grid.size() != 2) throw ParseError(source + ".grid: expected [width, height]");
  spec.width = grid[0];
  spec.height = grid[1];
  spec.rounds = get_field<int>(j, source, "rounds");
  const Json& vertices = detail::field(j, source, "vertices");
  if (!vertices.is_array()) throw ParseError(source + ".vertices: expected an array");
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const std::string where = source + ".vertices[" + std::to_string(k) + "]";
    const Json& v = vertices[k];
    detail::require_object(v, where);
    detail::reject_unknown(v, where, {"id", "x", "y", "kind", "interception"});
    if (get_field<long long>(v, where, "id") != static_cast<long long>(k)) {
      throw ParseError(where + ".id: vertex ids must be 0, 1, 2, ... in order");
    }
    WarehouseVertex w;
    w.x = get_field<int>(v, where, "x");
    w.y = get_field<int>(v, where, "y");
    const auto kind = get_field<std::string>(v, where, "kind");
    if (kind == "corridor") {
      w.kind = VertexKind::kCorridor;
    } else if (kind == "storage") {
      w.kind = VertexKind::kStorage;
    } else {
      throw ParseError(where + ".kind: expected \"corridor\" or \"storage\"");
    }
    const auto pay = get_field<std::vector<double>>(v, where, "interception");
    if (pay.size() != 2) {
      throw ParseError(where + ".interception: expected [defender, attacker]");
    }
    w.intercept_defender = pay[0];
    w.intercept_attacker = pay[1];
    spec.vertices.push_back(w);
  }
  const Json& edges = detail::field(j, source, "edges");
  if (!edges.is_array()) throw ParseError(source + ".edges: expected an array");
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto e = get_as<std::vector<int>>(edges[k], source + ".edges[" + std::to_string(k) + "]");
    if (e.size() != 2) throw ParseError(source + ".edges[" + std::to_string(k) + "]: expected a pair");
    spec.edges.emplace_back(e[0], e[1]);
  }
  spec.defender_start = get_field<int>(j, source, "defender_start");
  spec.attacker_start = get_field<int>(j, source, "attacker_start");
  const Json& targets = detail::field(j, source, "targets");
  if (!targets.is_array()) throw ParseError(source + ".targets: expected an array");
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const std::string where = source + ".targets[" + std::to_string(k) + "]";
    const Json& t = targets[k];
    detail::require_object(t, where);
    detail::reject_unknown(t, where, {"vertex", "attacker_reward", "defender_penalty"});
    WarehouseTarget wt;
    wt.vertex = get_field<int>(t, where, "vertex");
    wt.attacker_reward = get_field<double>(t, where, "attacker_reward");
    wt.defender_penalty = get_field<double>(t, where, "defender_penalty");
    spec.targets.push_back(wt);
  }
  validate(spec);
  return spec;
}

void save_warehouse(const std::filesystem::path& path, const WarehouseSpec& spec) {
  detail::write_text_file(path, warehouse_to_json(spec));
}

WarehouseSpec load_warehouse(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_warehouse(buf.str(), path.string());
}

}  // namespace atsg
