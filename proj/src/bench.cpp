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

#include "atsg/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "atsg/error.hpp"
#include "atsg/game_io.hpp"
#include "atsg/warehouse.hpp"
#include "json_util.hpp"

namespace atsg {

using detail::Json;
using OJson = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

long long bucket_of(long long num_nodes) {
  if (num_nodes < 1) throw InputError("bucket_of needs a positive node count");
  // k = round_half_up(log10 n)  <=>  10^(2k-1) <= n^2 < 10^(2k+1).
  const __int128 sq = static_cast<__int128>(num_nodes) * num_nodes;
  __int128 bound = 10;  // 10^(2k+1)
  long long result = 1;
  while (sq >= bound) {
    bound *= 100;
    result *= 10;
  }
  return result;
}

long long bucket_of(const Game& game) { return bucket_of(game.num_nodes()); }

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kOk:
      return "ok";
    case RunStatus::kTimeout:
      return "timeout";
    case RunStatus::kFailed:
      return "failed";
  }
  return "failed";
}

namespace {

RunStatus parse_status(const std::string& s) {
  if (s == "ok") return RunStatus::kOk;
  if (s == "timeout") return RunStatus::kTimeout;
  if (s == "failed") return RunStatus::kFailed;
  throw ParseError("unknown run status '" + s + "'");
}

// Shortest text that parses back to the same double; locale independent.
std::string num(double v) {
  char buf[40];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

const std::vector<std::string> kSolvers{"bnb", "multilp", "easg", "o2uct"};

}  // namespace

bool is_stochastic(const std::string& solver) {
  return solver == "easg" || solver == "o2uct";
}

void BenchConfig::validate() const {
  if (solvers.empty()) throw InputError("bench needs at least one solver");
  for (const std::string& s : solvers) {
    if (std::find(kSolvers.begin(), kSolvers.end(), s) == kSolvers.end()) {
      throw InputError("unknown solver '" + s + "'");
    }
    if (mode == AtMode::kExact && !is_stochastic(s)) {
      throw InputError("solver '" + s + "' supports only the linear anchoring form");
    }
  }
  if (alphas.empty()) throw InputError("bench needs at least one alpha");
  for (double a : alphas) Alpha check(a);
  if (seeds < 1) throw InputError("seeds must be at least 1");
  if (!(time_cap_s >= 0.0)) throw InputError("time cap must be non-negative");
}

SolveResult run_solver(const Game& game, const std::string& solver, double alpha,
                       int seed, const BenchConfig& cfg,
                       std::optional<Clock::time_point> deadline) {
  if (solver == "bnb" || solver == "multilp") {
    ExactOptions opt = cfg.exact;
    opt.deadline = deadline;
    opt.workers = 1;
    return solver == "bnb" ? solve_bnb(game, Alpha(alpha), opt)
                           : solve_multilp(game, Alpha(alpha), opt);
  }
  if (solver == "easg") {
    EasgConfig c = cfg.easg;
    c.seed = static_cast<std::uint64_t>(seed);
    c.alpha = alpha;
    c.mode = cfg.mode;
    c.deadline = deadline;
    return run_easg(game, c);
  }
  if (solver == "o2uct") {
    O2uctConfig c = cfg.o2uct;
    c.seed = static_cast<std::uint64_t>(seed);
    c.alpha = alpha;
    c.mode = cfg.mode;
    c.deadline = deadline;
    return run_o2uct(game, c);
  }
  throw InputError("unknown solver '" + solver + "'");
}

std::vector<BenchRecord> run_bench(const std::vector<BenchGame>& games,
                                   const BenchConfig& cfg) {
  cfg.validate();
  struct Task {
    std::size_t game;
    std::string solver;
    double alpha;
    int seed;
  };
  std::vector<Task> tasks;
  for (std::size_t g = 0; g < games.size(); ++g) {
    for (const std::string& s : cfg.solvers) {
      for (double a : cfg.alphas) {
        const int n = is_stochastic(s) ? cfg.seeds : 1;
        for (int seed = 0; seed < n; ++seed) tasks.push_back({g, s, a, seed});
      }
    }
  }
  std::vector<BenchRecord> records(tasks.size());
  const double cap_ms = cfg.time_cap_s * 1000.0;
  auto run_one = [&](std::size_t k) {
    const Task& t = tasks[k];
    const Game& game = games[t.game].game;
    BenchRecord& r = records[k];
    r.game_id = games[t.game].id;
    r.num_nodes = game.num_nodes();
    r.bucket = bucket_of(game);
    r.solver = t.solver;
    r.alpha = t.alpha;
    r.seed = t.seed;
    const auto start = Clock::now();
    const auto deadline =
        start + std::chrono::duration_cast<Clock::duration>(
                    std::chrono::duration<double>(cfg.time_cap_s));
    try {
      SolveResult res = run_solver(game, t.solver, t.alpha, t.seed, cfg, deadline);
      const double ms =
          std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      if (ms > cap_ms) {
        r.status = RunStatus::kTimeout;
        r.wall_ms = cap_ms;
      } else {
        r.status = RunStatus::kOk;
        r.wall_ms = ms;
        r.leader_utility = res.leader_utility;
        r.leader_plan = std::move(res.leader_plan.values);
      }
    } catch (const ResourceLimit& e) {
      r.status = RunStatus::kTimeout;
      r.wall_ms = cap_ms;
      r.message = e.what();
    } catch (const std::exception& e) {
      r.status = RunStatus::kFailed;
      r.wall_ms =
          std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      r.message = e.what();
    }
  };
  const int workers = cfg.workers > 0 ? cfg.workers : worker_count_from_env();
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < tasks.size();) run_one(k);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return records;
}

Aggregate aggregate(const std::vector<BenchRecord>& records) {
  std::vector<const BenchRecord*> sorted;
  for (const BenchRecord& r : records) sorted.push_back(&r);
  auto key = [](const BenchRecord* r) {
    return std::tie(r->bucket, r->solver, r->alpha, r->game_id, r->seed);
  };
  std::sort(sorted.begin(), sorted.end(),
            [&](const BenchRecord* a, const BenchRecord* b) { return key(a) < key(b); });

  Aggregate out;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    const BenchRecord& head = *sorted[i];
    while (j < sorted.size() && sorted[j]->bucket == head.bucket &&
           sorted[j]->solver == head.solver && sorted[j]->alpha == head.alpha) {
      ++j;
    }
    AggregateRow row;
    row.bucket = head.bucket;
    row.solver = head.solver;
    row.alpha = head.alpha;
    double time_sum = 0.0;
    double mean_sum = 0.0, sd_sum = 0.0, max_sum = 0.0;
    std::size_t g = i;
    while (g < j) {
      std::size_t h = g;
      std::vector<double> values;
      while (h < j && sorted[h]->game_id == sorted[g]->game_id) {
        const BenchRecord& r = *sorted[h];
        ++row.runs;
        time_sum += r.wall_ms;
        if (r.status == RunStatus::kTimeout) ++row.timeouts;
        if (r.status == RunStatus::kFailed) ++row.failures;
        if (r.status == RunStatus::kOk) values.push_back(*r.leader_utility);
        ++h;
      }
      if (!values.empty()) {
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(values.size());
        mean_sum += mean;
        sd_sum += std::sqrt(var);
        max_sum += *std::max_element(values.begin(), values.end());
        ++row.games;
      }
      g = h;
    }
    row.mean_time_ms = time_sum / row.runs;
    if (row.games == 0) {
      out.notes.push_back("bucket " + std::to_string(row.bucket) + ", solver " +
                          row.solver + ", alpha " + num(row.alpha) +
                          ": no successful runs, row skipped");
    } else {
      row.mean_utility = mean_sum / row.games;
      row.stddev_utility = sd_sum / row.games;
      row.max_utility = max_sum / row.games;
      out.rows.push_back(row);
    }
    i = j;
  }
  return out;
}

std::string rows_to_csv(const std::vector<AggregateRow>& rows) {
  std::ostringstream out;
  out << "bucket,solver,alpha,games,runs,timeouts,failures,mean_utility,"
         "stddev_utility,max_utility,mean_time_ms\n";
  for (const AggregateRow& r : rows) {
    out << r.bucket << ',' << r.solver << ',' << num(r.alpha) << ',' << r.games
        << ',' << r.runs << ',' << r.timeouts << ',' << r.failures << ','
        << num(r.mean_utility) << ',' << num(r.stddev_utility) << ','
        << num(r.max_utility) << ',' << num(r.mean_time_ms) << '\n';
  }
  return out.str();
}

std::string rows_to_json(const std::vector<AggregateRow>& rows) {
  OJson arr = OJson::array();
  for (const AggregateRow& r : rows) {
    arr.push_back({{"bucket", r.bucket},
                   {"solver", r.solver},
                   {"alpha", r.alpha},
                   {"games", r.games},
                   {"runs", r.runs},
                   {"timeouts", r.timeouts},
                   {"failures", r.failures},
                   {"mean_utility", r.mean_utility},
                   {"stddev_utility", r.stddev_utility},
                   {"max_utility", r.max_utility},
                   {"mean_time_ms", r.mean_time_ms}});
  }
  return arr.dump(1) + "\n";
}

std::vector<AggregateRow> parse_rows_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  std::vector<AggregateRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 11) throw ParseError("summary row with " + std::to_string(f.size()) + " fields");
    AggregateRow r;
    r.bucket = std::stoll(f[0]);
    r.solver = f[1];
    r.alpha = std::stod(f[2]);
    r.games = std::stoi(f[3]);
    r.runs = std::stoi(f[4]);
    r.timeouts = std::stoi(f[5]);
    r.failures = std::stoi(f[6]);
    r.mean_utility = std::stod(f[7]);
    r.stddev_utility = std::stod(f[8]);
    r.max_utility = std::stod(f[9]);
    r.mean_time_ms = std::stod(f[10]);
    rows.push_back(r);
  }
  return rows;
}

std::vector<AggregateRow> parse_rows_json(const std::string& text) {
  const Json j = detail::parse_json_text(text, "<summary>");
  std::vector<AggregateRow> rows;
  for (const Json& o : j) {
    AggregateRow r;
    r.bucket = o.at("bucket").get<long long>();
    r.solver = o.at("solver").get<std::string>();
    r.alpha = o.at("alpha").get<double>();
    r.games = o.at("games").get<int>();
    r.runs = o.at("runs").get<int>();
    r.timeouts = o.at("timeouts").get<int>();
    r.failures = o.at("failures").get<int>();
    r.mean_utility = o.at("mean_utility").get<double>();
    r.stddev_utility = o.at("stddev_utility").get<double>();
    r.max_utility = o.at("max_utility").get<double>();
    r.mean_time_ms = o.at("mean_time_ms").get<double>();
    rows.push_back(r);
  }
  return rows;
}

std::string records_to_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream out;
  out << "game,nodes,bucket,solver,alpha,seed,status,leader_utility,wall_ms,message\n";
  for (const BenchRecord& r : records) {
    std::string msg = r.message;
    std::string quoted = "\"";
    for (char c : msg) quoted += (c == '"') ? std::string("\"\"") : std::string(1, c);
    quoted += '"';
    out << r.game_id << ',' << r.num_nodes << ',' << r.bucket << ',' << r.solver
        << ',' << num(r.alpha) << ',' << r.seed << ',' << to_string(r.status) << ','
        << (r.leader_utility ? num(*r.leader_utility) : "") << ','
        << num(r.wall_ms) << ',' << (msg.empty() ? "" : quoted) << '\n';
  }
  return out.str();
}

std::string records_to_json(const std::vector<BenchRecord>& records) {
  OJson arr = OJson::array();
  for (const BenchRecord& r : records) {
    OJson o;
    o["game"] = r.game_id;
    o["nodes"] = r.num_nodes;
    o["bucket"] = r.bucket;
    o["solver"] = r.solver;
    o["alpha"] = r.alpha;
    o["seed"] = r.seed;
    o["status"] = std::string(to_string(r.status));
    o["leader_utility"] = r.leader_utility ? OJson(*r.leader_utility) : OJson(nullptr);
    o["wall_ms"] = r.wall_ms;
    if (!r.message.empty()) o["message"] = r.message;
    if (!r.leader_plan.empty()) o["leader_plan"] = r.leader_plan;
    arr.push_back(std::move(o));
  }
  return arr.dump(1) + "\n";
}

std::vector<BenchRecord> parse_records_json(const std::string& text) {
  const Json j = detail::parse_json_text(text, "<records>");
  std::vector<BenchRecord> out;
  for (const Json& o : j) {
    BenchRecord r;
    r.game_id = o.at("game").get<std::string>();
    r.num_nodes = o.at("nodes").get<long long>();
    r.bucket = o.at("bucket").get<long long>();
    r.solver = o.at("solver").get<std::string>();
    r.alpha = o.at("alpha").get<double>();
    r.seed = o.at("seed").get<int>();
    r.status = parse_status(o.at("status").get<std::string>());
    if (!o.at("leader_utility").is_null()) r.leader_utility = o.at("leader_utility").get<double>();
    r.wall_ms = o.at("wall_ms").get<double>();
    if (o.contains("message")) r.message = o.at("message").get<std::string>();
    if (o.contains("leader_plan")) r.leader_plan = o.at("leader_plan").get<std::vector<double>>();
    out.push_back(std::move(r));
  }
  return out;
}

double audit_record(const BenchRecord& record, const Game& game, AtMode mode) {
  if (record.status != RunStatus::kOk || !record.leader_utility) {
    throw InputError("only ok records carry a strategy to audit");
  }
  RealizationPlan plan{Player::kLeader, record.leader_plan};
  validate(game, plan, 1e-7);
  const BestResponse br = distorted_best_response(game, plan, Alpha(record.alpha), mode);
  return std::abs(br.leader_utility - *record.leader_utility);
}

Game load_any_game(const std::filesystem::path& path, std::optional<int> rounds) {
  const Json j = detail::read_json_file(path);
  if (j.is_object() && j.contains("vertices")) {
    const WarehouseSpec spec = parse_warehouse(j.dump(), path.string());
    return compile_warehouse(spec, rounds.value_or(spec.rounds));
  }
  if (rounds) throw InputError("--rounds applies only to warehouse specs");
  return build_game(parse_game_spec(j.dump(), path.string()));
}

BenchPlan load_bench_plan(const std::filesystem::path& path) {
  using detail::get_field;
  const std::string src = path.string();
  const Json j = detail::read_json_file(path);
  detail::require_object(j, src);
  detail::reject_unknown(j, src, {"games", "generate", "solvers", "alphas", "seeds",
                                  "time_cap_s", "at_mode", "workers"});
  BenchPlan plan;
  BenchConfig& c = plan.config;
  c.solvers = get_field<std::vector<std::string>>(j, src, "solvers");
  if (j.contains("alphas")) c.alphas = get_field<std::vector<double>>(j, src, "alphas");
  if (j.contains("seeds")) c.seeds = get_field<int>(j, src, "seeds");
  if (j.contains("time_cap_s")) c.time_cap_s = get_field<double>(j, src, "time_cap_s");
  if (j.contains("at_mode")) c.mode = parse_at_mode(get_field<std::string>(j, src, "at_mode"));
  if (j.contains("workers")) c.workers = get_field<int>(j, src, "workers");
  c.validate();

  if (j.contains("games")) {
    for (const std::string& g : get_field<std::vector<std::string>>(j, src, "games")) {
      std::filesystem::path p = g;
      if (p.is_relative()) p = path.parent_path() / p;
      plan.games.push_back({p.stem().string(), load_any_game(p)});
    }
  }
  if (j.contains("generate")) {
    const Json& gen = j.at("generate");
    const std::string where = src + ".generate";
    detail::require_object(gen, where);
    detail::reject_unknown(gen, where, {"seeds", "rounds", "grid"});
    WarehouseParams params;
    if (gen.contains("grid")) {
      const auto grid = get_field<std::vector<int>>(gen, where, "grid");
      if (grid.size() != 2) throw ParseError(where + ".grid: expected [width, height]");
      params.width = grid[0];
      params.height = grid[1];
    }
    const auto seeds = get_field<std::vector<std::uint64_t>>(gen, where, "seeds");
    const auto rounds = get_field<std::vector<int>>(gen, where, "rounds");
    for (int t : rounds) {
      for (std::uint64_t s : seeds) {
        params.rounds = t;
        plan.games.push_back({"wh-s" + std::to_string(s) + "-t" + std::to_string(t),
                              compile_warehouse(generate_warehouse(s, params))});
      }
    }
  }
  if (plan.games.empty()) throw InputError(src + ": no games listed");
  return plan;
}

void write_bench_outputs(const std::filesystem::path& dir,
                         const std::vector<BenchRecord>& records,
                         const Aggregate& agg) {
  std::filesystem::create_directories(dir);
  detail::write_text_file(dir / "records.csv", records_to_csv(records));
  detail::write_text_file(dir / "records.json", records_to_json(records));
  detail::write_text_file(dir / "summary.csv", rows_to_csv(agg.rows));
  detail::write_text_file(dir / "summary.json", rows_to_json(agg.rows));
}

}  // namespace atsg
