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

#ifndef ATSG_BENCH_HPP_
#define ATSG_BENCH_HPP_

// Benchmark harness: runs every (game, solver, alpha, seed) combination under
// a time cap, groups games into order-of-magnitude buckets of |H| and
// aggregates leader utilities and wall times per bucket.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "atsg/anchoring.hpp"
#include "atsg/easg.hpp"
#include "atsg/exact_solver.hpp"
#include "atsg/game.hpp"
#include "atsg/o2uct.hpp"

namespace atsg {

// 10^k with k = log10(num_nodes) rounded half up. num_nodes >= 1.
long long bucket_of(long long num_nodes);
long long bucket_of(const Game& game);

enum class RunStatus { kOk, kTimeout, kFailed };
std::string_view to_string(RunStatus s);

struct BenchRecord {
  std::string game_id;
  long long num_nodes = 0;
  long long bucket = 0;
  std::string solver;
  double alpha = 0.0;
  int seed = 0;
  RunStatus status = RunStatus::kOk;
  std::optional<double> leader_utility;  // present iff status is ok
  double wall_ms = 0.0;                  // the cap for timeouts
  std::string message;                   // failure reason
  std::vector<double> leader_plan;       // realization plan, ok runs only
};

struct BenchGame {
  std::string id;
  Game game;
};

struct BenchConfig {
  std::vector<std::string> solvers{"bnb", "multilp", "easg", "o2uct"};
  std::vector<double> alphas{0.0};
  int seeds = 10;           // runs per stochastic solver
  double time_cap_s = 600.0;
  AtMode mode = AtMode::kLinear;
  int workers = 0;          // 0 reads ATSG_WORKERS
  EasgConfig easg;          // seed, alpha, mode and deadline are set per run
  O2uctConfig o2uct;
  ExactOptions exact;

  void validate() const;
};

bool is_stochastic(const std::string& solver);

// Runs one solver; `seed` is ignored by the exact solvers.
SolveResult run_solver(const Game& game, const std::string& solver, double alpha,
                       int seed, const BenchConfig& cfg,
                       std::optional<std::chrono::steady_clock::time_point> deadline);

// Records are ordered by (game, solver, alpha, seed) in configuration order.
std::vector<BenchRecord> run_bench(const std::vector<BenchGame>& games,
                                   const BenchConfig& cfg);

struct AggregateRow {
  long long bucket = 0;
  std::string solver;
  double alpha = 0.0;
  int games = 0;       // games with at least one ok run
  int runs = 0;
  int timeouts = 0;
  int failures = 0;
  double mean_utility = 0.0;    // per-game mean, averaged over games
  double stddev_utility = 0.0;  // per-game population stddev, averaged
  double max_utility = 0.0;     // per-game max, averaged
  double mean_time_ms = 0.0;    // over all runs, timeouts at the cap
};

struct Aggregate {
  std::vector<AggregateRow> rows;  // sorted by (bucket, solver, alpha)
  std::vector<std::string> notes;  // groups skipped for lack of ok runs
};

Aggregate aggregate(const std::vector<BenchRecord>& records);

// Column order:
//   bucket,solver,alpha,games,runs,timeouts,failures,mean_utility,
//   stddev_utility,max_utility,mean_time_ms
std::string rows_to_csv(const std::vector<AggregateRow>& rows);
std::string rows_to_json(const std::vector<AggregateRow>& rows);
std::vector<AggregateRow> parse_rows_csv(const std::string& text);
std::vector<AggregateRow> parse_rows_json(const std::string& text);

// Column order: game,nodes,bucket,solver,alpha,seed,status,leader_utility,
// wall_ms,message
std::string records_to_csv(const std::vector<BenchRecord>& records);
// Includes each ok record's leader realization plan.
std::string records_to_json(const std::vector<BenchRecord>& records);
std::vector<BenchRecord> parse_records_json(const std::string& text);

// |stored utility - utility re-evaluated from the stored plan|.
double audit_record(const BenchRecord& record, const Game& game, AtMode mode);

// Bench configuration file:
//   {
//     "games": ["a.json", "b.json"],            paths relative to the file
//     "generate": {"seeds": [1, 2], "rounds": [1, 2, 3], "grid": [4, 4]},
//     "solvers": ["bnb", "easg"],
//     "alphas": [0.0, 0.3],
//     "seeds": 10,
//     "time_cap_s": 600,
//     "at_mode": "linear",
//     "workers": 1
//   }
// "games" entries may be game files or warehouse specs. Every key except
// "solvers" is optional.
struct BenchPlan {
  BenchConfig config;
  std::vector<BenchGame> games;
};
BenchPlan load_bench_plan(const std::filesystem::path& path);

// Loads an extensive-form game file or a warehouse spec (compiled with its
// own round count unless `rounds` is given).
Game load_any_game(const std::filesystem::path& path,
                   std::optional<int> rounds = std::nullopt);

// Writes records.csv, records.json, summary.csv and summary.json.
void write_bench_outputs(const std::filesystem::path& dir,
                         const std::vector<BenchRecord>& records,
                         const Aggregate& agg);

}  // namespace atsg

#endif  // ATSG_BENCH_HPP_
