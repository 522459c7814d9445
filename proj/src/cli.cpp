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

#include "atsg/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "atsg/bench.hpp"
#include "atsg/easg.hpp"
#include "atsg/error.hpp"
#include "atsg/exact_solver.hpp"
#include "atsg/game_io.hpp"
#include "atsg/o2uct.hpp"
#include "atsg/warehouse.hpp"
#include "json.hpp"

namespace atsg {

namespace {

using Clock = std::chrono::steady_clock;

std::pair<int, int> parse_grid(const std::string& text) {
  int w = 0, h = 0;
  char x = 0, extra = 0;
  if (std::sscanf(text.c_str(), "%d%c%d%c", &w, &x, &h, &extra) != 3 ||
      (x != 'x' && x != 'X')) {
    throw InputError("--grid expects WIDTHxHEIGHT, got '" + text + "'");
  }
  return {w, h};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << text;
  if (!f) throw InputError("write failed for " + path);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct GenerateArgs {
  std::uint64_t seed = 0;
  std::string grid = "4x4";
  int rounds = 3;
  std::string out;
  bool efg = false;
};

struct InspectArgs {
  std::string game;
  std::optional<int> rounds;
  bool json = false;
};

struct SolveArgs {
  std::string method;
  double alpha = 0.0;
  std::string game;
  std::optional<int> rounds;
  std::string out;
  std::string at_mode = "linear";
  std::uint64_t seed = 0;
  bool json = false;
  bool timing = false;
  std::optional<double> time_limit;
  std::string dump_lp;
  long long enum_cap = 100'000;
  long node_limit = 1'000'000;
  EasgConfig easg;
  O2uctConfig o2uct;
};

struct BenchArgs {
  std::string config;
  std::string out;
  bool json = false;
};

int do_generate(const GenerateArgs& a, std::ostream& out) {
  WarehouseParams params;
  std::tie(params.width, params.height) = parse_grid(a.grid);
  params.rounds = a.rounds;
  const WarehouseSpec spec = generate_warehouse(a.seed, params);
  if (a.efg) {
    save_game(a.out, compile_warehouse(spec));
  } else {
    save_warehouse(a.out, spec);
  }
  out << "wrote " << a.out << '\n';
  return kExitOk;
}

int do_inspect(const InspectArgs& a, std::ostream& out) {
  const Game g = load_any_game(a.game, a.rounds);
  const long long h = g.num_nodes();
  const long long z = g.num_leaves();
  const int il = g.num_infosets(Player::kLeader);
  const int ifo = g.num_infosets(Player::kFollower);
  const int sl = g.num_sequences(Player::kLeader);
  const int sf = g.num_sequences(Player::kFollower);
  if (a.json) {
    nlohmann::ordered_json j;
    j["nodes"] = h;
    j["leaves"] = z;
    j["leader_infosets"] = il;
    j["follower_infosets"] = ifo;
    j["leader_sequences"] = sl;
    j["follower_sequences"] = sf;
    j["bucket"] = bucket_of(g);
    j["valid"] = true;
    out << j.dump(2) << '\n';
  } else {
    out << "|H|    " << h << "\n|Z|    " << z << "\n|I_l|  " << il
        << "\n|I_f|  " << ifo << "\n|S_l|  " << sl << "\n|S_f|  " << sf
        << "\nbucket " << bucket_of(g) << "\nstatus valid\n";
  }
  return kExitOk;
}

int do_solve(SolveArgs a, std::ostream& out) {
  const Alpha alpha(a.alpha);
  const AtMode mode = parse_at_mode(a.at_mode);
  const bool exact = a.method == "bnb" || a.method == "multilp";
  if (exact && mode == AtMode::kExact) {
    throw InputError("--method " + a.method + " supports only --at-mode linear");
  }
  if (a.time_limit && !(*a.time_limit >= 0.0)) throw InputError("--time-limit must be >= 0");
  a.easg.seed = a.o2uct.seed = a.seed;
  a.easg.alpha = a.o2uct.alpha = a.alpha;
  a.easg.mode = a.o2uct.mode = mode;
  if (a.method == "easg") a.easg.validate();
  if (a.method == "o2uct") a.o2uct.validate();

  const Game game = load_any_game(a.game, a.rounds);
  if (!a.dump_lp.empty()) {
    const SequenceFormModel model = build_model(game, alpha);
    std::ofstream f(a.dump_lp);
    if (!f) throw InputError("cannot write " + a.dump_lp);
    lp::write_lp(f, model.milp.lp, model.milp.binaries);
  }
  std::optional<Clock::time_point> deadline;
  if (a.time_limit) {
    deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(*a.time_limit));
  }
  a.easg.deadline = a.o2uct.deadline = deadline;
  ExactOptions eo;
  eo.deadline = deadline;
  eo.enumeration_cap = a.enum_cap;
  eo.node_limit = a.node_limit;

  SolveResult r;
  if (a.method == "bnb") {
    r = solve_bnb(game, alpha, eo);
  } else if (a.method == "multilp") {
    r = solve_multilp(game, alpha, eo);
  } else if (a.method == "easg") {
    r = run_easg(game, a.easg);
  } else {
    r = run_o2uct(game, a.o2uct);
  }
  const std::string json = result_to_json(game, r, a.timing);
  if (!a.out.empty()) write_file(a.out, json);
  if (a.json) {
    out << json;
  } else {
    out << "method            " << r.method << '\n'
        << "alpha             " << fmt(r.alpha) << " (" << to_string(r.mode) << ")\n"
        << "leader utility    " << fmt(r.leader_utility) << '\n'
        << "follower utility  " << fmt(r.follower_utility) << " (perceived)\n"
        << "follower strategy";
    for (InfosetId i : game.infosets(Player::kFollower)) {
      if (r.follower.defines(i)) {
        out << ' ' << game.infoset(i).label << '='
            << game.infoset(i).actions[r.follower.action(i)];
      }
    }
    out << '\n';
    if (a.timing) out << "wall time         " << fmt(r.stats.wall_ms) << " ms\n";
  }
  return kExitOk;
}

int do_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  const BenchPlan plan = load_bench_plan(a.config);
  const std::vector<BenchRecord> records = run_bench(plan.games, plan.config);
  const Aggregate agg = aggregate(records);
  write_bench_outputs(a.out, records, agg);
  for (const std::string& note : agg.notes) err << "note: " << note << '\n';
  out << (a.json ? rows_to_json(agg.rows) : rows_to_csv(agg.rows));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Stackelberg security games with an anchoring-biased follower"};
  app.name("atsg");
  app.require_subcommand(1);

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Generate a warehouse game spec");
  gen->add_option("--seed", ga.seed, "Generator seed");
  gen->add_option("--grid", ga.grid, "Grid size WIDTHxHEIGHT")->capture_default_str();
  gen->add_option("--rounds", ga.rounds, "Horizon T")->capture_default_str();
  gen->add_option("--out", ga.out, "Output file")->required();
  gen->add_flag("--efg", ga.efg, "Write the compiled extensive-form game instead");

  InspectArgs ia;
  auto* ins = app.add_subcommand("inspect", "Print game size statistics");
  ins->add_option("--game", ia.game, "Game or warehouse spec file")->required();
  ins->add_option("--rounds", ia.rounds, "Horizon for warehouse specs");
  ins->add_flag("--json", ia.json, "JSON output");

  SolveArgs sa;
  auto* sol = app.add_subcommand("solve", "Compute a leader strategy");
  sol->add_option("--method", sa.method, "bnb | multilp | easg | o2uct")
      ->required()
      ->check(CLI::IsMember({"bnb", "multilp", "easg", "o2uct"}));
  sol->add_option("--alpha", sa.alpha, "Anchoring strength in [0, 1)")->capture_default_str();
  sol->add_option("--game", sa.game, "Game or warehouse spec file")->required();
  sol->add_option("--rounds", sa.rounds, "Horizon for warehouse specs");
  sol->add_option("--out", sa.out, "Write the JSON result here");
  sol->add_option("--at-mode", sa.at_mode, "exact | linear")->capture_default_str();
  sol->add_option("--seed", sa.seed, "Seed for the heuristics");
  sol->add_flag("--json", sa.json, "Print the JSON result");
  sol->add_flag("--timing", sa.timing, "Include wall time in the output");
  sol->add_option("--time-limit", sa.time_limit, "Seconds before giving up");
  sol->add_option("--dump-lp", sa.dump_lp, "Write the MILP in LP format");
  sol->add_option("--enum-cap", sa.enum_cap, "multilp follower strategy cap")->capture_default_str();
  sol->add_option("--node-limit", sa.node_limit, "bnb node cap")->capture_default_str();
  sol->add_option("--pop", sa.easg.population_size, "easg population")->capture_default_str();
  sol->add_option("--gens", sa.easg.max_generations, "easg generation cap")->capture_default_str();
  sol->add_option("--stagnation", sa.easg.stagnation, "easg stagnation cap")->capture_default_str();
  sol->add_option("--pc", sa.easg.crossover_prob, "easg crossover probability")->capture_default_str();
  sol->add_option("--pm", sa.easg.mutation_prob, "easg mutation probability")->capture_default_str();
  sol->add_option("--pressure", sa.easg.pressure, "easg selection pressure")->capture_default_str();
  sol->add_option("--elite", sa.easg.elite, "easg elite count")->capture_default_str();
  sol->add_option("--uct-c", sa.o2uct.uct_c, "o2uct exploration constant")->capture_default_str();
  sol->add_option("--max-positive", sa.o2uct.max_positive_passes, "o2uct positive pass cap")->capture_default_str();
  sol->add_option("--eps", sa.o2uct.min_improvement, "o2uct minimum improvement")->capture_default_str();
  sol->add_option("--eps-window", sa.o2uct.improvement_window, "o2uct improvement window (samples)")->capture_default_str();
  sol->add_option("--max-feasibility", sa.o2uct.max_feasibility_passes, "o2uct consecutive feasibility pass cap")->capture_default_str();

  BenchArgs ba;
  auto* ben = app.add_subcommand("bench", "Run a benchmark sweep");
  ben->add_option("--config", ba.config, "Bench configuration JSON")->required();
  ben->add_option("--out", ba.out, "Output directory")->required();
  ben->add_flag("--json", ba.json, "Print the summary as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "atsg: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (gen->parsed()) return do_generate(ga, out);
    if (ins->parsed()) return do_inspect(ia, out);
    if (sol->parsed()) return do_solve(sa, out);
    return do_bench(ba, out, err);
  } catch (const InputError& e) {
    err << "atsg: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "atsg: " << e.what() << '\n';
    return kExitSolverFailure;
  }
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace atsg
