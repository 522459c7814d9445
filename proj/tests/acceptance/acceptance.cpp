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

// Acceptance checks 1-9. Prints one PASS/FAIL line per criterion (details on
// the lines before it) and exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "atsg/anchoring.hpp"
#include "atsg/bench.hpp"
#include "atsg/easg.hpp"
#include "atsg/exact_solver.hpp"
#include "atsg/o2uct.hpp"
#include "atsg/warehouse.hpp"
#include "test_games.hpp"

namespace atsg {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

Game warehouse_game(std::uint64_t seed, int rounds) {
  WarehouseParams p;
  p.rounds = rounds;
  return compile_warehouse(generate_warehouse(seed, p));
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// 1. distort_local on random triples; ratio preservation on random games.
Outcome anchoring_formulas() {
  Outcome o;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const int m = 2 + static_cast<int>(u(rng) * 5);
    const Game g = testing::matrix_game(std::vector<std::vector<double>>(m, {0.0}),
                                        std::vector<std::vector<double>>(m, {0.0}));
    const InfosetId root = g.root_infosets(Player::kLeader)[0];
    BehaviorStrategy b = uniform_behavior(g, Player::kLeader);
    double sum = 0.0;
    for (double& q : b.probs[root]) sum += (q = -std::log(1 - u(rng)));
    for (double& q : b.probs[root]) q /= sum;
    const double alpha = u(rng) * 0.999;
    const BehaviorStrategy d = distort_local(g, b, Alpha(alpha));
    for (int a = 0; a < m; ++a) {
      worst = std::max(worst,
                       std::abs(d.probs[root][a] - ((1 - alpha) * b.probs[root][a] + alpha / m)));
    }
  }
  double worst_ratio = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Game g = testing::random_game(5000 + seed, 5);
    const BehaviorStrategy b{Player::kLeader, testing::random_behavior(g, Player::kLeader, rng)};
    const Alpha alpha(u(rng) * 0.999);
    const DistortedWeights e = distorted_weights_exact(g, b, alpha);
    const DistortedWeights l = distorted_weights_linear(g, behavior_to_realization(g, b), alpha);
    for (InfosetId i : g.infosets(Player::kLeader)) {
      const auto& seqs = g.infoset(i).action_seq;
      for (SeqId x : seqs) {
        for (SeqId y : seqs) {
          if (e[y] <= 1e-12 || l[y] <= 1e-12) continue;
          worst_ratio = std::max(worst_ratio, std::abs(e[x] / e[y] - l[x] / l[y]));
        }
      }
    }
  }
  o.pass = worst <= 1e-12 && worst_ratio <= 1e-9;
  char buf[160];
  std::snprintf(buf, sizeof buf, "max formula error %.3g (tol 1e-12), max ratio gap %.3g (tol 1e-9)",
                worst, worst_ratio);
  o.detail = buf;
  return o;
}

// 2. bnb and multilp agree on 50 warehouse games.
Outcome exact_cross_validation() {
  Outcome o;
  double worst = 0.0;
  int games = 0;
  const std::vector<std::pair<int, int>> sets{{1, 17}, {2, 17}, {3, 16}};
  for (auto [rounds, count] : sets) {
    for (int seed = 0; seed < count; ++seed, ++games) {
      const Game g = warehouse_game(seed, rounds);
      for (double a : {0.0, 0.25, 0.5}) {
        const double b = solve_bnb(g, Alpha(a)).leader_utility;
        const double m = solve_multilp(g, Alpha(a)).leader_utility;
        if (std::abs(b - m) > 1e-6) {
          std::printf("  T=%d seed %d alpha %.2f: bnb %.9f multilp %.9f\n", rounds, seed, a, b, m);
        }
        worst = std::max(worst, std::abs(b - m));
      }
    }
  }
  o.pass = worst <= 1e-6;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d games x 3 alphas, max |bnb - multilp| = %.3g (tol 1e-6)",
                games, worst);
  o.detail = buf;
  return o;
}

// Leader value of a mixed row strategy in a matrix game against a rational
// follower that breaks ties for the leader.
double matrix_value(const std::vector<std::vector<double>>& lead,
                    const std::vector<std::vector<double>>& foll, const std::vector<double>& x) {
  double best_f = -1e300, best_l = -1e300;
  for (std::size_t j = 0; j < lead[0].size(); ++j) {
    double f = 0.0, l = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      f += x[i] * foll[i][j];
      l += x[i] * lead[i][j];
    }
    if (f > best_f + 1e-12) {
      best_f = f;
      best_l = l;
    } else if (f > best_f - 1e-12) {
      best_l = std::max(best_l, l);
    }
  }
  return best_l;
}

// 3. alpha = 0 against a 1e-3 grid over the leader's simplex.
Outcome sse_grid() {
  Outcome o;
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int rows = trial < 10 ? 2 : 3;
    const int cols = 2 + trial % 3;
    std::vector<std::vector<double>> lead(rows, std::vector<double>(cols)), foll = lead;
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        lead[i][j] = std::round(u(rng) * 100) / 100;
        foll[i][j] = std::round(u(rng) * 100) / 100;
      }
    }
    const int steps = 1000;
    double oracle = -1e300;
    if (rows == 2) {
      for (int k = 0; k <= steps; ++k) {
        const double x = static_cast<double>(k) / steps;
        oracle = std::max(oracle, matrix_value(lead, foll, {x, 1 - x}));
      }
    } else {
      for (int k = 0; k <= steps; ++k) {
        for (int l = 0; k + l <= steps; ++l) {
          const double x = static_cast<double>(k) / steps, y = static_cast<double>(l) / steps;
          oracle = std::max(oracle, matrix_value(lead, foll, {x, y, 1 - x - y}));
        }
      }
    }
    const double solved = solve_bnb(testing::matrix_game(lead, foll), Alpha(0.0)).leader_utility;
    if (std::abs(solved - oracle) > 1e-3) {
      std::printf("  game %d (%dx%d): solver %.6f grid %.6f\n", trial, rows, cols, solved, oracle);
    }
    worst = std::max(worst, std::abs(solved - oracle));
  }
  o.pass = worst <= 1e-3;
  char buf[160];
  std::snprintf(buf, sizeof buf, "20 matrix games, max |solver - grid| = %.3g (tol 1e-3)", worst);
  o.detail = buf;
  return o;
}

// 4. Exploitation on T=3 games at alpha = 0.3.
Outcome exploitation() {
  Outcome o;
  const Alpha a(0.3);
  int strict = 0;
  double worst = 0.0, gain = 0.0;
  for (int seed = 0; seed < 25; ++seed) {
    const Game g = warehouse_game(100 + seed, 3);
    const SolveResult tuned = solve_multilp(g, a);
    const SolveResult rational = solve_multilp(g, Alpha(0.0));
    const double reused =
        distorted_best_response(g, rational.leader_plan, a, AtMode::kLinear).leader_utility;
    const double diff = tuned.leader_utility - reused;
    worst = std::min(worst, diff);
    gain = std::max(gain, diff);
    if (diff > 1e-6) ++strict;
  }
  o.pass = worst >= -1e-6 && strict >= 1;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "25 T=3 games: strict gains on %d, largest gain %.4f, worst difference %.3g",
                strict, gain, worst);
  o.detail = buf;
  return o;
}

struct HeuristicRuns {
  std::string game;
  long long nodes = 0;
  int rounds = 0;
  double exact = 0.0;
  std::vector<double> easg, o2uct;
};

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double pop_stddev(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / v.size());
}

std::vector<HeuristicRuns> run_heuristics() {
  std::vector<HeuristicRuns> out;
  const double alpha = 0.3;
  for (int rounds : {1, 2, 3}) {
    for (int seed = 0; seed < 5; ++seed) {
      const Game g = warehouse_game(seed, rounds);
      if (g.num_nodes() > 1000) continue;
      HeuristicRuns h;
      h.game = "T" + std::to_string(rounds) + "-s" + std::to_string(seed);
      h.nodes = g.num_nodes();
      h.rounds = rounds;
      h.exact = solve_bnb(g, Alpha(alpha)).leader_utility;
      for (int k = 0; k < 10; ++k) {
        EasgConfig e;
        e.alpha = alpha;
        e.seed = k;
        h.easg.push_back(run_easg(g, e).leader_utility);
        O2uctConfig c;
        c.alpha = alpha;
        c.seed = k;
        h.o2uct.push_back(run_o2uct(g, c).leader_utility);
      }
      out.push_back(std::move(h));
    }
  }
  return out;
}

// 5. Heuristic quality against the exact value.
Outcome heuristic_quality(const std::vector<HeuristicRuns>& runs) {
  Outcome o;
  int easg_low = 0, o2uct_low = 0, above = 0;
  double easg_gap = 0.0, o2uct_gap = 0.0;
  for (const HeuristicRuns& h : runs) {
    const double me = mean(h.easg), mo = mean(h.o2uct);
    std::printf("  %-7s |H|=%5lld exact %8.4f easg mean %8.4f o2uct mean %8.4f\n", h.game.c_str(),
                h.nodes, h.exact, me, mo);
    if (me < h.exact - 0.05) ++easg_low;
    if (mo < h.exact - 0.05) ++o2uct_low;
    easg_gap = std::max(easg_gap, h.exact - me);
    o2uct_gap = std::max(o2uct_gap, h.exact - mo);
    for (double v : h.easg) above += v > h.exact + 1e-6;
    for (double v : h.o2uct) above += v > h.exact + 1e-6;
  }
  o.pass = easg_low == 0 && o2uct_low == 0 && above == 0;
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "%zu games: easg below exact-0.05 on %d (max gap %.4f), o2uct on %d "
                "(max gap %.4f), runs above exact+1e-6: %d",
                runs.size(), easg_low, easg_gap, o2uct_low, o2uct_gap, above);
  o.detail = buf;
  return o;
}

// 6. Per-game stddev over seeds on the T=3 games.
Outcome stability(const std::vector<HeuristicRuns>& runs) {
  Outcome o;
  double se = 0.0, so = 0.0, worst = 0.0;
  int n = 0;
  for (const HeuristicRuns& h : runs) {
    if (h.rounds != 3) continue;
    const double de = pop_stddev(h.easg), d_o = pop_stddev(h.o2uct);
    std::printf("  %-7s easg stddev %.4f o2uct stddev %.4f\n", h.game.c_str(), de, d_o);
    se += de;
    so += d_o;
    worst = std::max({worst, de, d_o});
    ++n;
  }
  se /= n;
  so /= n;
  o.pass = n > 0 && worst <= 0.3;
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "%d T=3 games: mean stddev easg %.4f, o2uct %.4f; o2uct <= easg + 0.05: %s; "
                "largest stddev %.4f (bound 0.3)",
                n, se, so, so <= se + 0.05 ? "yes" : "no (reported, not enforced)", worst);
  o.detail = buf;
  return o;
}

// 7. Exact time grows superlinearly in |H|; heuristics finish T=4 games.
Outcome scalability() {
  Outcome o;
  std::vector<double> log_h, log_t;
  int monotone = 0, specs = 0;
  for (int seed = 0; seed < 5; ++seed, ++specs) {
    double prev = 0.0;
    bool ok = true;
    std::printf("  seed %d:", seed);
    for (int rounds : {1, 2, 3}) {
      const Game g = warehouse_game(seed, rounds);
      std::vector<double> times;
      for (int rep = 0; rep < 3; ++rep) {
        const auto t0 = Clock::now();
        solve_bnb(g, Alpha(0.3));
        times.push_back(seconds_since(t0));
      }
      std::sort(times.begin(), times.end());
      const double t = times[1];
      std::printf(" T=%d |H|=%d %.4fs", rounds, g.num_nodes(), t);
      ok = ok && t > prev;
      prev = t;
      log_h.push_back(std::log(static_cast<double>(g.num_nodes())));
      log_t.push_back(std::log(t));
    }
    std::printf("\n");
    monotone += ok;
  }
  // Least-squares slope of log time on log |H|.
  const double mh = mean(log_h), mt = mean(log_t);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < log_h.size(); ++k) {
    num += (log_h[k] - mh) * (log_t[k] - mt);
    den += (log_h[k] - mh) * (log_h[k] - mh);
  }
  const double slope = num / den;

  int finished = 0, tried = 0;
  for (int seed = 0; seed < specs; ++seed) {
    const Game g = warehouse_game(seed, 4);
    const auto deadline = Clock::now() + std::chrono::seconds(600);
    EasgConfig e;
    e.alpha = 0.3;
    e.deadline = deadline;
    O2uctConfig c;
    c.alpha = 0.3;
    c.deadline = Clock::now() + std::chrono::seconds(600);
    for (int which = 0; which < 2; ++which, ++tried) {
      const auto t0 = Clock::now();
      try {
        const double v = which == 0 ? run_easg(g, e).leader_utility : run_o2uct(g, c).leader_utility;
        std::printf("  T=4 seed %d |H|=%d %s %.4f in %.1fs\n", seed, g.num_nodes(),
                    which == 0 ? "easg" : "o2uct", v, seconds_since(t0));
        ++finished;
      } catch (const TimeLimitExceeded&) {
        std::printf("  T=4 seed %d %s hit the 600 s cap\n", seed, which == 0 ? "easg" : "o2uct");
      }
    }
  }
  o.pass = monotone == specs && slope > 1.0 && finished == tried;
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "exact time monotone in T on %d/%d specs, log-log slope %.2f (> 1 needed); "
                "heuristics finished %d/%d T=4 runs",
                monotone, specs, slope, finished, tried);
  o.detail = buf;
  return o;
}

// 8. Bucket boundaries.
Outcome buckets() {
  Outcome o;
  const std::map<long long, long long> expected{{999, 1000}, {1000, 1000}, {3162, 1000},
                                                {3163, 10000}};
  std::string detail;
  for (auto [n, b] : expected) {
    const long long got = bucket_of(n);
    o.pass = o.pass && got == b;
    detail += std::to_string(n) + "->" + std::to_string(got) + " ";
  }
  o.detail = detail;
  return o;
}

// 9. Every bench record re-evaluates to its stored utility.
Outcome audit() {
  Outcome o;
  std::vector<BenchGame> games;
  for (int rounds : {1, 2}) {
    for (int seed = 0; seed < 3; ++seed) {
      games.push_back({"T" + std::to_string(rounds) + "-s" + std::to_string(seed),
                       warehouse_game(seed, rounds)});
    }
  }
  games.push_back({"T3-s0", warehouse_game(0, 3)});
  BenchConfig cfg;
  cfg.solvers = {"bnb", "multilp", "easg", "o2uct"};
  cfg.alphas = {0.0, 0.3};
  cfg.seeds = 3;
  cfg.time_cap_s = 600;
  const auto records = parse_records_json(records_to_json(run_bench(games, cfg)));
  std::map<std::string, const Game*> by_id;
  for (const BenchGame& g : games) by_id[g.id] = &g.game;
  double worst = 0.0;
  int ok = 0, other = 0;
  for (const BenchRecord& r : records) {
    if (r.status != RunStatus::kOk) {
      ++other;
      std::printf("  %s %s seed %d: %s %s\n", r.game_id.c_str(), r.solver.c_str(), r.seed,
                  std::string(to_string(r.status)).c_str(), r.message.c_str());
      continue;
    }
    ++ok;
    worst = std::max(worst, audit_record(r, *by_id.at(r.game_id), cfg.mode));
  }
  o.pass = other == 0 && worst <= 1e-6;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d ok records audited, %d not ok, max deviation %.3g (tol 1e-6)",
                ok, other, worst);
  o.detail = buf;
  return o;
}

int run_all() {
  int failures = 0;
  auto report = [&](int id, const char* name, double budget_s, const std::function<Outcome()>& f) {
    const auto t0 = Clock::now();
    Outcome o = f();
    const double took = seconds_since(t0);
    if (budget_s > 0 && took > budget_s) {
      o.pass = false;
      o.detail += " [over time budget]";
    }
    failures += !o.pass;
    std::printf("criterion %d %s: %s (%.1fs) %s\n", id, name, o.pass ? "PASS" : "FAIL", took,
                o.detail.c_str());
    std::fflush(stdout);
  };
  report(1, "anchoring formulas", 10, anchoring_formulas);
  report(2, "exact cross-validation", 900, exact_cross_validation);
  report(3, "alpha=0 grid SSE", 300, sse_grid);
  report(4, "exploitation trend", 900, exploitation);

  std::vector<HeuristicRuns> runs;
  report(5, "heuristic quality", 1800, [&] {
    runs = run_heuristics();
    return heuristic_quality(runs);
  });
  report(6, "stability", 0, [&] { return stability(runs); });
  report(7, "scalability", 0, scalability);
  report(8, "bucketing", 1, buckets);
  report(9, "end-to-end audit", 0, audit);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace atsg

int main() { return atsg::run_all(); }
