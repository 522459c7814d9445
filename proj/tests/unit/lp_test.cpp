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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "atsg/error.hpp"
#include "atsg/lp.hpp"

namespace atsg::lp {
namespace {

// Hyperplane a . x = b.
struct Plane {
  std::vector<double> a;
  double b;
};

// Solves the square system by Gaussian elimination with partial pivoting.
std::optional<std::vector<double>> solve_square(std::vector<Plane> rows) {
  const std::size_t n = rows.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(rows[r].a[c]) > std::abs(rows[p].a[c])) p = r;
    }
    if (std::abs(rows[p].a[c]) < 1e-10) return std::nullopt;
    std::swap(rows[c], rows[p]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = rows[r].a[c] / rows[c].a[c];
      for (std::size_t k = 0; k < n; ++k) rows[r].a[k] -= f * rows[c].a[k];
      rows[r].b -= f * rows[c].b;
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rows[i].b / rows[i].a[i];
  return x;
}

// Best objective over all vertices of {x : planes as <=}, or nullopt if none.
std::optional<double> vertex_oracle(const std::vector<Plane>& ineq, const std::vector<double>& c) {
  const std::size_t n = c.size();
  std::optional<double> best;
  std::vector<int> pick(ineq.size(), 0);
  std::fill(pick.end() - n, pick.end(), 1);
  do {
    std::vector<Plane> rows;
    for (std::size_t i = 0; i < ineq.size(); ++i) {
      if (pick[i]) rows.push_back(ineq[i]);
    }
    const auto x = solve_square(rows);
    if (!x) continue;
    bool ok = true;
    for (const Plane& p : ineq) {
      double lhs = 0.0;
      for (std::size_t k = 0; k < n; ++k) lhs += p.a[k] * (*x)[k];
      if (lhs > p.b + 1e-9) ok = false;
    }
    if (!ok) continue;
    double v = 0.0;
    for (std::size_t k = 0; k < n; ++k) v += c[k] * (*x)[k];
    if (!best || v > *best) best = v;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

TEST(Lp, TwoVariableVertex) {
  LinearProgram lp;
  const int x = lp.add_variable(0, kInf, 1);
  const int y = lp.add_variable(0, kInf, 1);
  lp.add_constraint({{x, 1}, {y, 2}}, Relation::kLessEqual, 4);
  lp.add_constraint({{x, 3}, {y, 1}}, Relation::kLessEqual, 6);
  const Solution s = solve_lp(lp);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.objective, 2.8, 1e-9);
  EXPECT_NEAR(s.values[x], 1.6, 1e-9);
  EXPECT_NEAR(s.values[y], 1.2, 1e-9);
}

TEST(Lp, EqualityAndGreaterEqual) {
  // min x + 2y s.t. x + y = 3, x >= 1, y >= 0.5  ->  x = 2.5, y = 0.5.
  LinearProgram lp;
  const int x = lp.add_variable(-kInf, kInf, -1);
  const int y = lp.add_variable(-kInf, kInf, -2);
  lp.add_constraint({{x, 1}, {y, 1}}, Relation::kEqual, 3);
  lp.add_constraint({{x, 1}}, Relation::kGreaterEqual, 1);
  lp.add_constraint({{y, 1}}, Relation::kGreaterEqual, 0.5);
  const Solution s = solve_lp(lp);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.values[x], 2.5, 1e-9);
  EXPECT_NEAR(s.values[y], 0.5, 1e-9);
  EXPECT_NEAR(s.objective, -3.5, 1e-9);
}

TEST(Lp, FixedVariable) {
  LinearProgram lp;
  const int x = lp.add_variable(2, 2, 1);
  const int y = lp.add_variable(0, 10, 1);
  lp.add_constraint({{x, 1}, {y, 1}}, Relation::kLessEqual, 5);
  const Solution s = solve_lp(lp);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_DOUBLE_EQ(s.values[x], 2.0);
  EXPECT_NEAR(s.values[y], 3.0, 1e-9);
}

TEST(Lp, Unbounded) {
  LinearProgram lp;
  const int x = lp.add_variable(0, kInf, 1);
  const int y = lp.add_variable(0, kInf, 0);
  lp.add_constraint({{x, 1}, {y, -1}}, Relation::kLessEqual, 1);
  EXPECT_EQ(solve_lp(lp).status, Status::kUnbounded);
}

TEST(Lp, ContradictoryConstraints) {
  LinearProgram lp;
  const int x = lp.add_variable(0, kInf, 1);
  lp.add_constraint({{x, 1}}, Relation::kLessEqual, 1);
  lp.add_constraint({{x, 1}}, Relation::kGreaterEqual, 2);
  EXPECT_EQ(solve_lp(lp).status, Status::kInfeasible);
}

TEST(Lp, ContradictoryBounds) {
  LinearProgram lp;
  EXPECT_THROW(lp.add_variable(1, 0), InputError);
  const int x = lp.add_variable(0, 1);
  EXPECT_THROW(lp.set_bounds(x, 2, 1), InputError);
  EXPECT_THROW(lp.add_constraint({{7, 1.0}}, Relation::kEqual, 0), InputError);
  EXPECT_THROW(lp.add_constraint({{x, 1.0}}, Relation::kEqual, std::nan("")), InputError);
}

TEST(Lp, DegenerateCyclingExample) {
  // Beale's example cycles under the textbook rule without anti-cycling.
  LinearProgram lp;
  std::vector<int> x;
  for (double c : {0.75, -150.0, 0.02, -6.0}) x.push_back(lp.add_variable(0, kInf, c));
  lp.add_constraint({{x[0], 0.25}, {x[1], -60}, {x[2], -0.04}, {x[3], 9}}, Relation::kLessEqual, 0);
  lp.add_constraint({{x[0], 0.5}, {x[1], -90}, {x[2], -0.02}, {x[3], 3}}, Relation::kLessEqual, 0);
  lp.add_constraint({{x[2], 1}}, Relation::kLessEqual, 1);
  const Solution s = solve_lp(lp);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.objective, 0.05, 1e-9);
}

TEST(Lp, RandomAgainstVertexEnumeration) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = trial < 50 ? 2 + trial % 4 : 10;
    const int m = trial < 50 ? 2 + trial % 5 : 3;
    LinearProgram lp;
    std::vector<double> c(n);
    std::vector<Plane> planes;
    for (int k = 0; k < n; ++k) {
      c[k] = u(rng) * 2 - 0.5;
      lp.add_variable(0, kInf, c[k]);
      Plane nonneg{std::vector<double>(n, 0.0), 0.0};
      nonneg.a[k] = -1;
      planes.push_back(nonneg);
    }
    for (int r = 0; r < m; ++r) {
      Plane p{std::vector<double>(n), 1 + u(rng) * 4};
      std::vector<Term> terms;
      for (int k = 0; k < n; ++k) {
        p.a[k] = std::round((0.1 + u(rng)) * 100) / 100;
        terms.push_back({k, p.a[k]});
      }
      lp.add_constraint(terms, Relation::kLessEqual, p.b);
      planes.push_back(p);
    }
    const auto oracle = vertex_oracle(planes, c);
    ASSERT_TRUE(oracle.has_value());
    const Solution s = solve_lp(lp);
    ASSERT_EQ(s.status, Status::kOptimal) << "trial " << trial;
    EXPECT_NEAR(s.objective, *oracle, 1e-7) << "trial " << trial;
    EXPECT_LE(lp.max_violation(s.values), 1e-7);
    EXPECT_NEAR(lp.evaluate(s.values), s.objective, 1e-9);
  }
}

TEST(Lp, Deterministic) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LinearProgram lp;
  for (int k = 0; k < 8; ++k) lp.add_variable(0, 1, u(rng));
  for (int r = 0; r < 6; ++r) {
    std::vector<Term> t;
    for (int k = 0; k < 8; ++k) t.push_back({k, u(rng)});
    lp.add_constraint(t, Relation::kLessEqual, 0.5);
  }
  const Solution a = solve_lp(lp), b = solve_lp(lp);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.pivots, b.pivots);
  EXPECT_EQ(a.objective, b.objective);
}

TEST(Milp, KnapsackAgainstEnumeration) {
  const std::vector<double> value{6, 5, 8, 9, 6}, weight{2, 3, 6, 7, 5};
  const double cap = 12;
  MilpModel m;
  std::vector<Term> t;
  for (int k = 0; k < 5; ++k) {
    m.binaries.push_back(m.lp.add_variable(0, 1, value[k]));
    t.push_back({k, weight[k]});
  }
  m.lp.add_constraint(t, Relation::kLessEqual, cap);
  double best = 0.0;
  for (int mask = 0; mask < 32; ++mask) {
    double v = 0, w = 0;
    for (int k = 0; k < 5; ++k) {
      if (mask >> k & 1) v += value[k], w += weight[k];
    }
    if (w <= cap) best = std::max(best, v);
  }
  const MilpResult r = solve_milp(m);
  ASSERT_EQ(r.solution.status, Status::kOptimal);
  EXPECT_NEAR(r.solution.objective, best, 1e-9);
  for (int k = 0; k < 5; ++k) {
    const double x = r.solution.values[k];
    EXPECT_LT(std::min(std::abs(x), std::abs(x - 1)), kIntegralityTol);
  }
  EXPECT_GE(r.stats.lp_solves, 1);
}

TEST(Milp, RandomBinaryAgainstEnumeration) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + trial % 9;
    const int rows = 1 + trial % 3;
    MilpModel m;
    std::vector<double> c(n);
    for (int k = 0; k < n; ++k) {
      c[k] = std::round((u(rng) * 2 - 0.5) * 100) / 100;
      m.binaries.push_back(m.lp.add_variable(0, 1, c[k]));
    }
    // One continuous variable in [0, 1] tied to the binaries.
    const int y = m.lp.add_variable(0, 1, 0.3);
    std::vector<std::vector<double>> a(rows, std::vector<double>(n));
    std::vector<double> b(rows);
    for (int r = 0; r < rows; ++r) {
      std::vector<Term> t;
      for (int k = 0; k < n; ++k) {
        a[r][k] = std::round(u(rng) * 100) / 100;
        t.push_back({k, a[r][k]});
      }
      t.push_back({y, 1.0});
      b[r] = std::round(u(rng) * n * 0.4 * 100) / 100 + 0.5;
      m.lp.add_constraint(t, Relation::kLessEqual, b[r]);
    }
    double best = -kInf;
    for (int mask = 0; mask < (1 << n); ++mask) {
      double v = 0, slack = 1.0;
      for (int r = 0; r < rows; ++r) {
        double lhs = 0;
        for (int k = 0; k < n; ++k) {
          if (mask >> k & 1) lhs += a[r][k];
        }
        slack = std::min(slack, b[r] - lhs);
      }
      if (slack < 0) continue;
      for (int k = 0; k < n; ++k) {
        if (mask >> k & 1) v += c[k];
      }
      best = std::max(best, v + 0.3 * slack);
    }
    const MilpResult r = solve_milp(m);
    ASSERT_EQ(r.solution.status, Status::kOptimal) << "trial " << trial;
    EXPECT_NEAR(r.solution.objective, best, 1e-6) << "trial " << trial;
  }
}

TEST(Milp, Infeasible) {
  MilpModel m;
  const int x = m.lp.add_variable(0, 1, 1);
  m.binaries.push_back(x);
  m.lp.add_constraint({{x, 1}}, Relation::kGreaterEqual, 0.3);
  m.lp.add_constraint({{x, 1}}, Relation::kLessEqual, 0.7);
  EXPECT_EQ(solve_milp(m).solution.status, Status::kInfeasible);
}

TEST(Milp, Limits) {
  MilpModel m;
  std::vector<Term> t;
  for (int k = 0; k < 12; ++k) {
    m.binaries.push_back(m.lp.add_variable(0, 1, 1.0 + 0.01 * k));
    t.push_back({k, 2.0});
  }
  m.lp.add_constraint(t, Relation::kLessEqual, 11);
  MilpOptions small;
  small.node_limit = 1;
  EXPECT_THROW(solve_milp(m, small), ResourceLimit);
  MilpOptions past;
  past.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  EXPECT_THROW(solve_milp(m, past), TimeLimitExceeded);
}

TEST(Milp, BinaryBoundsChecked) {
  MilpModel m;
  m.binaries.push_back(m.lp.add_variable(0, 2, 1));
  EXPECT_THROW(solve_milp(m), InputError);
}

TEST(WriteLp, Sections) {
  MilpModel m;
  const int x = m.lp.add_variable(0, 1, 2, "x");
  const int y = m.lp.add_variable(-1, 3, -1, "y");
  m.binaries.push_back(x);
  m.lp.add_constraint({{x, 1}, {y, 1}}, Relation::kLessEqual, 2, "cap");
  m.lp.add_constraint({{y, 1}}, Relation::kEqual, 0.5, "fix");
  std::ostringstream out;
  write_lp(out, m.lp, m.binaries);
  const std::string text = out.str();
  for (const char* s : {"Maximize", "Subject To", "Bounds", "Binaries", "End", "cap:", "fix:"}) {
    EXPECT_NE(text.find(s), std::string::npos) << s;
  }
  EXPECT_LT(text.find("Maximize"), text.find("Subject To"));
  EXPECT_LT(text.find("Subject To"), text.find("Bounds"));
  EXPECT_LT(text.find("Binaries"), text.find("End"));
}

}  // namespace
}  // namespace atsg::lp
