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

#ifndef ATSG_LP_HPP_
#define ATSG_LP_HPP_

// Dense linear programming and a depth-first branch-and-bound for binary
// variables.
//
// solve_lp() is a two-phase primal simplex on a dense tableau. Each pivot
// costs O(nnz(pivot column) * nnz(pivot row)) after the usual sparsity
// skipping, bounded by O(rows * cols). Entering columns follow Dantzig's rule
// and switch to Bland's rule after a run of degenerate pivots, which rules
// out cycling. Variables fixed by their bounds (lo == hi) are substituted out
// before the tableau is built.

#include <chrono>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace atsg::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kFeasibilityTol = 1e-7;
inline constexpr double kIntegralityTol = 1e-6;

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Constraint {
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

// maximize objective . x  subject to constraints and lower <= x <= upper.
class LinearProgram {
 public:
  int add_variable(double lower, double upper, double objective = 0.0,
                   std::string name = {});
  int add_constraint(std::vector<Term> terms, Relation relation, double rhs,
                     std::string name = {});

  int num_vars() const { return static_cast<int>(objective_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }

  double objective(int var) const { return objective_[var]; }
  void set_objective(int var, double coef) { objective_[var] = coef; }
  double lower(int var) const { return lower_[var]; }
  double upper(int var) const { return upper_[var]; }
  void set_bounds(int var, double lower, double upper);
  const std::string& name(int var) const { return names_[var]; }

  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Constraint& constraint(int row) const { return constraints_[row]; }

  // Objective value and largest constraint/bound violation at x.
  double evaluate(std::span<const double> x) const;
  double max_violation(std::span<const double> x) const;

 private:
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::string> names_;
  std::vector<Constraint> constraints_;
};

enum class Status { kOptimal, kInfeasible, kUnbounded };
std::string_view to_string(Status s);

struct Solution {
  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> values;
  long pivots = 0;
};

// Throws NumericalBreakdown when no pivot element of magnitude above 1e-11
// is available or the iteration cap is hit.
Solution solve_lp(const LinearProgram& lp);

struct MilpModel {
  LinearProgram lp;
  // Variables restricted to {0, 1}; their bounds must be [0, 1].
  std::vector<int> binaries;
};

struct MilpOptions {
  long node_limit = 1'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct MilpStats {
  long lp_solves = 0;
  long nodes = 0;
  long pivots = 0;
};

struct MilpResult {
  Solution solution;
  MilpStats stats;
};

// Depth-first branch and bound with LP-relaxation bounds. Branches on the
// most fractional binary (lowest index on ties), exploring the up-branch
// first; an integral relaxation replaces the incumbent only when strictly
// better. Throws ResourceLimit / TimeLimitExceeded when a cap is hit.
MilpResult solve_milp(const MilpModel& model, const MilpOptions& options = {});

// Writes the model in CPLEX LP text format, one constraint per line.
void write_lp(std::ostream& out, const LinearProgram& lp,
              std::span<const int> binaries = {});

}  // namespace atsg::lp

#endif  // ATSG_LP_HPP_
