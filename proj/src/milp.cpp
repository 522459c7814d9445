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

#include <cmath>
#include <vector>

#include "atsg/error.hpp"
#include "atsg/lp.hpp"
#include "lp_internal.hpp"

namespace atsg::lp {

namespace {

struct Node {
  std::vector<double> lower;
  std::vector<double> upper;
};

}  // namespace

MilpResult solve_milp(const MilpModel& model, const MilpOptions& options) {
  const LinearProgram& lp = model.lp;
  for (int b : model.binaries) {
    if (b < 0 || b >= lp.num_vars()) {
      throw InputError("binary index out of range");
    }
    if (lp.lower(b) < 0.0 || lp.upper(b) > 1.0) {
      throw InputError("binary variables must have bounds within [0, 1]");
    }
  }

  MilpResult result;
  result.solution.status = Status::kInfeasible;
  bool have_incumbent = false;

  std::vector<Node> stack;
  Node root;
  root.lower.resize(lp.num_vars());
  root.upper.resize(lp.num_vars());
  for (int j = 0; j < lp.num_vars(); ++j) {
    root.lower[j] = lp.lower(j);
    root.upper[j] = lp.upper(j);
  }
  stack.push_back(std::move(root));

  while (!stack.empty()) {
    if (result.stats.nodes >= options.node_limit) {
      throw ResourceLimit("branch-and-bound node limit reached");
    }
    if (options.deadline && std::chrono::steady_clock::now() >= *options.deadline) {
      throw TimeLimitExceeded();
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    ++result.stats.nodes;

    Solution relax = solve_with_bounds(lp, node.lower, node.upper);
    ++result.stats.lp_solves;
    result.stats.pivots += relax.pivots;
    if (relax.status == Status::kInfeasible) continue;
    if (relax.status == Status::kUnbounded) {
      result.solution = std::move(relax);
      result.solution.status = Status::kUnbounded;
      return result;
    }
    if (have_incumbent &&
        relax.objective <= result.solution.objective + kFeasibilityTol) {
      continue;
    }

    int branch = -1;
    double most = kIntegralityTol;
    for (int b : model.binaries) {
      const double v = relax.values[b];
      const double frac = std::abs(v - std::round(v));
      if (frac > most) {
        most = frac;
        branch = b;
      }
    }
    if (branch < 0) {
      result.solution = std::move(relax);
      have_incumbent = true;
      continue;
    }
    Node down = node;
    down.upper[branch] = 0.0;
    down.lower[branch] = 0.0;
    node.lower[branch] = 1.0;
    node.upper[branch] = 1.0;
    stack.push_back(std::move(down));
    stack.push_back(std::move(node));
  }
  result.solution.pivots = result.stats.pivots;
  return result;
}

}  // namespace atsg::lp
