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

#include "atsg/lp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "atsg/error.hpp"
#include "lp_internal.hpp"

namespace atsg::lp {

int LinearProgram::add_variable(double lower, double upper, double objective,
                                std::string name) {
  if (!(lower <= upper) || std::isnan(lower) || std::isnan(upper)) {
    throw InputError("variable bounds must satisfy lower <= upper");
  }
  if (!std::isfinite(objective)) {
    throw InputError("objective coefficients must be finite");
  }
  objective_.push_back(objective);
  lower_.push_back(lower);
  upper_.push_back(upper);
  names_.push_back(std::move(name));
  return num_vars() - 1;
}

int LinearProgram::add_constraint(std::vector<Term> terms, Relation relation,
                                  double rhs, std::string name) {
  for (const Term& t : terms) {
    if (t.var < 0 || t.var >= num_vars()) {
      throw InputError("constraint refers to an unknown variable");
    }
    if (!std::isfinite(t.coef)) {
      throw InputError("constraint coefficients must be finite");
    }
  }
  if (!std::isfinite(rhs)) throw InputError("constraint rhs must be finite");
  constraints_.push_back(Constraint{std::move(terms), relation, rhs, std::move(name)});
  return num_constraints() - 1;
}

void LinearProgram::set_bounds(int var, double lower, double upper) {
  if (!(lower <= upper)) {
    throw InputError("variable bounds must satisfy lower <= upper");
  }
  lower_[var] = lower;
  upper_[var] = upper;
}

double LinearProgram::evaluate(std::span<const double> x) const {
  double v = 0.0;
  for (int j = 0; j < num_vars(); ++j) v += objective_[j] * x[j];
  return v;
}

double LinearProgram::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (int j = 0; j < num_vars(); ++j) {
    worst = std::max(worst, lower_[j] - x[j]);
    worst = std::max(worst, x[j] - upper_[j]);
  }
  for (const Constraint& c : constraints_) {
    double lhs = 0.0;
    for (const Term& t : c.terms) lhs += t.coef * x[t.var];
    switch (c.relation) {
      case Relation::kLessEqual:
        worst = std::max(worst, lhs - c.rhs);
        break;
      case Relation::kGreaterEqual:
        worst = std::max(worst, c.rhs - lhs);
        break;
      case Relation::kEqual:
        worst = std::max(worst, std::abs(lhs - c.rhs));
        break;
    }
  }
  return worst;
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-7;
constexpr double kTinyPivot = 1e-11;
constexpr double kHarrisTol = 1e-9;
constexpr double kVerifyTol = 1e-6;
constexpr double kReducedCostTol = 1e-9;
constexpr double kDropTol = 1e-13;
constexpr int kDegenerateStreakForBland = 50;
constexpr double kPerturbation = 1e-7;

// How an original variable is expressed in tableau columns.
struct ColumnMap {
  enum Kind { kFixed, kShifted, kFlipped, kSplit } kind = kFixed;
  double offset = 0.0;  // fixed value, lower bound or upper bound
  int col = -1;
  int neg_col = -1;     // kSplit only
};

struct Row {
  std::vector<std::pair<int, double>> terms;  // tableau column, coefficient
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

class Tableau {
 public:
  // Two trailing columns: the unperturbed right-hand side, then the working
  // (perturbed) one.
  Tableau(int rows, int cols) : m_(rows), w_(cols + 2), data_(std::size_t(rows) * w_, 0.0),
        obj_(w_, 0.0), basis_(rows, -1) {}

  double* row(int i) { return data_.data() + std::size_t(i) * w_; }
  double& at(int i, int j) { return data_[std::size_t(i) * w_ + j]; }
  double& rhs(int i) { return at(i, w_ - 1); }
  double& true_rhs(int i) { return at(i, w_ - 2); }

  // Replace the working right-hand side by the unperturbed one.
  void restore_rhs() {
    for (int i = 0; i < m_; ++i) rhs(i) = true_rhs(i);
    obj_[w_ - 1] = obj_[w_ - 2];
  }
  std::vector<double>& obj() { return obj_; }
  int rows() const { return m_; }
  int width() const { return w_; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int r, int c) {
    double* pr = row(r);
    const double inv = 1.0 / pr[c];
    nz_.clear();
    for (int j = 0; j < w_; ++j) {
      if (pr[j] != 0.0) {
        pr[j] *= inv;
        nz_.push_back(j);
      }
    }
    pr[c] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      eliminate(row(i), pr, c);
    }
    eliminate(obj_.data(), pr, c);
    basis_[r] = c;
  }

  // target -= target[c] * pivot_row, keeping exact zeros sparse.
  void eliminate(double* target, const double* pr, int c) {
    const double f = target[c];
    if (f == 0.0) return;
    for (int j : nz_) {
      double v = target[j] - f * pr[j];
      if (std::abs(v) < kDropTol) v = 0.0;
      target[j] = v;
    }
    target[c] = 0.0;
  }

  // Harris steps may leave basic values marginally negative.
  void clamp_rhs() {
    for (int i = 0; i < m_; ++i) {
      double& b = rhs(i);
      if (b < 0.0) b = 0.0;
    }
  }

  void eliminate_row_into_obj(int i) {
    const double* pr = row(i);
    const int b = basis_[i];
    const double f = obj_[b];
    if (f == 0.0) return;
    for (int j = 0; j < w_; ++j) {
      if (pr[j] != 0.0) obj_[j] -= f * pr[j];
    }
    obj_[b] = 0.0;
  }

 private:
  int m_;
  int w_;
  std::vector<double> data_;
  std::vector<double> obj_;
  std::vector<int> basis_;
  std::vector<int> nz_;
};

enum class RunResult { kOptimal, kUnbounded };

// Primal simplex on the current objective row; columns >= `eligible_end`
// never enter.
RunResult run_simplex(Tableau& t, int eligible_end, long& pivots,
                      long iteration_cap) {
  bool bland = false;
  int degenerate_streak = 0;
  std::vector<char> rejected(eligible_end, 0);
  const int m = t.rows();
  const int rhs_col = t.width() - 1;
  for (long iter = 0;; ++iter) {
    if (iter > iteration_cap) {
      throw NumericalBreakdown("simplex iteration cap reached");
    }
    std::fill(rejected.begin(), rejected.end(), 0);
    for (;;) {
      // Entering column.
      int enter = -1;
      double best = -kReducedCostTol;
      for (int j = 0; j < eligible_end; ++j) {
        if (rejected[j]) continue;
        const double d = t.obj()[j];
        if (d < -kReducedCostTol) {
          if (bland) {
            enter = j;
            break;
          }
          if (d < best) {
            best = d;
            enter = j;
          }
        }
      }
      if (enter < 0) {
        if (std::any_of(rejected.begin(), rejected.end(),
                        [](char r) { return r != 0; })) {
          throw NumericalBreakdown(
              "no pivot element above 1e-11 in any improving column");
        }
        return RunResult::kOptimal;
      }
      // Harris two-pass ratio test: find the largest step allowed when
      // every basic variable may dip kHarrisTol below zero, then take the
      // largest pivot element among the rows blocking within that step.
      double theta_max = std::numeric_limits<double>::infinity();
      bool tiny_only = false;
      bool any = false;
      for (int i = 0; i < m; ++i) {
        const double a = t.at(i, enter);
        if (a <= kPivotTol) {
          if (a > kTinyPivot) tiny_only = true;
          continue;
        }
        any = true;
        theta_max = std::min(theta_max, (std::max(0.0, t.at(i, rhs_col)) + kHarrisTol) / a);
      }
      if (!any) {
        if (tiny_only) {
          rejected[enter] = 1;
          continue;
        }
        return RunResult::kUnbounded;
      }
      int leave = -1;
      double best_ratio = 0.0;
      double best_piv = 0.0;
      for (int i = 0; i < m; ++i) {
        const double a = t.at(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(0.0, t.at(i, rhs_col)) / a;
        if (ratio > theta_max) continue;
        bool take;
        if (leave < 0) {
          take = true;
        } else if (bland) {
          take = ratio < best_ratio - 1e-12 ||
                 (ratio <= best_ratio + 1e-12 && t.basis()[i] < t.basis()[leave]);
        } else {
          take = a > best_piv ||
                 (a == best_piv && t.basis()[i] < t.basis()[leave]);
        }
        if (take) {
          leave = i;
          best_ratio = ratio;
          best_piv = a;
        }
      }
      t.pivot(leave, enter);
      t.clamp_rhs();
      ++pivots;
      if (best_ratio <= 1e-12) {
        if (++degenerate_streak > kDegenerateStreakForBland) bland = true;
      } else {
        degenerate_streak = 0;
        bland = false;
      }
      break;
    }
  }
}

// Dual simplex from an optimal basis after the right-hand side changed.
// Returns false when some row cannot be repaired, i.e. the unperturbed
// problem is infeasible.
bool dual_cleanup(Tableau& t, int eligible_end, long& pivots, long iteration_cap) {
  const int m = t.rows();
  for (long iter = 0;; ++iter) {
    if (iter > iteration_cap) {
      throw NumericalBreakdown("dual simplex iteration cap reached");
    }
    int leave = -1;
    double worst = -kHarrisTol;
    for (int i = 0; i < m; ++i) {
      if (t.rhs(i) < worst) {
        worst = t.rhs(i);
        leave = i;
      }
    }
    if (leave < 0) break;
    int enter = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    double best_piv = 0.0;
    const double* row = t.row(leave);
    for (int j = 0; j < eligible_end; ++j) {
      const double a = row[j];
      if (a >= -kPivotTol) continue;
      const double ratio = std::max(0.0, t.obj()[j]) / -a;
      if (ratio < best_ratio - 1e-12 || (ratio <= best_ratio + 1e-12 && -a > best_piv)) {
        best_ratio = ratio;
        best_piv = -a;
        enter = j;
      }
    }
    if (enter < 0) {
      if (worst < -kFeasibilityTol) return false;
      t.rhs(leave) = 0.0;
      continue;
    }
    t.pivot(leave, enter);
    ++pivots;
  }
  t.clamp_rhs();
  return true;
}

}  // namespace

Solution solve_with_bounds(const LinearProgram& lp, std::span<const double> lower,
                           std::span<const double> upper) {
  const int n = lp.num_vars();
  Solution sol;

  // Column mapping for the original variables.
  std::vector<ColumnMap> map(n);
  int ncols = 0;
  std::vector<Row> rows;
  for (int j = 0; j < n; ++j) {
    const double lo = lower[j];
    const double hi = upper[j];
    if (lo > hi) {
      sol.status = Status::kInfeasible;
      return sol;
    }
    ColumnMap& cm = map[j];
    if (lo == hi) {
      cm.kind = ColumnMap::kFixed;
      cm.offset = lo;
    } else if (std::isfinite(lo)) {
      cm.kind = ColumnMap::kShifted;
      cm.offset = lo;
      cm.col = ncols++;
      if (std::isfinite(hi)) {
        rows.push_back(Row{{{cm.col, 1.0}}, Relation::kLessEqual, hi - lo});
      }
    } else if (std::isfinite(hi)) {
      cm.kind = ColumnMap::kFlipped;
      cm.offset = hi;
      cm.col = ncols++;
    } else {
      cm.kind = ColumnMap::kSplit;
      cm.col = ncols++;
      cm.neg_col = ncols++;
    }
  }
  const int structural = ncols;

  std::vector<double> dense(structural, 0.0);
  std::vector<int> touched;
  for (const Constraint& c : lp.constraints()) {
    double rhs = c.rhs;
    touched.clear();
    auto add = [&](int col, double v) {
      if (dense[col] == 0.0) touched.push_back(col);
      dense[col] += v;
      if (dense[col] == 0.0) dense[col] = 1e-300;  // keep slot marked
    };
    for (const Term& term : c.terms) {
      const ColumnMap& cm = map[term.var];
      switch (cm.kind) {
        case ColumnMap::kFixed:
          rhs -= term.coef * cm.offset;
          break;
        case ColumnMap::kShifted:
          rhs -= term.coef * cm.offset;
          add(cm.col, term.coef);
          break;
        case ColumnMap::kFlipped:
          rhs -= term.coef * cm.offset;
          add(cm.col, -term.coef);
          break;
        case ColumnMap::kSplit:
          add(cm.col, term.coef);
          add(cm.neg_col, -term.coef);
          break;
      }
    }
    Row row;
    row.relation = c.relation;
    row.rhs = rhs;
    std::sort(touched.begin(), touched.end());
    for (int col : touched) {
      const double v = dense[col];
      dense[col] = 0.0;
      if (std::abs(v) > 1e-290) row.terms.emplace_back(col, v);
    }
    if (row.terms.empty()) {
      const bool ok = (c.relation == Relation::kLessEqual && 0.0 <= rhs + kFeasibilityTol) ||
                      (c.relation == Relation::kGreaterEqual && 0.0 >= rhs - kFeasibilityTol) ||
                      (c.relation == Relation::kEqual && std::abs(rhs) <= kFeasibilityTol);
      if (!ok) {
        sol.status = Status::kInfeasible;
        return sol;
      }
      continue;
    }
    rows.push_back(std::move(row));
  }

  // Normalize to rhs >= 0; a ">= 0" row becomes "<= 0" and needs no
  // artificial.
  int slacks = 0;
  int artificials = 0;
  for (Row& r : rows) {
    if (r.rhs < 0.0 || (r.rhs == 0.0 && r.relation == Relation::kGreaterEqual)) {
      r.rhs = -r.rhs;
      for (auto& [col, v] : r.terms) v = -v;
      if (r.relation == Relation::kLessEqual) {
        r.relation = Relation::kGreaterEqual;
      } else if (r.relation == Relation::kGreaterEqual) {
        r.relation = Relation::kLessEqual;
      }
    }
    if (r.relation != Relation::kEqual) ++slacks;
    if (r.relation != Relation::kLessEqual) ++artificials;
  }

  const int m = static_cast<int>(rows.size());
  const int art_start = structural + slacks;
  Tableau t(m, art_start + artificials);
  {
    int next_slack = structural;
    int next_art = art_start;
    for (int i = 0; i < m; ++i) {
      const Row& r = rows[i];
      for (const auto& [col, v] : r.terms) t.at(i, col) = v;
      t.true_rhs(i) = r.rhs;
      // Relaxing inequality rows by a small row-specific amount breaks the
      // ties that otherwise stall the ratio test.
      const double delta = kPerturbation * (1.0 + double((i * 7919) % 1009) / 1009.0) *
                           std::max(1.0, std::abs(r.rhs));
      switch (r.relation) {
        case Relation::kLessEqual:
          t.rhs(i) = r.rhs + delta;
          break;
        case Relation::kGreaterEqual:
          t.rhs(i) = r.rhs - std::min(delta, 0.5 * r.rhs);
          break;
        case Relation::kEqual:
          t.rhs(i) = r.rhs;
          break;
      }
      switch (r.relation) {
        case Relation::kLessEqual:
          t.at(i, next_slack) = 1.0;
          t.basis()[i] = next_slack++;
          break;
        case Relation::kGreaterEqual:
          t.at(i, next_slack++) = -1.0;
          t.at(i, next_art) = 1.0;
          t.basis()[i] = next_art++;
          break;
        case Relation::kEqual:
          t.at(i, next_art) = 1.0;
          t.basis()[i] = next_art++;
          break;
      }
    }
  }
  const long iteration_cap = 50L * (m + t.width()) + 10000;
  const int rhs_col = t.width() - 1;

  if (artificials > 0) {
    auto& obj = t.obj();
    for (int j = art_start; j < art_start + artificials; ++j) obj[j] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (t.basis()[i] >= art_start) t.eliminate_row_into_obj(i);
    }
    run_simplex(t, art_start, sol.pivots, iteration_cap);
    if (t.obj()[rhs_col] < -kFeasibilityTol) {
      sol.status = Status::kInfeasible;
      return sol;
    }
    // Drive zero-valued artificials out of the basis where possible; rows
    // where that fails are redundant and stay inert.
    for (int i = 0; i < m; ++i) {
      if (t.basis()[i] < art_start) continue;
      int best = -1;
      double best_abs = kPivotTol;
      for (int j = 0; j < art_start; ++j) {
        const double a = std::abs(t.at(i, j));
        if (a > best_abs) {
          best_abs = a;
          best = j;
        }
      }
      if (best >= 0) {
        t.pivot(i, best);
        ++sol.pivots;
      }
    }
  }

  // Phase 2 objective.
  {
    auto& obj = t.obj();
    std::fill(obj.begin(), obj.end(), 0.0);
    for (int j = 0; j < n; ++j) {
      const ColumnMap& cm = map[j];
      const double c = lp.objective(j);
      switch (cm.kind) {
        case ColumnMap::kFixed:
          break;
        case ColumnMap::kShifted:
          obj[cm.col] = -c;
          break;
        case ColumnMap::kFlipped:
          obj[cm.col] = c;
          break;
        case ColumnMap::kSplit:
          obj[cm.col] = -c;
          obj[cm.neg_col] = c;
          break;
      }
    }
    for (int i = 0; i < m; ++i) t.eliminate_row_into_obj(i);
  }
  if (run_simplex(t, art_start, sol.pivots, iteration_cap) ==
      RunResult::kUnbounded) {
    sol.status = Status::kUnbounded;
    return sol;
  }
  t.restore_rhs();
  if (!dual_cleanup(t, art_start, sol.pivots, iteration_cap)) {
    sol.status = Status::kInfeasible;
    return sol;
  }

  std::vector<double> y(structural, 0.0);
  for (int i = 0; i < m; ++i) {
    const int b = t.basis()[i];
    if (b < structural) y[b] = std::max(0.0, t.rhs(i));
  }
  sol.values.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const ColumnMap& cm = map[j];
    switch (cm.kind) {
      case ColumnMap::kFixed:
        sol.values[j] = cm.offset;
        break;
      case ColumnMap::kShifted:
        sol.values[j] = cm.offset + y[cm.col];
        break;
      case ColumnMap::kFlipped:
        sol.values[j] = cm.offset - y[cm.col];
        break;
      case ColumnMap::kSplit:
        sol.values[j] = y[cm.col] - y[cm.neg_col];
        break;
    }
  }
  if (lp.max_violation(sol.values) > kVerifyTol) {
    throw NumericalBreakdown("simplex solution violates the constraints by " +
                             std::to_string(lp.max_violation(sol.values)));
  }
  sol.status = Status::kOptimal;
  sol.objective = lp.evaluate(sol.values);
  return sol;
}

Solution solve_lp(const LinearProgram& lp) {
  std::vector<double> lower(lp.num_vars()), upper(lp.num_vars());
  for (int j = 0; j < lp.num_vars(); ++j) {
    lower[j] = lp.lower(j);
    upper[j] = lp.upper(j);
  }
  return solve_with_bounds(lp, lower, upper);
}

namespace {

std::string var_name(const LinearProgram& lp, int j) {
  const std::string& name = lp.name(j);
  if (name.empty()) return "x" + std::to_string(j);
  std::string out;
  for (char ch : name) {
    out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') ? ch : '_';
  }
  if (std::isdigit(static_cast<unsigned char>(out[0]))) out = "v" + out;
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_terms(std::ostream& out, const LinearProgram& lp,
                 const std::vector<Term>& terms) {
  if (terms.empty()) {
    out << " 0 " << var_name(lp, 0);
    return;
  }
  bool first = true;
  for (const Term& t : terms) {
    const double c = t.coef;
    if (first) {
      out << ' ' << num(c);
    } else {
      out << (c < 0 ? " - " : " + ") << num(std::abs(c));
    }
    out << ' ' << var_name(lp, t.var);
    first = false;
  }
}

}  // namespace

void write_lp(std::ostream& out, const LinearProgram& lp,
              std::span<const int> binaries) {
  out << "\\ atsg linear program: " << lp.num_vars() << " variables, "
      << lp.num_constraints() << " constraints\n";
  out << "Maximize\n obj:";
  std::vector<Term> obj;
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.objective(j) != 0.0) obj.push_back({j, lp.objective(j)});
  }
  if (lp.num_vars() > 0) write_terms(out, lp, obj);
  out << "\nSubject To\n";
  for (int i = 0; i < lp.num_constraints(); ++i) {
    const Constraint& c = lp.constraint(i);
    out << ' ' << (c.name.empty() ? "c" + std::to_string(i) : c.name) << ':';
    write_terms(out, lp, c.terms);
    switch (c.relation) {
      case Relation::kLessEqual:
        out << " <= ";
        break;
      case Relation::kGreaterEqual:
        out << " >= ";
        break;
      case Relation::kEqual:
        out << " = ";
        break;
    }
    out << num(c.rhs) << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    const double lo = lp.lower(j), hi = lp.upper(j);
    const std::string name = var_name(lp, j);
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
      out << ' ' << name << " free\n";
    } else {
      out << ' ' << (std::isfinite(lo) ? num(lo) : "-inf") << " <= " << name
          << " <= " << (std::isfinite(hi) ? num(hi) : "+inf") << '\n';
    }
  }
  if (!binaries.empty()) {
    out << "Binaries\n";
    for (int j : binaries) out << ' ' << var_name(lp, j) << '\n';
  }
  out << "End\n";
}

}  // namespace atsg::lp
