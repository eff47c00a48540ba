// Copyright 2026 The mulmin Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MULMIN_LP_H_
#define MULMIN_LP_H_

// Dense linear programs, the primal/dual minimax pair built from a payoff
// tensor, and a two-phase tableau simplex solver.
//
// Primal (variables x_1..x_n >= 0, delta free):
//   min delta  s.t.  sum_i a(i,I) x_i - delta <= 0  for every profile I,
//                    sum_i x_i = 1.
// Dual (variables q(I) >= 0 in canonical order, lambda free):
//   max lambda s.t.  sum_I a(i,I) q(I) - lambda >= 0  for every player i,
//                    sum_I q(I) = 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mulmin/tensor.h"

namespace mulmin {

enum class Sense { kMinimize, kMaximize };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class VariableBound { kNonNegative, kFree };

class LinearProgram {
 public:
  LinearProgram(Sense sense, int num_variables)
      : sense_(sense),
        objective_(num_variables, 0.0),
        bounds_(num_variables, VariableBound::kNonNegative) {
    for (int j = 0; j < num_variables; ++j) {
      variable_names_.push_back("v" + std::to_string(j + 1));
    }
  }

  Sense sense() const { return sense_; }
  int num_variables() const { return static_cast<int>(objective_.size()); }
  int num_rows() const { return static_cast<int>(rhs_.size()); }

  double objective(int j) const { return objective_[j]; }
  const std::vector<double>& objective() const { return objective_; }
  void set_objective(int j, double c) { objective_.at(j) = c; }

  VariableBound bound(int j) const { return bounds_[j]; }
  void set_bound(int j, VariableBound b) { bounds_.at(j) = b; }

  const std::string& variable_name(int j) const { return variable_names_[j]; }
  void set_variable_name(int j, std::string name) {
    variable_names_.at(j) = std::move(name);
  }

  // Returns the new row's index.
  int AddRow(std::vector<double> coefficients, Relation relation, double rhs,
             std::string name = "") {
    if (static_cast<int>(coefficients.size()) != num_variables()) {
      throw std::invalid_argument("LinearProgram::AddRow: wrong row length");
    }
    for (double c : coefficients) {
      if (!std::isfinite(c)) {
        throw std::invalid_argument("LinearProgram::AddRow: non-finite entry");
      }
    }
    if (!std::isfinite(rhs)) {
      throw std::invalid_argument("LinearProgram::AddRow: non-finite rhs");
    }
    matrix_.insert(matrix_.end(), coefficients.begin(), coefficients.end());
    relations_.push_back(relation);
    rhs_.push_back(rhs);
    row_names_.push_back(name.empty() ? "c" + std::to_string(num_rows())
                                      : std::move(name));
    return num_rows() - 1;
  }

  double coefficient(int row, int col) const {
    return matrix_[static_cast<std::size_t>(row) * num_variables() + col];
  }
  Relation relation(int row) const { return relations_[row]; }
  double rhs(int row) const { return rhs_[row]; }
  const std::string& row_name(int row) const { return row_names_[row]; }

  double RowActivity(int row, const std::vector<double>& x) const {
    double s = 0.0;
    for (int j = 0; j < num_variables(); ++j) s += coefficient(row, j) * x[j];
    return s;
  }

 private:
  Sense sense_;
  std::vector<double> objective_;
  std::vector<VariableBound> bounds_;
  std::vector<std::string> variable_names_;
  std::vector<double> matrix_;  // row-major, num_rows x num_variables
  std::vector<Relation> relations_;
  std::vector<double> rhs_;
  std::vector<std::string> row_names_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

inline const char* LpStatusName(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> primal;
  // d(objective)/d(rhs) per row, in the LP's own sense.
  std::vector<double> duals;
  double objective = 0.0;
  int iterations = 0;
  int bland_pivots = 0;
  bool is_vertex = false;
  double primal_residual = 0.0;
  double complementarity_residual = 0.0;
  std::string message;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

struct SimplexOptions {
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  // Dantzig pricing switches to Bland's rule after this many consecutive
  // degenerate pivots, and back after the next non-degenerate one.
  int degeneracy_streak = 50;
  // 0 selects the default cap of 50 * (rows + columns) + 1000 pivots per
  // phase.
  int max_iterations = 0;
};

// Interface so other LP back ends can be slotted under the minimax pipeline.
class LpSolver {
 public:
  virtual ~LpSolver() = default;
  virtual LpSolution Solve(const LinearProgram& lp) const = 0;
};

namespace internal {

// Tableau over the standard-form system. Column layout: structural columns
// (free variables split into +/- parts), then one slack/surplus per
// inequality row, then one artificial per >= or = row. Every row owns one
// identity column ("unit column"): its slack for <= rows, its artificial
// otherwise. Rows are negated as needed so the rhs is nonnegative.
class Tableau {
 public:
  Tableau(const LinearProgram& lp, const SimplexOptions& options)
      : lp_(lp), opt_(options), m_(lp.num_rows()) {
    for (int j = 0; j < lp.num_variables(); ++j) {
      plus_col_.push_back(num_cols_++);
      minus_col_.push_back(lp.bound(j) == VariableBound::kFree ? num_cols_++
                                                               : -1);
    }
    flipped_.assign(m_, false);
    std::vector<Relation> rel(m_);
    for (int r = 0; r < m_; ++r) {
      rel[r] = lp.relation(r);
      if (lp.rhs(r) < 0.0) {
        flipped_[r] = true;
        if (rel[r] == Relation::kLessEqual) {
          rel[r] = Relation::kGreaterEqual;
        } else if (rel[r] == Relation::kGreaterEqual) {
          rel[r] = Relation::kLessEqual;
        }
      }
    }
    slack_col_.assign(m_, -1);
    for (int r = 0; r < m_; ++r) {
      if (rel[r] != Relation::kEqual) slack_col_[r] = num_cols_++;
    }
    first_artificial_ = num_cols_;
    unit_col_.assign(m_, -1);
    for (int r = 0; r < m_; ++r) {
      if (rel[r] == Relation::kLessEqual) {
        unit_col_[r] = slack_col_[r];
      } else {
        unit_col_[r] = num_cols_++;
      }
    }
    width_ = num_cols_ + 1;
    data_.assign(static_cast<std::size_t>(m_ + 1) * width_, 0.0);
    basis_.assign(m_, -1);
    for (int r = 0; r < m_; ++r) {
      const double sign = flipped_[r] ? -1.0 : 1.0;
      for (int j = 0; j < lp.num_variables(); ++j) {
        const double a = sign * lp.coefficient(r, j);
        at(r, plus_col_[j]) = a;
        if (minus_col_[j] >= 0) at(r, minus_col_[j]) = -a;
      }
      if (slack_col_[r] >= 0) {
        at(r, slack_col_[r]) = rel[r] == Relation::kLessEqual ? 1.0 : -1.0;
      }
      at(r, unit_col_[r]) = 1.0;
      at(r, num_cols_) = sign * lp.rhs(r);
      basis_[r] = unit_col_[r];
    }
    max_iterations_ = opt_.max_iterations > 0
                          ? opt_.max_iterations
                          : 50 * (m_ + num_cols_) + 1000;
  }

  LpSolution Run() {
    LpSolution sol;
    // Phase 1: minimize the sum of artificials.
    std::vector<double> cost(num_cols_, 0.0);
    bool has_artificial = false;
    for (int j = first_artificial_; j < num_cols_; ++j) {
      cost[j] = 1.0;
      has_artificial = true;
    }
    if (has_artificial) {
      LoadObjective(cost);
      LpStatus st = Optimize(/*allow_artificial=*/true, sol);
      if (st == LpStatus::kIterationLimit) {
        return Fail(sol, st, "iteration cap reached in phase 1");
      }
      double infeasibility = -at(m_, num_cols_);
      if (infeasibility > opt_.feasibility_tolerance * RhsScale()) {
        return Fail(sol, LpStatus::kInfeasible,
                    "phase 1 optimum " + FormatReal(infeasibility) + " > 0");
      }
      DriveOutArtificials();
    }
    // Phase 2 on the original objective, expressed as a minimization.
    const double sense = lp_.sense() == Sense::kMaximize ? -1.0 : 1.0;
    std::fill(cost.begin(), cost.end(), 0.0);
    for (int j = 0; j < lp_.num_variables(); ++j) {
      cost[plus_col_[j]] = sense * lp_.objective(j);
      if (minus_col_[j] >= 0) cost[minus_col_[j]] = -sense * lp_.objective(j);
    }
    LoadObjective(cost);
    LpStatus st = Optimize(/*allow_artificial=*/false, sol);
    if (st != LpStatus::kOptimal) {
      return Fail(sol, st,
                  st == LpStatus::kUnbounded ? "objective unbounded"
                                             : "iteration cap reached");
    }
    Extract(sense, sol);
    return sol;
  }

 private:
  double& at(int r, int c) {
    return data_[static_cast<std::size_t>(r) * width_ + c];
  }
  double at(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * width_ + c];
  }

  double RhsScale() const {
    double s = 1.0;
    for (int r = 0; r < m_; ++r) s = std::max(s, std::abs(at(r, num_cols_)));
    return s;
  }

  // Objective row holds reduced costs c_j - c_B B^-1 A_j and, in the rhs
  // slot, -c_B B^-1 b.
  void LoadObjective(const std::vector<double>& cost) {
    for (int j = 0; j < num_cols_; ++j) at(m_, j) = cost[j];
    at(m_, num_cols_) = 0.0;
    for (int r = 0; r < m_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (int j = 0; j <= num_cols_; ++j) at(m_, j) -= cb * at(r, j);
    }
  }

  void Pivot(int row, int col) {
    const double inv = 1.0 / at(row, col);
    for (int j = 0; j <= num_cols_; ++j) at(row, j) *= inv;
    at(row, col) = 1.0;
    for (int r = 0; r <= m_; ++r) {
      if (r == row) continue;
      const double f = at(r, col);
      if (f == 0.0) continue;
      for (int j = 0; j <= num_cols_; ++j) at(r, j) -= f * at(row, j);
      at(r, col) = 0.0;
    }
    basis_[row] = col;
  }

  LpStatus Optimize(bool allow_artificial, LpSolution& sol) {
    const int limit = allow_artificial ? num_cols_ : first_artificial_;
    int streak = 0;
    bool bland = false;
    for (int iter = 0; iter < max_iterations_; ++iter) {
      int enter = -1;
      double best = -opt_.optimality_tolerance;
      for (int j = 0; j < limit; ++j) {
        const double d = at(m_, j);
        if (d < best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;

      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        const double a = at(r, enter);
        if (a <= opt_.pivot_tolerance) continue;
        const double q = std::max(at(r, num_cols_), 0.0) / a;
        if (q < ratio - 1e-12 ||
            (q <= ratio + 1e-12 && leave >= 0 && basis_[r] < basis_[leave])) {
          ratio = std::min(ratio, q);
          leave = r;
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;

      if (ratio <= opt_.feasibility_tolerance) {
        if (++streak >= opt_.degeneracy_streak) bland = true;
      } else {
        streak = 0;
        bland = false;
      }
      if (bland) ++sol.bland_pivots;
      Pivot(leave, enter);
      ++sol.iterations;
    }
    return LpStatus::kIterationLimit;
  }

  // After phase 1, replaces zero-level artificials in the basis by structural
  // or slack columns where possible. Rows left with an artificial are
  // redundant.
  void DriveOutArtificials() {
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < first_artificial_) continue;
      int col = -1;
      double best = opt_.pivot_tolerance;
      for (int j = 0; j < first_artificial_; ++j) {
        if (std::abs(at(r, j)) > best) {
          best = std::abs(at(r, j));
          col = j;
        }
      }
      if (col >= 0) Pivot(r, col);
    }
  }

  void Extract(double sense, LpSolution& sol) {
    std::vector<double> column_value(num_cols_, 0.0);
    for (int r = 0; r < m_; ++r) {
      column_value[basis_[r]] = std::max(at(r, num_cols_), 0.0);
    }
    sol.primal.assign(lp_.num_variables(), 0.0);
    for (int j = 0; j < lp_.num_variables(); ++j) {
      sol.primal[j] = column_value[plus_col_[j]];
      if (minus_col_[j] >= 0) sol.primal[j] -= column_value[minus_col_[j]];
    }
    // The unit column of row r started as e_r with zero phase-2 cost, so its
    // reduced cost is -y_r for the (possibly negated) row.
    sol.duals.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      double y = -at(m_, unit_col_[r]);
      if (flipped_[r]) y = -y;
      sol.duals[r] = sense * y;
    }
    sol.objective = 0.0;
    for (int j = 0; j < lp_.num_variables(); ++j) {
      sol.objective += lp_.objective(j) * sol.primal[j];
    }
    sol.status = LpStatus::kOptimal;
    sol.is_vertex = true;
    ComputeResiduals(lp_, sol);
  }

  LpSolution Fail(LpSolution& sol, LpStatus status, std::string message) {
    sol.status = status;
    sol.message = std::move(message);
    sol.primal.clear();
    sol.duals.clear();
    return sol;
  }

 public:
  // Max primal violation over rows and bounds, and max complementary
  // slackness product over rows (y_r * slack_r) and columns (x_j * d_j).
  static void ComputeResiduals(const LinearProgram& lp, LpSolution& sol) {
    double feas = 0.0;
    double comp = 0.0;
    for (int r = 0; r < lp.num_rows(); ++r) {
      const double slack = lp.rhs(r) - lp.RowActivity(r, sol.primal);
      switch (lp.relation(r)) {
        case Relation::kLessEqual:
          feas = std::max(feas, -slack);
          break;
        case Relation::kGreaterEqual:
          feas = std::max(feas, slack);
          break;
        case Relation::kEqual:
          feas = std::max(feas, std::abs(slack));
          break;
      }
      comp = std::max(comp, std::abs(sol.duals[r] * slack));
    }
    for (int j = 0; j < lp.num_variables(); ++j) {
      if (lp.bound(j) == VariableBound::kNonNegative) {
        feas = std::max(feas, -sol.primal[j]);
      }
      double reduced = lp.objective(j);
      for (int r = 0; r < lp.num_rows(); ++r) {
        reduced -= sol.duals[r] * lp.coefficient(r, j);
      }
      comp = std::max(comp, std::abs(reduced * sol.primal[j]));
    }
    sol.primal_residual = feas;
    sol.complementarity_residual = comp;
  }

 private:
  const LinearProgram& lp_;
  SimplexOptions opt_;
  int m_;
  int num_cols_ = 0;
  int first_artificial_ = 0;
  int width_ = 0;
  int max_iterations_ = 0;
  std::vector<int> plus_col_;
  std::vector<int> minus_col_;
  std::vector<int> slack_col_;
  std::vector<int> unit_col_;
  std::vector<bool> flipped_;
  std::vector<int> basis_;
  std::vector<double> data_;
};

}  // namespace internal

// Dense two-phase tableau simplex. Deterministic for identical input:
// Dantzig pricing with lowest-index tie breaks, ratio-test ties broken by
// lowest basic column, and Bland's rule during long degenerate stretches.
class DenseSimplexSolver : public LpSolver {
 public:
  explicit DenseSimplexSolver(SimplexOptions options = {}) : opt_(options) {}

  LpSolution Solve(const LinearProgram& lp) const override {
    internal::Tableau tableau(lp, opt_);
    return tableau.Run();
  }

  const SimplexOptions& options() const { return opt_; }

 private:
  SimplexOptions opt_;
};

inline LpSolution SimplexSolve(const LinearProgram& lp,
                               const SimplexOptions& options = {}) {
  return DenseSimplexSolver(options).Solve(lp);
}

// Columns x_1..x_n then delta; rows are the n̂ profile rows in canonical
// order followed by the normalization row.
inline LinearProgram BuildPrimal(const PayoffTensor& t) {
  const int n = t.num_players();
  LinearProgram lp(Sense::kMinimize, n + 1);
  for (int i = 0; i < n; ++i) lp.set_variable_name(i, "x" + std::to_string(i + 1));
  lp.set_variable_name(n, "delta");
  lp.set_bound(n, VariableBound::kFree);
  lp.set_objective(n, 1.0);
  for (ProfileIterator it(t.shape()); !it.done(); it.Next()) {
    std::vector<double> row(n + 1);
    for (int i = 0; i < n; ++i) row[i] = t.at(i, it.flat_index());
    row[n] = -1.0;
    std::string name = "p";
    for (int k : it.profile().indices) name += "_" + std::to_string(k + 1);
    lp.AddRow(std::move(row), Relation::kLessEqual, 0.0, std::move(name));
  }
  std::vector<double> norm(n + 1, 1.0);
  norm[n] = 0.0;
  lp.AddRow(std::move(norm), Relation::kEqual, 1.0, "simplex");
  return lp;
}

// Columns q(I) in canonical order then lambda; rows are the n player rows
// followed by the normalization row.
inline LinearProgram BuildDual(const PayoffTensor& t) {
  const int n = t.num_players();
  const auto total = static_cast<int>(t.shape().total_profiles());
  LinearProgram lp(Sense::kMaximize, total + 1);
  for (ProfileIterator it(t.shape()); !it.done(); it.Next()) {
    std::string name = "q";
    for (int k : it.profile().indices) name += "_" + std::to_string(k + 1);
    lp.set_variable_name(static_cast<int>(it.flat_index()), std::move(name));
  }
  lp.set_variable_name(total, "lambda");
  lp.set_bound(total, VariableBound::kFree);
  lp.set_objective(total, 1.0);
  for (int i = 0; i < n; ++i) {
    auto a = t.player_payoffs(i);
    std::vector<double> row(a.begin(), a.end());
    row.push_back(-1.0);
    lp.AddRow(std::move(row), Relation::kGreaterEqual, 0.0,
              "player" + std::to_string(i + 1));
  }
  std::vector<double> norm(total + 1, 1.0);
  norm[total] = 0.0;
  lp.AddRow(std::move(norm), Relation::kEqual, 1.0, "simplex");
  return lp;
}

// CPLEX LP text format, readable by glpsol/HiGHS/CBC for cross-checking.
inline std::string WriteLpFormat(const LinearProgram& lp) {
  std::ostringstream out;
  auto term = [&](double c, const std::string& name, bool first) {
    if (c == 0.0) return first;
    out << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "))
        << FormatReal(std::abs(c)) << ' ' << name;
    return false;
  };
  out << (lp.sense() == Sense::kMinimize ? "Minimize" : "Maximize")
      << "\n obj: ";
  bool first = true;
  for (int j = 0; j < lp.num_variables(); ++j) {
    first = term(lp.objective(j), lp.variable_name(j), first);
  }
  if (first) out << "0 " << lp.variable_name(0);
  out << "\nSubject To\n";
  for (int r = 0; r < lp.num_rows(); ++r) {
    out << ' ' << lp.row_name(r) << ": ";
    first = true;
    for (int j = 0; j < lp.num_variables(); ++j) {
      first = term(lp.coefficient(r, j), lp.variable_name(j), first);
    }
    if (first) out << "0 " << lp.variable_name(0);
    switch (lp.relation(r)) {
      case Relation::kLessEqual:
        out << " <= ";
        break;
      case Relation::kEqual:
        out << " = ";
        break;
      case Relation::kGreaterEqual:
        out << " >= ";
        break;
    }
    out << FormatReal(lp.rhs(r)) << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.num_variables(); ++j) {
    if (lp.bound(j) == VariableBound::kFree) {
      out << ' ' << lp.variable_name(j) << " free\n";
    }
  }
  out << "End\n";
  return out.str();
}

}  // namespace mulmin

#endif  // MULMIN_LP_H_
