#include "pmgame/lp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "pmgame/errors.hpp"

namespace pmgame::lp {

std::size_t LinearProgram::add_variable(std::string name, double lo, double hi, double cost) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  names.push_back(std::move(name));
  for (auto& row : eq_matrix) row.push_back(0.0);
  return objective.size() - 1;
}

void LinearProgram::add_equality(const std::vector<std::pair<std::size_t, double>>& terms, double rhs,
                                 std::string name) {
  std::vector<double> row(objective.size(), 0.0);
  for (const auto& [index, coef] : terms) {
    if (index >= row.size()) throw ValidationError("equality references an unknown variable");
    row[index] += coef;
  }
  eq_matrix.push_back(std::move(row));
  eq_rhs.push_back(rhs);
  row_names.push_back(name.empty() ? "r" + std::to_string(eq_rhs.size() - 1) : std::move(name));
}

void LinearProgram::validate() const {
  const std::size_t n = objective.size();
  if (lower.size() != n || upper.size() != n) throw ValidationError("bound vectors do not match objective length");
  if (!names.empty() && names.size() != n) throw ValidationError("names do not match objective length");
  if (eq_matrix.size() != eq_rhs.size()) throw ValidationError("equality matrix and rhs differ in row count");
  for (const auto& row : eq_matrix) {
    if (row.size() != n) throw ValidationError("equality row length does not match variable count");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] || lower[j] == kInf ||
        upper[j] == -kInf) {
      throw ValidationError("invalid bounds on variable " + std::to_string(j));
    }
  }
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal:
      return "optimal";
    case LpStatus::infeasible:
      return "infeasible";
    case LpStatus::unbounded:
      return "unbounded";
  }
  return "unknown";
}

double equality_residual(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < lp.eq_matrix.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += lp.eq_matrix[i][j] * x[j];
    worst = std::max(worst, std::abs(s - lp.eq_rhs[i]));
  }
  return worst;
}

double bound_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    worst = std::max({worst, lp.lower[j] - x[j], x[j] - lp.upper[j]});
  }
  return worst;
}

double objective_value(const LinearProgram& lp, const std::vector<double>& x) {
  double v = lp.objective_offset;
  for (std::size_t j = 0; j < x.size(); ++j) v += lp.objective[j] * x[j];
  return v;
}

namespace {

// How an original variable is expressed through nonnegative standard columns.
struct VariableMap {
  enum class Kind { shifted, reflected, split } kind = Kind::shifted;
  double anchor = 0.0;
  std::size_t col = 0;
  std::size_t neg_col = 0;
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0) {}

  double& at(std::size_t i, std::size_t j) { return data_[i * (cols_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return data_[i * (cols_ + 1) + cols_]; }
  double rhs(std::size_t i) const { return data_[i * (cols_ + 1) + cols_]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void scale_row(std::size_t i, double s) {
    double* row = &data_[i * (cols_ + 1)];
    for (std::size_t j = 0; j <= cols_; ++j) row[j] *= s;
  }

  void erase_row(std::size_t i) {
    auto first = data_.begin() + static_cast<std::ptrdiff_t>(i * (cols_ + 1));
    data_.erase(first, first + static_cast<std::ptrdiff_t>(cols_ + 1));
    --rows_;
  }

  // Gauss-Jordan step on (r, c); `reduced` is the cost row, updated alongside.
  void pivot(std::size_t r, std::size_t c, std::vector<double>& reduced, double& objective) {
    scale_row(r, 1.0 / at(r, c));
    const double* prow = &data_[r * (cols_ + 1)];
    nonzero_.clear();
    for (std::size_t j = 0; j <= cols_; ++j) {
      if (prow[j] != 0.0) nonzero_.push_back(j);
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      double* row = &data_[i * (cols_ + 1)];
      const double f = row[c];
      if (f == 0.0) continue;
      for (std::size_t j : nonzero_) row[j] -= f * prow[j];
      row[c] = 0.0;
    }
    const double f = reduced[c];
    if (f != 0.0) {
      for (std::size_t j : nonzero_) {
        if (j < cols_) reduced[j] -= f * prow[j];
      }
      objective += f * prow[cols_];
      reduced[c] = 0.0;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<std::size_t> nonzero_;
};

enum class PhaseResult { optimal, unbounded, pivot_limit };

// Maximizes the objective encoded by `reduced` (d_j = c_j - c_B B^-1 A_j).
// Dantzig pricing, falling back to Bland's rule while pivots stay degenerate
// so the method cannot cycle.
PhaseResult run_simplex(Tableau& t, std::vector<std::size_t>& basis, std::vector<double>& reduced, double& objective,
                        const std::vector<bool>& allowed, const SolverOptions& opt, int& pivots) {
  constexpr int kDegenerateLimit = 30;
  int degenerate_run = 0;
  while (true) {
    if (pivots >= opt.max_pivots) return PhaseResult::pivot_limit;
    const bool bland = degenerate_run >= kDegenerateLimit;
    std::size_t enter = t.cols();
    double best_reduced = opt.optimality_tol;
    for (std::size_t j = 0; j < t.cols(); ++j) {
      if (!allowed[j] || reduced[j] <= best_reduced) continue;
      enter = j;
      if (bland) break;
      best_reduced = reduced[j];
    }
    if (enter == t.cols()) return PhaseResult::optimal;

    std::size_t leave = t.rows();
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      const double a = t.at(i, enter);
      if (a <= opt.pivot_tol) continue;
      const double ratio = std::max(t.rhs(i), 0.0) / a;
      const double slack = 1e-12 * std::max(1.0, best_ratio);
      if (leave == t.rows() || ratio < best_ratio - slack) {
        leave = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + slack) {
        const bool take = bland ? basis[i] < basis[leave] : a > t.at(leave, enter);
        if (take) {
          leave = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
    }
    if (leave == t.rows()) return PhaseResult::unbounded;
    degenerate_run = best_ratio * reduced[enter] > 1e-13 ? 0 : degenerate_run + 1;
    t.pivot(leave, enter, reduced, objective);
    basis[leave] = enter;
    ++pivots;
  }
}

}  // namespace

LpSolution solve(const LinearProgram& lp, const SolverOptions& opt) {
  lp.validate();
  const std::size_t n = lp.num_variables();
  const std::size_t m = lp.num_equalities();

  // Column layout of the standard form.
  std::vector<VariableMap> vars(n);
  std::size_t ncols = 0;
  std::vector<std::pair<std::size_t, double>> ub_rows;  // (column, range)
  for (std::size_t j = 0; j < n; ++j) {
    auto& v = vars[j];
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    if (std::isfinite(lo)) {
      v.kind = VariableMap::Kind::shifted;
      v.anchor = lo;
      v.col = ncols++;
      if (std::isfinite(hi)) ub_rows.emplace_back(v.col, hi - lo);
    } else if (std::isfinite(hi)) {
      v.kind = VariableMap::Kind::reflected;
      v.anchor = hi;
      v.col = ncols++;
    } else {
      v.kind = VariableMap::Kind::split;
      v.col = ncols++;
      v.neg_col = ncols++;
    }
  }
  const std::size_t first_ub_slack = ncols;
  ncols += ub_rows.size();
  const std::size_t nrows = m + ub_rows.size();

  std::vector<std::vector<double>> a(nrows, std::vector<double>(ncols, 0.0));
  std::vector<double> b(nrows, 0.0);
  std::vector<double> cost(ncols, 0.0);
  double cost_offset = lp.objective_offset;

  for (std::size_t i = 0; i < m; ++i) b[i] = lp.eq_rhs[i];
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = vars[j];
    const double cj = lp.objective[j];
    switch (v.kind) {
      case VariableMap::Kind::shifted:
        cost[v.col] = cj;
        cost_offset += cj * v.anchor;
        for (std::size_t i = 0; i < m; ++i) {
          a[i][v.col] = lp.eq_matrix[i][j];
          b[i] -= lp.eq_matrix[i][j] * v.anchor;
        }
        break;
      case VariableMap::Kind::reflected:
        cost[v.col] = -cj;
        cost_offset += cj * v.anchor;
        for (std::size_t i = 0; i < m; ++i) {
          a[i][v.col] = -lp.eq_matrix[i][j];
          b[i] -= lp.eq_matrix[i][j] * v.anchor;
        }
        break;
      case VariableMap::Kind::split:
        cost[v.col] = cj;
        cost[v.neg_col] = -cj;
        for (std::size_t i = 0; i < m; ++i) {
          a[i][v.col] = lp.eq_matrix[i][j];
          a[i][v.neg_col] = -lp.eq_matrix[i][j];
        }
        break;
    }
  }
  for (std::size_t k = 0; k < ub_rows.size(); ++k) {
    a[m + k][ub_rows[k].first] = 1.0;
    a[m + k][first_ub_slack + k] = 1.0;
    b[m + k] = ub_rows[k].second;
  }
  for (std::size_t i = 0; i < nrows; ++i) {
    if (b[i] < 0.0) {
      b[i] = -b[i];
      for (double& x : a[i]) x = -x;
    }
  }

  // Crash basis: a column that is nonzero (and positive) only in row i can start basic there.
  std::vector<int> col_count(ncols, 0);
  std::vector<std::size_t> col_row(ncols, 0);
  for (std::size_t i = 0; i < nrows; ++i) {
    for (std::size_t j = 0; j < ncols; ++j) {
      if (a[i][j] != 0.0) {
        ++col_count[j];
        col_row[j] = i;
      }
    }
  }
  std::vector<std::size_t> crash(nrows, ncols);
  std::vector<bool> used(ncols, false);
  for (std::size_t j = 0; j < ncols; ++j) {
    if (col_count[j] == 1 && a[col_row[j]][j] > 0.0 && crash[col_row[j]] == ncols) {
      crash[col_row[j]] = j;
      used[j] = true;
    }
  }
  std::size_t nart = 0;
  for (std::size_t i = 0; i < nrows; ++i) {
    if (crash[i] == ncols) ++nart;
  }

  const std::size_t total_cols = ncols + nart;
  Tableau t(nrows, total_cols);
  std::vector<std::size_t> basis(nrows);
  std::size_t next_art = ncols;
  for (std::size_t i = 0; i < nrows; ++i) {
    for (std::size_t j = 0; j < ncols; ++j) t.at(i, j) = a[i][j];
    t.rhs(i) = b[i];
    if (crash[i] != ncols) {
      const double s = 1.0 / a[i][crash[i]];
      t.scale_row(i, s);
      t.at(i, crash[i]) = 1.0;
      basis[i] = crash[i];
    } else {
      t.at(i, next_art) = 1.0;
      basis[i] = next_art++;
    }
  }

  LpSolution sol;
  int pivots = 0;
  std::vector<bool> allowed(total_cols, true);

  // Phase 1: maximize -sum(artificials).
  if (nart > 0) {
    std::vector<double> reduced(total_cols, 0.0);
    double objective = 0.0;
    for (std::size_t i = 0; i < nrows; ++i) {
      if (basis[i] >= ncols) {
        for (std::size_t j = 0; j < ncols; ++j) reduced[j] += t.at(i, j);
        objective -= t.rhs(i);
      }
    }
    const PhaseResult r = run_simplex(t, basis, reduced, objective, allowed, opt, pivots);
    sol.phase1_objective = -objective;
    if (r == PhaseResult::pivot_limit) throw Error("simplex pivot limit reached in phase 1");
    if (sol.phase1_objective > opt.feasibility_tol) {
      sol.status = LpStatus::infeasible;
      sol.pivots = pivots;
      return sol;
    }
    // Drive remaining zero-level artificials out of the basis; drop redundant rows.
    std::vector<double> scratch(total_cols, 0.0);
    double scratch_obj = 0.0;
    for (std::size_t i = 0; i < t.rows();) {
      if (basis[i] < ncols) {
        ++i;
        continue;
      }
      std::size_t best = ncols;
      double best_abs = 1e-9;
      for (std::size_t j = 0; j < ncols; ++j) {
        if (std::abs(t.at(i, j)) > best_abs) {
          best_abs = std::abs(t.at(i, j));
          best = j;
        }
      }
      if (best == ncols) {
        t.erase_row(i);
        basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      t.pivot(i, best, scratch, scratch_obj);
      basis[i] = best;
      ++pivots;
      ++i;
    }
    for (std::size_t j = ncols; j < total_cols; ++j) allowed[j] = false;
  }

  // Phase 2.
  std::vector<double> reduced(total_cols, 0.0);
  double objective = 0.0;
  for (std::size_t j = 0; j < ncols; ++j) reduced[j] = cost[j];
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const double cb = basis[i] < ncols ? cost[basis[i]] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j < ncols; ++j) reduced[j] -= cb * t.at(i, j);
    objective += cb * t.rhs(i);
  }
  for (std::size_t i = 0; i < t.rows(); ++i) reduced[basis[i]] = 0.0;
  const PhaseResult r = run_simplex(t, basis, reduced, objective, allowed, opt, pivots);
  sol.pivots = pivots;
  if (r == PhaseResult::pivot_limit) throw Error("simplex pivot limit reached in phase 2");
  if (r == PhaseResult::unbounded) {
    sol.status = LpStatus::unbounded;
    return sol;
  }

  std::vector<double> y(total_cols, 0.0);
  for (std::size_t i = 0; i < t.rows(); ++i) y[basis[i]] = std::max(t.rhs(i), 0.0);
  sol.x.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = vars[j];
    switch (v.kind) {
      case VariableMap::Kind::shifted:
        sol.x[j] = v.anchor + y[v.col];
        break;
      case VariableMap::Kind::reflected:
        sol.x[j] = v.anchor - y[v.col];
        break;
      case VariableMap::Kind::split:
        sol.x[j] = y[v.col] - y[v.neg_col];
        break;
    }
    sol.x[j] = std::clamp(sol.x[j], lp.lower[j], lp.upper[j]);
  }
  sol.status = LpStatus::optimal;
  sol.value = objective_value(lp, sol.x);
  sol.residual = equality_residual(lp, sol.x);
  return sol;
}

void write_audit(std::ostream& out, const LinearProgram& lp) {
  auto label = [&](std::size_t j) { return j < lp.names.size() ? lp.names[j] : "x" + std::to_string(j); };
  auto term = [&](std::ostringstream& s, bool& first, double coef, std::size_t j) {
    if (coef == 0.0) return;
    s << (first ? (coef < 0 ? "-" : "") : (coef < 0 ? " - " : " + "));
    if (std::abs(coef) != 1.0) s << std::setprecision(12) << std::abs(coef) << "*";
    s << label(j);
    first = false;
  };
  std::ostringstream obj;
  bool first = true;
  for (std::size_t j = 0; j < lp.num_variables(); ++j) term(obj, first, lp.objective[j], j);
  if (lp.objective_offset != 0.0) obj << " + " << std::setprecision(12) << lp.objective_offset;
  out << "maximize " << (first ? "0" : obj.str()) << '\n';
  for (std::size_t i = 0; i < lp.num_equalities(); ++i) {
    std::ostringstream row;
    bool f = true;
    for (std::size_t j = 0; j < lp.num_variables(); ++j) term(row, f, lp.eq_matrix[i][j], j);
    const std::string name = i < lp.row_names.size() ? lp.row_names[i] : "r" + std::to_string(i);
    out << name << ": " << (f ? "0" : row.str()) << " = " << std::setprecision(12) << lp.eq_rhs[i] << '\n';
  }
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    out << "bound " << label(j) << " in [" << lp.lower[j] << ", " << lp.upper[j] << "]\n";
  }
}

}  // namespace pmgame::lp
