#pragma once

// Dense two-phase simplex for small linear programs
//
//   maximize    c . x + offset
//   subject to  A x = b,  lower <= x <= upper.
//
// Bounds may be infinite. Finite lower bounds are shifted out, finite upper
// bounds become slack rows, free variables are split. Bland's rule is used
// in both phases, so degenerate problems terminate.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace pmgame::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct LinearProgram {
  std::vector<double> objective;
  double objective_offset = 0.0;
  std::vector<std::vector<double>> eq_matrix;
  std::vector<double> eq_rhs;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> names;
  std::vector<std::string> row_names;

  std::size_t num_variables() const { return objective.size(); }
  std::size_t num_equalities() const { return eq_rhs.size(); }

  /// Appends a variable with zero coefficients in existing rows; returns its index.
  std::size_t add_variable(std::string name, double lo, double hi, double cost = 0.0);
  /// Appends sum(coef * x[index]) = rhs. Repeated indices accumulate.
  void add_equality(const std::vector<std::pair<std::size_t, double>>& terms, double rhs, std::string name = {});

  /// Throws ValidationError on inconsistent dimensions or lower > upper.
  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  double value = 0.0;
  std::vector<double> x;
  /// Max-abs violation of A x = b at x.
  double residual = 0.0;
  /// Sum of artificial variables at the end of phase 1; positive certifies infeasibility.
  double phase1_objective = 0.0;
  int pivots = 0;
};

struct SolverOptions {
  double pivot_tol = 1e-11;
  double optimality_tol = 1e-11;
  double feasibility_tol = 1e-9;
  int max_pivots = 200000;
};

LpSolution solve(const LinearProgram& lp, const SolverOptions& options = {});

double equality_residual(const LinearProgram& lp, const std::vector<double>& x);
/// Largest violation of the box bounds at x (0 if inside).
double bound_violation(const LinearProgram& lp, const std::vector<double>& x);
double objective_value(const LinearProgram& lp, const std::vector<double>& x);

/// Human-readable dump: objective, one line per equality, then bounds.
void write_audit(std::ostream& out, const LinearProgram& lp);

}  // namespace pmgame::lp
