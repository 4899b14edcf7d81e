#pragma once

// Maximum quantum success probability of the game for a fixed outcome-weight
// triple alpha: the closed-form trine strategy and a seeded alternating
// maximizer over preparations and POVM.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "pmgame/game.hpp"

namespace pmgame {

/// (1/3)(1 + sqrt(3)/2), the optimum over all strategies.
inline const double kQuantumOptimum = (1.0 + std::sqrt(3.0) / 2.0) / 3.0;

/// Outcome weights of E_b = alpha_b (I + v_b . sigma) / 2; each in [0,1], summing to 2.
class AlphaTriple {
 public:
  /// Throws ValidationError outside the simplex slice (tolerance 1e-12).
  AlphaTriple(double a0, double a1, double a2);
  /// alpha0 with alpha1 = alpha2 = (2 - alpha0) / 2.
  static AlphaTriple symmetric(double alpha0);

  double operator[](std::size_t b) const { return values_[b]; }
  const std::array<double, 3>& values() const { return values_; }

 private:
  std::array<double, 3> values_;
};

/// Trine preparations at Bloch angles 2 pi x / 3, antipodal a=1 states, and the
/// POVM (2/3) (I + B_b) / 2 with B_b = (A_b - A_{b+1}) / sqrt(3), i.e.
/// B_b = cos(t_b) sigma_z - sin(t_b) sigma_x, t_b = (2 pi / 3)(1/4 - b).
GameStrategy analytic_optimal_strategy();

struct OptimizerOptions {
  int restarts = 50;
  std::uint64_t seed = 20240601;
  /// Stop a restart once one alternation round gains less than this.
  double tol = 1e-10;
  int max_rounds = 10000;
};

struct OptimizationResult {
  double value = 0.0;
  GameStrategy strategy;
  /// POVM Bloch vectors v_b (|v_b| <= 1); zero for a zero-weight outcome.
  std::array<Vec3, 3> povm_bloch{};
  int restarts_used = 0;
  /// The winning restart stopped on the gain criterion rather than the round cap.
  bool converged = false;
  /// Best minus worst restart value.
  double best_gap = 0.0;
};

OptimizationResult optimize_quantum(const AlphaTriple& alpha, const OptimizerOptions& options = {});

struct CurvePoint {
  double alpha0 = 0.0;
  double value = 0.0;
};

/// optimize_quantum at AlphaTriple::symmetric(alpha0) for each grid point.
/// Point i uses seed derive_seed(options.seed, i).
std::vector<CurvePoint> quantum_curve(std::span<const double> grid, const OptimizerOptions& options = {});

/// Success probability with the trine preparations held fixed and only the POVM
/// optimized (exactly) for the given alpha.
double fixed_trine_value(const AlphaTriple& alpha);

/// splitmix64 finalizer applied to base + golden-ratio multiple of index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

namespace detail {

/// Maximizes sum_b alpha_b g_b . v_b over |v_b| <= 1 with sum_b alpha_b v_b = 0.
/// The dual is the weighted Fermat-Weber problem min_l sum_b alpha_b |g_b - l|;
/// at its minimizer v_b = (g_b - l) / |g_b - l|, with the vertex case handled
/// explicitly. The returned vectors satisfy completeness exactly up to rounding.
std::array<Vec3, 3> best_povm_directions(const std::array<double, 3>& alpha, const std::array<Vec3, 3>& g);

/// Success probability for a=0 Bloch vectors `a0`, derived a=1 states and
/// POVM Bloch vectors `v`, without validation.
double game_value(const std::array<double, 3>& alpha, const std::array<Vec3, 3>& a0, const std::array<Vec3, 3>& v);

}  // namespace detail

}  // namespace pmgame
