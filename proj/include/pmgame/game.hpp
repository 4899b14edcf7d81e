#pragma once

// The six-input, three-outcome prepare-and-measure game.
//
// Alice receives (x, a) with x in {0,1,2}, a in {0,1}; Bob must answer
// b = x + a (mod 3). Alice's preparations are constrained so that the
// message reveals neither a nor x + 2a (mod 3):
//
//   sum_x rho_{x0} = sum_x rho_{x1}
//   sum over {x + 2a = 0} rho_xa = sum over {x + 2a = 1} = sum over {x + 2a = 2}
//
// Preparations are stored in the order 00, 10, 20, 01, 11, 21 (index 3a + x).

#include <array>
#include <cstddef>

#include "pmgame/qubit.hpp"

namespace pmgame {

inline constexpr std::size_t kNumPreparations = 6;

constexpr std::size_t prep_index(int x, int a) { return static_cast<std::size_t>(3 * a + x); }
constexpr int mod3(int v) { return ((v % 3) + 3) % 3; }
/// Winning answer for input (x, a).
constexpr int target_outcome(int x, int a) { return mod3(x + a); }

using Preparations = std::array<DensityState, kNumPreparations>;

struct GameStrategy {
  Preparations preps{};
  Povm povm;
};

/// (1/6) sum_{x,a} Tr[rho_xa E_{x+a}]. Throws ValidationError unless the
/// POVM has three outcomes and passes validate_povm at `tol`.
double success_probability(const GameStrategy& strategy, double tol = kDefaultTol);

struct ParityReport {
  /// Max-abs difference of (1/3) sum_x rho_x0 and (1/3) sum_x rho_x1.
  double input_parity_residual = 0.0;
  /// Largest pairwise max-abs difference of the three x + 2a classes (each halved).
  double partition_residual = 0.0;
  bool pass = false;
};

ParityReport check_parity_concealment(const Preparations& preps, double tol = kDefaultTol);

/// The unique completion of three a=0 states to a constraint-satisfying set:
/// rho_{x1} = (2/3) sum_y rho_{y0} - rho_{(x+2)0}.
/// Throws InfeasiblePreparationError (index 3 + x) if some rho_{x1} is not PSD at `tol`.
Preparations complete_preparations(const std::array<DensityState, 3>& a0_states, double tol = kDefaultTol);

/// Bloch vectors of the completion, without the positivity check.
std::array<Vec3, 3> completed_a1_blochs(const std::array<Vec3, 3>& a0_blochs);

}  // namespace pmgame
