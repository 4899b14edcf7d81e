#pragma once

// Noncontextual bound on the game's success probability.
//
// Every ontic state supports exactly two of the three response functions, which
// splits the ontic space into regions Lambda_0 (responses 0, 2), Lambda_1
// (0, 1) and Lambda_2 (1, 2). The preparation masses aggregated per region
// (A_xa, B_xa, C_xa), together with the region masses p_i, q_i of the two
// mixtures the parity constraints force to coincide, are the LP variables.
// Within a region the response of the "maxed" outcome is alpha_b and the other
// gets 1 - alpha_b, since responses are bounded by alpha_b and sum to 1.

#include <array>
#include <span>
#include <vector>

#include "pmgame/lp.hpp"
#include "pmgame/quantum_opt.hpp"

namespace pmgame {

inline constexpr double kNoncontextualCeiling = 7.0 / 12.0;

/// Which outcome receives response alpha_b in each region. Region 0 chooses
/// from {0, 2}, region 1 from {0, 1}, region 2 from {1, 2}.
using ResponsePattern = std::array<int, 3>;

/// The assignment used in the literature derivation: region i maxes outcome i.
inline constexpr ResponsePattern kCyclicPattern{0, 1, 2};

/// All eight region-to-response assignments.
std::array<ResponsePattern, 8> all_response_patterns();

/// Variable layout: A_xa, B_xa, C_xa in order (x, a) = 00, 01, 10, 11, 20, 21,
/// then p0..p2, q0..q2. 24 variables, 23 equalities, box [0,1].
lp::LinearProgram build_nc_lp(const AlphaTriple& alpha, const ResponsePattern& pattern = kCyclicPattern);

/// Index of a region mass in the LP: region in {0,1,2} for A, B, C.
std::size_t nc_mass_index(int region, int x, int a);
std::size_t nc_p_index(int i);
std::size_t nc_q_index(int i);

/// The point with every mass 1/3 and p = q = (1/3, 1/3, 1/3).
std::vector<double> nc_uniform_point();

/// Maximum of the LP. Throws Error if the LP is infeasible or unbounded.
double nc_value(const AlphaTriple& alpha, const ResponsePattern& pattern = kCyclicPattern);

struct NcPoint {
  double alpha0 = 0.0;
  double value = 0.0;
};

std::vector<NcPoint> nc_curve(std::span<const double> grid);

struct NcGlobalMax {
  double value = 0.0;
  std::array<double, 3> argmax{};
  int lp_solves = 0;
};

/// Sweep over {alpha : sum = 2, alpha_b in [0,1]} at `step`, then refine around
/// the best cell down to `refine_step`.
NcGlobalMax nc_global_max(double step = 0.01, double refine_step = 1e-4);

struct AssignmentRobustness {
  std::array<double, 8> values{};
  double cyclic_value = 0.0;
  double max_value = 0.0;
  /// The cyclic assignment attains the maximum over all assignments (1e-9).
  bool cyclic_is_max = false;
};

AssignmentRobustness assignment_robustness(const AlphaTriple& alpha);

}  // namespace pmgame
