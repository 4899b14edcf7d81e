#pragma once

// One classical bit plus shared randomness under the parity-concealment
// constraints.
//
// Shared randomness needs no sampling. For every value tau of the shared
// variable the encoding constraints hold separately, and the success
// probability is the p(tau)-average of per-tau success probabilities, so no
// mixture beats the best single strategy. For a fixed decoding the success
// probability is linear in the encoding p, and for a fixed encoding it is
// linear in (s, r); hence the optimum is attained with deterministic decodings
// and the search reduces to nine LPs over p.

#include <array>
#include <cstdint>
#include <vector>

#include "pmgame/lp.hpp"

namespace pmgame {

struct ClassicalStrategy {
  /// Probability of sending "0" for input (x, a), index 3a + x: 00, 10, 20, 01, 11, 21.
  std::array<double, 6> p{};
  /// Answer distribution on receiving "0".
  std::array<double, 3> s{};
  /// Answer distribution on receiving "1".
  std::array<double, 3> r{};
};

struct ClassicalConstraintReport {
  /// |sum_x p_x0 - sum_x p_x1|.
  double input_parity_residual = 0.0;
  /// Largest pairwise difference of p00+p11, p01+p20, p10+p21.
  double partition_residual = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  bool distributions_valid = false;
  bool pass = false;
};

ClassicalConstraintReport check_classical_constraints(const ClassicalStrategy& strategy, double tol = 1e-9);

/// (1/6) sum_{x,a} [p_xa s_{x+a} + (1 - p_xa) r_{x+a}]. Throws ValidationError
/// with the residuals when the constraints fail at `tol`.
double classical_value(const ClassicalStrategy& strategy, double tol = 1e-9);

/// LP over p in [0,1]^6 under both constraint families, for the deterministic
/// decoding "0" -> s_answer, "1" -> r_answer.
lp::LinearProgram build_classical_lp(int s_answer, int r_answer);

struct ClassicalOptimum {
  double value = 0.0;
  ClassicalStrategy witness;
  /// LP value for decoding (s_answer, r_answer) at index 3 s_answer + r_answer.
  std::array<double, 9> per_decoding{};
};

/// Best over all nine deterministic decodings. With `equal_decodings_only`
/// only s = r decodings are considered.
ClassicalOptimum optimize_classical(bool equal_decodings_only = false);

/// Bit masks (bit k = p at index k) of deterministic encodings that satisfy
/// both constraint families.
std::vector<std::uint8_t> feasible_deterministic_encodings();

/// Relabel x -> x + shift (mod 3) on inputs and answers b -> b + shift.
ClassicalStrategy relabel(const ClassicalStrategy& strategy, int shift);

}  // namespace pmgame
