#pragma once

// Simulating odd-n equatorial POVMs by uniform mixtures of three-outcome POVMs,
// and a rank-one extremality test.

#include <array>
#include <cstdint>
#include <vector>

#include "pmgame/qubit.hpp"

namespace pmgame {

/// Bloch angle of pi_k for the n-outcome equatorial POVM.
double equatorial_angle(int n, int k);

/// Unit Bloch vector of pi_k, at angle 2 pi k / n in the xz-plane.
Vec3 equatorial_direction(int n, int k);

/// {(2/n) pi_k}. Throws DomainError unless n is odd and n >= 3.
Povm equatorial_povm(int n);

struct SimulatorSet {
  int n = 0;
  double h0 = 0.0;
  double h1 = 0.0;
  /// M^o = {h0 pi_o, h1 pi_{o + (n-1)/2}, h1 pi_{o + (n+1)/2}}.
  std::vector<Povm> members;
  /// labels[o][j] is the target outcome k that outcome j of M^o reports.
  std::vector<std::array<int, 3>> labels;
};

SimulatorSet simulator_set(int n);

struct SimulationReport {
  int n = 0;
  /// Max coordinate deviation of (1/n) sum_o (weight of pi_k in M^o) pi_k from (2/n) pi_k.
  double max_element_residual = 0.0;
  /// Max deviation of outcome probabilities over the random states.
  double max_distribution_residual = 0.0;
  /// |h0 + 2 h1 - 2|.
  double coefficient_residual = 0.0;
  bool simulators_valid = false;
  int states_checked = 0;
  bool pass = false;
};

SimulationReport verify_simulation(int n, double tol = 1e-12, std::uint64_t seed = 7, int num_states = 100);

struct ExtremalityReport {
  /// False when some effect is not rank one (w != |vec|); the other fields are then unset.
  bool applicable = false;
  bool extremal = false;
  /// Rank of the k x 4 coordinate matrix (singular values above 1e-9).
  int gram_rank = 0;
  int num_effects = 0;
};

ExtremalityReport is_extremal_rank_one(const Povm& povm, double tol = kDefaultTol);

}  // namespace pmgame
