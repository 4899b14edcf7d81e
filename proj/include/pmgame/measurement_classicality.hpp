#pragma once

// Certificates that a qubit measurement is not classical: anti-distinguishing
// measurements, the prior/post guessing gap, polygonal joint-measurability
// relaxations, and coherence detection.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "pmgame/qubit.hpp"

namespace pmgame {

// ---------------------------------------------------------------- guessing

/// Six states split into two labelled halves, each state with prior 1/6.
struct PartitionedEnsemble {
  std::array<DensityState, 3> part0{};
  std::array<DensityState, 3> part1{};
};

/// {(2/3)(I - pi_b)} for three pure states whose Bloch vectors sum to zero.
/// Throws DomainError otherwise (at `tol`).
Povm antidistinguishing_povm(const std::array<DensityState, 3>& states, double tol = kDefaultTol);

/// Part 0 at Bloch angles 0, 144, 216 degrees and part 1 at 72, 216, 288
/// degrees in the xz-plane.
PartitionedEnsemble carmeli_ensemble();

/// Rotates every state by `angle` within the xz-plane.
PartitionedEnsemble rotate_ensemble(const PartitionedEnsemble& ensemble, double angle);

/// Pure states along the Bloch directions of the effects of two three-outcome
/// POVMs. Throws DomainError if some effect has no Bloch direction.
PartitionedEnsemble matched_ensemble(const Povm& first, const Povm& second);

/// (1/6) [sum_k Tr(part0[g0[k]] first_k) + sum_k Tr(part1[g1[k]] second_k)]
/// where g0, g1 map outcomes to guessed states. Without assignments outcome k
/// guesses state k and both POVMs must have three outcomes.
double prior_guess(const PartitionedEnsemble& ensemble, const Povm& first, const Povm& second,
                   const std::optional<std::vector<int>>& first_guess = std::nullopt,
                   const std::optional<std::vector<int>>& second_guess = std::nullopt);

/// (e_i + e'_j) / 6 for i, j in {0,1,2}, index 3 i + j.
std::array<PauliOperator, 9> guessing_operators(const PartitionedEnsemble& ensemble);

/// Post-information guessing value of a single POVM: for each outcome the best
/// guess (i, j) once the partition is revealed, i.e. sum_k max_ij Tr[G_k W_ij].
double post_guess_value(const PartitionedEnsemble& ensemble, const Povm& povm);

struct PostGuessOptions {
  int restarts = 20;
  int max_outcomes = 9;
  int climb_iterations = 400;
  std::uint64_t seed = 11;
};

struct GuessingReport {
  double p_prior = 0.0;
  double p_post_upper = 0.0;
  double p_post_lower = 0.0;
  /// Y with Y - W_ij >= 0 for all nine W_ij; Tr[Y] = p_post_upper.
  PauliOperator dual_certificate{};
  /// min over ij of the smallest eigenvalue of Y - W_ij.
  double min_dual_eigenvalue = 0.0;
  bool dual_feasible = false;
  /// The strategy attaining p_post_lower.
  Povm lower_witness;
  double witness_margin = 0.0;
};

/// Two-sided bounds on the post-information guessing probability. The
/// p_prior and witness_margin fields are left at zero.
GuessingReport post_guess_bounds(const PartitionedEnsemble& ensemble, const PostGuessOptions& options = {});

/// post_guess_bounds plus the prior value of (first, second) and the margin
/// p_prior - p_post_upper. A positive margin certifies incompatibility.
GuessingReport guessing_report(const Povm& first, const Povm& second, const PartitionedEnsemble& ensemble,
                               const PostGuessOptions& options = {});

double incompatibility_witness(const Povm& first, const Povm& second, const PartitionedEnsemble& ensemble);

// ------------------------------------------------------ joint measurability

enum class Compatibility { compatible, incompatible, undecided };

const char* to_string(Compatibility verdict);

struct JointMeasurabilityReport {
  Compatibility verdict = Compatibility::undecided;
  /// The inscribed polygon relaxation is feasible. Its vertices are the k
  /// regular points plus the in-plane directions of all marginal effects.
  bool inner_feasible = false;
  /// The circumscribed polygon relaxation is feasible.
  bool outer_feasible = false;
  int polygon_k = 0;
  /// Joint effects G_ij (index i * second.size() + j) from the inner solution, when feasible.
  std::vector<Effect> parent;
};

/// Joint-measurability test for POVMs whose Bloch vectors share a plane.
/// Throws NotApplicableError for non-coplanar inputs and ValidationError for
/// invalid POVMs or polygon_k < 3.
JointMeasurabilityReport joint_measurability_check(const Povm& first, const Povm& second, int polygon_k = 64);

/// E -> eta E + (1 - eta) Tr[E] I / 2 on every effect.
Povm add_white_noise(const Povm& povm, double eta);

struct NoiseThreshold {
  /// Largest eta (to `resolution`) at which the inner relaxation is feasible.
  double eta = 0.0;
  int lp_checks = 0;
};

NoiseThreshold noise_threshold(const Povm& first, const Povm& second, int polygon_k = 64, double resolution = 1e-4);

// ------------------------------------------------------------- coherence

/// Bloch vector projected onto the basis axis. Throws DomainError for a zero axis.
DensityState dephase(const DensityState& state, const Vec3& basis_direction);

struct FreeReport {
  bool free = false;
  /// max over effects of the Bloch-vector component orthogonal to the axis,
  /// which equals max_rho,b |Tr[(rho - dephase(rho)) E_b]|.
  double witness_value = 0.0;
  /// Pure state attaining witness_value (maximally mixed when free).
  DensityState witness_state;
  int witness_effect = -1;
};

FreeReport is_free_povm(const Povm& povm, const Vec3& basis_direction, double tol = kDefaultTol);

struct AnyBasisReport {
  bool free = false;
  /// Largest |a x b| over pairs of effect vectors.
  double max_cross = 0.0;
  /// Largest operator norm of [E_a, E_b] = 2i (a x b) . sigma, i.e. 2 |a x b|.
  double max_commutator_norm = 0.0;
  /// A common eigen-axis when free (+z when every effect is scalar).
  std::optional<Vec3> axis;
  /// Free for this axis with the per-basis test.
  bool diagonal_in_axis = false;
};

AnyBasisReport is_free_in_any_basis(const Povm& povm, double tol = kDefaultTol);

/// Outcome-0 direction of the optimal trine measurement, (-1/2, 0, sqrt(3)/2).
Vec3 trine_basis_direction();

/// alpha0 = 1: {pi_n, pi_-n / 2, pi_-n / 2}; alpha0 = 0: {0, pi_n, pi_-n}.
/// Throws DomainError for other alpha0.
Povm degenerate_povm(int alpha0, const Vec3& axis);

}  // namespace pmgame
