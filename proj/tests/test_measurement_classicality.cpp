#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "pmgame/errors.hpp"
#include "pmgame/measurement_classicality.hpp"
#include "pmgame/povm_simulation.hpp"
#include "pmgame/quantum_opt.hpp"

using namespace pmgame;

namespace {

std::array<DensityState, 3> trine_states(const Vec3& e1, const Vec3& e2) {
  std::array<DensityState, 3> out;
  for (int b = 0; b < 3; ++b) {
    const double t = 2.0 * std::numbers::pi * b / 3.0;
    out[static_cast<std::size_t>(b)] = state_from_bloch(e1 * std::cos(t) + e2 * std::sin(t));
  }
  return out;
}

PartitionedEnsemble random_ensemble(oracle::Random& rng) {
  PartitionedEnsemble e;
  for (auto& s : e.part0) s = rng.state();
  for (auto& s : e.part1) s = rng.state();
  return e;
}

const Povm& m0() {
  static const SimulatorSet s = simulator_set(5);
  return s.members[0];
}
const Povm& m1() {
  static const SimulatorSet s = simulator_set(5);
  return s.members[1];
}

}  // namespace

// ---------------------------------------------------------------- anti-distinguishability

TEST(AntiDistinguishing, TrineStates) {
  const auto states = trine_states({0, 0, 1}, {1, 0, 0});
  const Povm m = antidistinguishing_povm(states);
  EXPECT_TRUE(m.validate(1e-12).pass);
  for (std::size_t b = 0; b < 3; ++b) {
    EXPECT_LT(std::abs(oracle::trace_product(oracle::matrix(states[b]), oracle::matrix(m[b]))), 1e-14);
  }
}

TEST(AntiDistinguishing, RandomFrames) {
  oracle::Random rng(30);
  for (int t = 0; t < 100; ++t) {
    const Vec3 e1 = rng.unit();
    Vec3 e2 = cross(e1, rng.unit());
    e2 = e2 / norm(e2);
    const auto states = trine_states(e1, e2);
    const Povm m = antidistinguishing_povm(states);
    for (std::size_t b = 0; b < 3; ++b) EXPECT_LT(std::abs(born_probability(states[b], m[b])), 1e-14);
  }
}

TEST(AntiDistinguishing, Preconditions) {
  EXPECT_THROW(antidistinguishing_povm({state_from_bloch({0, 0, 1}), state_from_bloch({0, 0, 1}),
                                        state_from_bloch({0, 0, -1})}),
               DomainError);
  EXPECT_THROW(antidistinguishing_povm({DensityState{}, DensityState{}, DensityState{}}), DomainError);
}

// ---------------------------------------------------------------- ensembles

TEST(Ensemble, PrintedStates) {
  const auto e = carmeli_ensemble();
  EXPECT_EQ(e.part0[0].bloch(), (Vec3{0, 0, 1}));
  EXPECT_EQ(e.part0[2].bloch(), e.part1[1].bloch());
  for (const auto& s : e.part0) EXPECT_TRUE(s.is_pure());
  for (const auto& s : e.part1) EXPECT_TRUE(s.is_pure());
  // e1 = (I - cos(pi/5) sigma_z + sin(pi/5) sigma_x) / 2
  const oracle::Mat2 e1 = 0.5 * (oracle::Mat2::Identity() - std::cos(std::numbers::pi / 5) * oracle::pauli_z() +
                                 std::sin(std::numbers::pi / 5) * oracle::pauli_x());
  EXPECT_LT((oracle::matrix(e.part0[1]) - e1).norm(), 1e-15);
  const double angles1[3] = {72, 216, 288};
  for (std::size_t i = 0; i < 3; ++i) {
    const Vec3 want = xz_direction(angles1[i] * std::numbers::pi / 180.0);
    EXPECT_LT(norm(e.part1[i].bloch() - want), 1e-15);
  }
}

TEST(Ensemble, MatchedEnsembleReproducesPrinted) {
  const auto e = carmeli_ensemble();
  const auto m = matched_ensemble(m0(), m1());
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_LT(norm(e.part0[i].bloch() - m.part0[i].bloch()), 1e-14);
    EXPECT_LT(norm(e.part1[i].bloch() - m.part1[i].bloch()), 1e-14);
  }
}

// ---------------------------------------------------------------- guessing

TEST(Guessing, PriorValue) {
  EXPECT_NEAR(prior_guess(carmeli_ensemble(), m0(), m1()), 2.0 / 3.0, 1e-12);
  EXPECT_LT(prior_guess(carmeli_ensemble(), m1(), m0()), 2.0 / 3.0 - 1e-3);
  const Povm flat({Effect::identity_fraction(1.0 / 3), Effect::identity_fraction(1.0 / 3),
                   Effect::identity_fraction(1.0 / 3)});
  EXPECT_NEAR(prior_guess(carmeli_ensemble(), flat, flat), 1.0 / 3.0, 1e-15);
}

TEST(Guessing, PriorOracle) {
  const auto e = carmeli_ensemble();
  double total = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    total += oracle::trace_product(oracle::matrix(e.part0[k]), oracle::matrix(m0()[k]));
    total += oracle::trace_product(oracle::matrix(e.part1[k]), oracle::matrix(m1()[k]));
  }
  EXPECT_NEAR(total / 6.0, prior_guess(e, m0(), m1()), 1e-15);
}

TEST(Guessing, PriorAssignmentMismatch) {
  const Povm two({Effect::identity_fraction(0.5), Effect::identity_fraction(0.5)});
  EXPECT_THROW(prior_guess(carmeli_ensemble(), two, m1()), ValidationError);
  EXPECT_THROW(prior_guess(carmeli_ensemble(), m0(), m1(), std::vector<int>{0, 1}), ValidationError);
  EXPECT_NO_THROW(prior_guess(carmeli_ensemble(), two, m1(), std::vector<int>{0, 1}));
}

TEST(Guessing, ZBasisStrategy) {
  const auto e = carmeli_ensemble();
  const Povm z({Effect::scaled_projector(1.0, {0, 0, 1}), Effect::scaled_projector(1.0, {0, 0, -1})});
  const double v = post_guess_value(e, z);
  // Best guesses per outcome, evaluated with explicit matrices.
  double want = 0.0;
  for (std::size_t k = 0; k < 2; ++k) {
    double b0 = 0.0;
    double b1 = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      b0 = std::max(b0, oracle::trace_product(oracle::matrix(e.part0[i]), oracle::matrix(z[k])));
      b1 = std::max(b1, oracle::trace_product(oracle::matrix(e.part1[i]), oracle::matrix(z[k])));
    }
    want += b0 + b1;
  }
  EXPECT_NEAR(v, want / 6.0, 1e-15);
  EXPECT_GE(v, 0.577);
  EXPECT_GE(post_guess_bounds(e).p_post_lower, v - 1e-12);
}

TEST(Guessing, IdentityThirdIsDualFeasible) {
  for (const auto& w : guessing_operators(carmeli_ensemble())) {
    EXPECT_GE(oracle::min_eigenvalue(oracle::matrix(PauliOperator{1.0 / 3.0, {}}) - oracle::matrix(w)), -1e-15);
  }
}

TEST(Guessing, BoundsOnPrintedEnsemble) {
  const auto rep = post_guess_bounds(carmeli_ensemble());
  EXPECT_TRUE(rep.dual_feasible);
  for (const auto& w : guessing_operators(carmeli_ensemble())) {
    EXPECT_GE(oracle::min_eigenvalue(oracle::matrix(rep.dual_certificate) - oracle::matrix(w)), -1e-10);
  }
  EXPECT_NEAR(oracle::matrix(rep.dual_certificate).trace().real(), rep.p_post_upper, 1e-15);
  EXPECT_LT(rep.p_post_upper, 0.64);
  EXPECT_LE(rep.p_post_lower, rep.p_post_upper + 1e-9);
  EXPECT_GE(rep.p_post_lower, 1.0 / 3.0);
  EXPECT_LE(rep.p_post_upper, 2.0 / 3.0);
  EXPECT_TRUE(rep.lower_witness.validate().pass);
  EXPECT_LE(rep.lower_witness.size(), 9U);
}

TEST(Guessing, UpperBoundDominatesRandomStrategies) {
  oracle::Random rng(31);
  const auto e = carmeli_ensemble();
  const double upper = post_guess_bounds(e).p_post_upper;
  for (int t = 0; t < 1000; ++t) {
    const Povm m(rng.povm(rng.integer(2, 9)));
    EXPECT_LE(post_guess_value(e, m), upper + 1e-12);
  }
}

TEST(Guessing, BoundsOnRandomEnsembles) {
  oracle::Random rng(32);
  for (int t = 0; t < 30; ++t) {
    const auto e = random_ensemble(rng);
    PostGuessOptions o;
    o.restarts = 4;
    o.climb_iterations = 150;
    const auto rep = post_guess_bounds(e, o);
    EXPECT_TRUE(rep.dual_feasible);
    EXPECT_LE(rep.p_post_lower, rep.p_post_upper + 1e-9);
    EXPECT_GE(rep.p_post_lower, 1.0 / 3.0 - 1e-12);
  }
}

TEST(Guessing, WitnessMargin) {
  const auto e = carmeli_ensemble();
  const auto rep = guessing_report(m0(), m1(), e);
  EXPECT_NEAR(rep.p_prior, 2.0 / 3.0, 1e-12);
  EXPECT_GT(rep.witness_margin, 0.02);
  EXPECT_NEAR(incompatibility_witness(m0(), m1(), e), rep.witness_margin, 1e-15);
}

TEST(Guessing, SameMeasurementHasNoMargin) {
  oracle::Random rng(33);
  const Povm trine = equatorial_povm(3);
  EXPECT_LE(incompatibility_witness(trine, trine, carmeli_ensemble()), 1e-9);
  for (int t = 0; t < 50; ++t) {
    const Povm m(rng.povm(3));
    EXPECT_LE(incompatibility_witness(m, m, random_ensemble(rng)), 1e-9);
    EXPECT_LE(incompatibility_witness(m0(), m0(), random_ensemble(rng)), 1e-9);
  }
}

TEST(Guessing, AllSimulatorPairsWitnessed) {
  const auto s = simulator_set(5);
  for (std::size_t o = 0; o < 5; ++o) {
    for (std::size_t p = o + 1; p < 5; ++p) {
      const auto e = matched_ensemble(s.members[o], s.members[p]);
      EXPECT_GT(incompatibility_witness(s.members[o], s.members[p], e), 0.01) << o << p;
    }
  }
  // Neighbouring pairs are rotated copies of the printed ensemble.
  for (std::size_t o = 0; o < 5; ++o) {
    const auto e = rotate_ensemble(carmeli_ensemble(), 2.0 * std::numbers::pi * static_cast<double>(o) / 5.0);
    EXPECT_GT(incompatibility_witness(s.members[o], s.members[(o + 1) % 5], e), 0.02) << o;
  }
}

// ---------------------------------------------------------------- joint measurability

namespace {

void expect_valid_parent(const JointMeasurabilityReport& r, const Povm& a, const Povm& b) {
  ASSERT_EQ(r.parent.size(), a.size() * b.size());
  for (const Effect& g : r.parent) EXPECT_GE(oracle::min_eigenvalue(oracle::matrix(g)), -1e-9);
  for (std::size_t i = 0; i < a.size(); ++i) {
    oracle::Mat2 s = oracle::Mat2::Zero();
    for (std::size_t j = 0; j < b.size(); ++j) s += oracle::matrix(r.parent[i * b.size() + j]);
    EXPECT_LT((s - oracle::matrix(a[i])).norm(), 1e-9);
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    oracle::Mat2 s = oracle::Mat2::Zero();
    for (std::size_t i = 0; i < a.size(); ++i) s += oracle::matrix(r.parent[i * b.size() + j]);
    EXPECT_LT((s - oracle::matrix(b[j])).norm(), 1e-9);
  }
}

}  // namespace

TEST(JointMeasurability, SelfCompatible) {
  const auto r = joint_measurability_check(m0(), m0(), 64);
  EXPECT_EQ(r.verdict, Compatibility::compatible);
  expect_valid_parent(r, m0(), m0());
}

TEST(JointMeasurability, PrintedPairIncompatible) {
  const auto r = joint_measurability_check(m0(), m1(), 64);
  EXPECT_EQ(r.verdict, Compatibility::incompatible);
  EXPECT_FALSE(r.outer_feasible);
}

TEST(JointMeasurability, AllSimulatorPairsIncompatible) {
  const auto s = simulator_set(5);
  for (std::size_t o = 0; o < 5; ++o) {
    for (std::size_t p = 0; p < 5; ++p) {
      const auto v = joint_measurability_check(s.members[o], s.members[p], 64).verdict;
      EXPECT_EQ(v, o == p ? Compatibility::compatible : Compatibility::incompatible) << o << p;
    }
  }
}

TEST(JointMeasurability, NoisyPairCompatible) {
  const Povm a = add_white_noise(m0(), 0.1);
  const Povm b = add_white_noise(m1(), 0.1);
  const auto r = joint_measurability_check(a, b, 64);
  EXPECT_EQ(r.verdict, Compatibility::compatible);
  expect_valid_parent(r, a, b);
}

TEST(JointMeasurability, NoiseThresholdBracketed) {
  const auto t = noise_threshold(m0(), m1(), 64, 1e-4);
  EXPECT_GT(t.eta, 0.1);
  EXPECT_LT(t.eta, 1.0);
  EXPECT_TRUE(joint_measurability_check(add_white_noise(m0(), t.eta), add_white_noise(m1(), t.eta)).inner_feasible);
  EXPECT_FALSE(
      joint_measurability_check(add_white_noise(m0(), t.eta + 2e-4), add_white_noise(m1(), t.eta + 2e-4))
          .inner_feasible);
}

TEST(JointMeasurability, NoiseMap) {
  const Povm n = add_white_noise(m0(), 0.3);
  for (std::size_t k = 0; k < 3; ++k) {
    const oracle::Mat2 want = 0.3 * oracle::matrix(m0()[k]) +
                              0.7 * oracle::matrix(m0()[k]).trace().real() * oracle::Mat2::Identity() / 2.0;
    EXPECT_LT((oracle::matrix(n[k]) - want).norm(), 1e-15);
  }
  EXPECT_THROW(add_white_noise(m0(), 1.5), DomainError);
}

TEST(JointMeasurability, RandomCoplanarSelfCompatible) {
  oracle::Random rng(34);
  for (int t = 0; t < 30; ++t) {
    const Povm m(rng.povm(rng.integer(2, 4), true));
    EXPECT_EQ(joint_measurability_check(m, m, 16).verdict, Compatibility::compatible) << t;
  }
}

TEST(JointMeasurability, RotatedPlaneHandled) {
  // The printed pair moved into the xy-plane.
  auto to_xy = [](const Povm& m) {
    std::vector<Effect> out;
    for (const Effect& e : m.effects()) out.push_back({e.weight, {e.vec.z, e.vec.x, 0.0}});
    return Povm(out);
  };
  EXPECT_EQ(joint_measurability_check(to_xy(m0()), to_xy(m1())).verdict, Compatibility::incompatible);
  EXPECT_EQ(joint_measurability_check(to_xy(m0()), to_xy(m0())).verdict, Compatibility::compatible);
}

TEST(JointMeasurability, Preconditions) {
  const Povm xz({Effect::scaled_projector(1.0, {0, 0, 1}), Effect::scaled_projector(1.0, {0, 0, -1})});
  const Povm y({Effect::scaled_projector(1.0, {0, 1, 0}), Effect::scaled_projector(1.0, {0, -1, 0})});
  const Povm x({Effect::scaled_projector(1.0, {1, 0, 0}), Effect::scaled_projector(1.0, {-1, 0, 0})});
  const Povm tilted({Effect::scaled_projector(1.0, Vec3{1, 1, 1} / std::sqrt(3.0)),
                     Effect::scaled_projector(1.0, Vec3{-1, -1, -1} / std::sqrt(3.0))});
  EXPECT_NO_THROW(joint_measurability_check(xz, y));
  EXPECT_THROW(joint_measurability_check(equatorial_povm(3), tilted), NotApplicableError);
  EXPECT_THROW(joint_measurability_check(xz, Povm({Effect::identity_fraction(0.7)})), ValidationError);
  EXPECT_THROW(joint_measurability_check(x, y, 2), ValidationError);
  // Sharp measurements along orthogonal axes are incompatible.
  EXPECT_EQ(joint_measurability_check(xz, x, 64).verdict, Compatibility::incompatible);
}

TEST(JointMeasurability, AgreesWithGuessingWitness) {
  // Whenever the witness certifies incompatibility the relaxation must not
  // report compatibility.
  oracle::Random rng(35);
  int certified = 0;
  for (int t = 0; t < 40; ++t) {
    const Povm a(rng.povm(3, true));
    const Povm b(rng.povm(3, true));
    const double margin = incompatibility_witness(a, b, matched_ensemble(a, b));
    if (margin <= 1e-9) continue;
    ++certified;
    EXPECT_NE(joint_measurability_check(a, b, 32).verdict, Compatibility::compatible) << t;
  }
  SUCCEED() << certified << " pairs certified by the witness";
}

// ---------------------------------------------------------------- coherence

TEST(Coherence, Dephase) {
  const DensityState s = state_from_bloch({0.3, 0.4, 0.5});
  const DensityState d = dephase(s, {0, 0, 2});
  EXPECT_NEAR(d.bloch().x, 0.0, 1e-15);
  EXPECT_NEAR(d.bloch().z, 0.5, 1e-15);
  EXPECT_THROW(dephase(s, {0, 0, 0}), DomainError);
}

TEST(Coherence, TrineDetectsCoherence) {
  const Povm trine = analytic_optimal_strategy().povm;
  const Vec3 basis = trine_basis_direction();
  EXPECT_NEAR(basis.x, -0.5, 1e-15);
  EXPECT_NEAR(basis.z, std::sqrt(3.0) / 2, 1e-15);
  const auto r = is_free_povm(trine, basis);
  EXPECT_FALSE(r.free);
  EXPECT_NEAR(r.witness_value, (2.0 / 3.0) * (std::sqrt(3.0) / 2.0) / 2.0, 1e-12);
  EXPECT_GT(r.witness_value, 0.28);
  // The witness state attains the value: |Tr[(rho - dephased rho) E]|.
  const auto& e = trine[static_cast<std::size_t>(r.witness_effect)];
  const oracle::Mat2 diff = oracle::matrix(r.witness_state) - oracle::matrix(dephase(r.witness_state, basis));
  EXPECT_NEAR(std::abs(oracle::trace_product(diff, oracle::matrix(e))), r.witness_value, 1e-12);
  EXPECT_FALSE(is_free_in_any_basis(trine).free);
}

TEST(Coherence, DegenerateMeasurementsAreFree) {
  const Vec3 basis = trine_basis_direction();
  EXPECT_TRUE(is_free_povm(degenerate_povm(1, basis), basis).free);
  EXPECT_TRUE(is_free_povm(degenerate_povm(0, basis), basis).free);
  EXPECT_TRUE(is_free_in_any_basis(degenerate_povm(1, basis)).free);
  EXPECT_TRUE(is_free_in_any_basis(degenerate_povm(0, {1, 0, 0})).free);
  const Povm flat({Effect::identity_fraction(0.5), Effect::identity_fraction(0.5)});
  const auto r = is_free_in_any_basis(flat);
  EXPECT_TRUE(r.free);
  EXPECT_TRUE(r.diagonal_in_axis);
  EXPECT_TRUE(is_free_povm(flat, {0.2, 0.7, -0.1}).free);
  EXPECT_THROW(degenerate_povm(2, basis), DomainError);
}

TEST(Coherence, DegeneratePovmsAreOptimal) {
  // The alpha0 = 1 and alpha0 = 0 POVMs along the trine basis are valid
  // three-outcome measurements.
  EXPECT_TRUE(degenerate_povm(1, trine_basis_direction()).validate().pass);
  EXPECT_TRUE(degenerate_povm(0, trine_basis_direction()).validate().pass);
}

TEST(Coherence, FormulationsAgree) {
  oracle::Random rng(36);
  int free_count = 0;
  for (int t = 0; t < 1000; ++t) {
    // Two-outcome POVMs always commute, so the general draws use three or more.
    const int k = t % 2 == 0 ? rng.integer(2, 5) : rng.integer(3, 5);
    std::vector<Effect> effects = t % 2 == 0 ? rng.collinear_povm(k, rng.unit()) : rng.povm(k);
    const Povm m(effects);
    const auto rep = is_free_in_any_basis(m, 1e-9);

    // Commutation: every pair commutes, via explicit matrix products.
    bool commute = true;
    for (std::size_t i = 0; i < effects.size(); ++i) {
      for (std::size_t j = i + 1; j < effects.size(); ++j) {
        commute = commute && oracle::commutator_norm(oracle::matrix(effects[i]), oracle::matrix(effects[j])) <= 2e-9;
      }
    }
    // Diagonality: diagonalize the effect with the largest traceless part and
    // check every effect is diagonal in that eigenbasis.
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < effects.size(); ++i) {
      if (norm(effects[i].vec) > norm(effects[pivot].vec)) pivot = i;
    }
    Eigen::SelfAdjointEigenSolver<oracle::Mat2> es(oracle::matrix(effects[pivot]));
    bool diagonal = true;
    for (const Effect& e : effects) {
      const oracle::Mat2 d = es.eigenvectors().adjoint() * oracle::matrix(e) * es.eigenvectors();
      diagonal = diagonal && std::abs(d(0, 1)) <= 1e-9 * (1.0 + 1.0 / std::max(norm(effects[pivot].vec), 1e-9));
    }
    if (norm(effects[pivot].vec) < 1e-12) diagonal = true;

    EXPECT_EQ(rep.free, commute) << t;
    EXPECT_EQ(rep.free, diagonal) << t;
    EXPECT_NEAR(rep.max_commutator_norm, 2.0 * rep.max_cross, 1e-15);
    if (rep.free) {
      ++free_count;
      EXPECT_TRUE(rep.diagonal_in_axis);
    }
  }
  EXPECT_EQ(free_count, 500);
}
