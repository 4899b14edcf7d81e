#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pmgame/errors.hpp"
#include "pmgame/game.hpp"
#include "pmgame/quantum_opt.hpp"

using namespace pmgame;

namespace {

double success_oracle(const GameStrategy& s) {
  double total = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int x = 0; x < 3; ++x) {
      const int b = (x + a) % 3;
      total += oracle::trace_product(oracle::matrix(s.preps[static_cast<std::size_t>(3 * a + x)]),
                                     oracle::matrix(s.povm[static_cast<std::size_t>(b)]));
    }
  }
  return total / 6.0;
}

// Random strategy satisfying both parity constraints: small a=0 states keep
// the completion inside the Bloch ball.
GameStrategy random_feasible(oracle::Random& rng) {
  std::array<DensityState, 3> a0;
  for (auto& s : a0) s = state_from_bloch(rng.ball() * (1.0 / 3.0));
  GameStrategy g;
  g.preps = complete_preparations(a0);
  g.povm = Povm(rng.povm(3));
  return g;
}

}  // namespace

TEST(Game, IndexingAndTargets) {
  EXPECT_EQ(prep_index(0, 0), 0U);
  EXPECT_EQ(prep_index(2, 0), 2U);
  EXPECT_EQ(prep_index(0, 1), 3U);
  EXPECT_EQ(prep_index(2, 1), 5U);
  EXPECT_EQ(target_outcome(2, 1), 0);
  EXPECT_EQ(target_outcome(1, 1), 2);
  EXPECT_EQ(mod3(-1), 2);
}

TEST(Game, AnalyticStrategyValue) {
  const GameStrategy s = analytic_optimal_strategy();
  EXPECT_NEAR(success_probability(s), (1.0 + std::sqrt(3.0) / 2.0) / 3.0, 1e-12);
  EXPECT_NEAR(success_oracle(s), success_probability(s), 1e-13);
  EXPECT_TRUE(check_parity_concealment(s.preps).pass);
}

TEST(Game, CompletionSatisfiesConstraintsByMatrixOracle) {
  oracle::Random rng(10);
  for (int t = 0; t < 200; ++t) {
    const GameStrategy g = random_feasible(rng);
    oracle::Mat2 even = oracle::Mat2::Zero();
    oracle::Mat2 odd = oracle::Mat2::Zero();
    std::array<oracle::Mat2, 3> cls{oracle::Mat2::Zero(), oracle::Mat2::Zero(), oracle::Mat2::Zero()};
    for (int a = 0; a < 2; ++a) {
      for (int x = 0; x < 3; ++x) {
        const auto m = oracle::matrix(g.preps[static_cast<std::size_t>(3 * a + x)]);
        (a == 0 ? even : odd) += m;
        cls[static_cast<std::size_t>((x + 2 * a) % 3)] += m;
      }
    }
    EXPECT_LT((even - odd).norm(), 1e-12);
    EXPECT_LT((cls[0] - cls[1]).norm(), 1e-12);
    EXPECT_LT((cls[1] - cls[2]).norm(), 1e-12);
    EXPECT_TRUE(check_parity_concealment(g.preps).pass);
  }
}

TEST(Game, InfeasibleCompletionReportsIndex) {
  const std::array<DensityState, 3> a0{state_from_bloch({0, 0, 1}), state_from_bloch({0, 0, 1}),
                                       state_from_bloch({0, 0, -1})};
  // Completion Bloch for x = 0: (2/3)(0,0,1) - (0,0,-1), outside the ball.
  try {
    complete_preparations(a0);
    FAIL() << "expected InfeasiblePreparationError";
  } catch (const InfeasiblePreparationError& e) {
    EXPECT_EQ(e.index(), 3);
  }
}

TEST(Game, RejectsWrongOutcomeCount) {
  GameStrategy g = analytic_optimal_strategy();
  g.povm = Povm({Effect::identity_fraction(0.5), Effect::identity_fraction(0.5)});
  EXPECT_THROW(success_probability(g), ValidationError);
  g.povm = Povm({Effect::identity_fraction(0.5), Effect::identity_fraction(0.5), Effect::identity_fraction(0.5)});
  EXPECT_THROW(success_probability(g), ValidationError);
}

TEST(Game, ParityViolationDetected) {
  Preparations p{};
  p[0] = state_from_bloch({0, 0, 1});
  const auto rep = check_parity_concealment(p);
  EXPECT_FALSE(rep.pass);
  EXPECT_NEAR(rep.input_parity_residual, 1.0 / 6.0, 1e-15);
}

TEST(Game, RandomFeasibleStrategiesBelowCeiling) {
  oracle::Random rng(11);
  double best = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const GameStrategy g = random_feasible(rng);
    const double v = success_probability(g);
    EXPECT_LE(v, kQuantumOptimum + 1e-9);
    best = std::max(best, v);
  }
  EXPECT_GT(best, 1.0 / 3.0);
}

TEST(Game, UniformStrategyIsOneThird) {
  GameStrategy g;
  g.povm = Povm({Effect::identity_fraction(1.0 / 3), Effect::identity_fraction(1.0 / 3),
                 Effect::identity_fraction(1.0 / 3)});
  EXPECT_NEAR(success_probability(g), 1.0 / 3.0, 1e-15);
}
