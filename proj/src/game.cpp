#include "pmgame/game.hpp"

#include <algorithm>
#include <sstream>

#include "pmgame/errors.hpp"

namespace pmgame {

double success_probability(const GameStrategy& strategy, double tol) {
  const Povm& povm = strategy.povm;
  if (povm.size() != 3) {
    throw ValidationError("game POVM must have exactly three outcomes");
  }
  const PovmReport report = povm.validate(tol);
  if (!report.pass) {
    std::ostringstream msg;
    msg << "invalid POVM: completeness residual " << report.completeness_residual << ", min eigenvalue "
        << report.min_eigenvalue << ", max eigenvalue " << report.max_eigenvalue;
    throw ValidationError(msg.str());
  }
  double total = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int x = 0; x < 3; ++x) {
      total += born_probability(strategy.preps[prep_index(x, a)], povm[static_cast<std::size_t>(target_outcome(x, a))]);
    }
  }
  return total / 6.0;
}

ParityReport check_parity_concealment(const Preparations& preps, double tol) {
  ParityReport report;
  PauliOperator sum0;
  PauliOperator sum1;
  for (int x = 0; x < 3; ++x) {
    sum0 += preps[prep_index(x, 0)].as_operator();
    sum1 += preps[prep_index(x, 1)].as_operator();
  }
  report.input_parity_residual = max_abs_diff((1.0 / 3.0) * sum0, (1.0 / 3.0) * sum1);

  std::array<PauliOperator, 3> classes{};
  for (int a = 0; a < 2; ++a) {
    for (int x = 0; x < 3; ++x) {
      classes[static_cast<std::size_t>(mod3(x + 2 * a))] += 0.5 * preps[prep_index(x, a)].as_operator();
    }
  }
  report.partition_residual = std::max({max_abs_diff(classes[0], classes[1]), max_abs_diff(classes[1], classes[2]),
                                        max_abs_diff(classes[0], classes[2])});
  report.pass = report.input_parity_residual <= tol && report.partition_residual <= tol;
  return report;
}

std::array<Vec3, 3> completed_a1_blochs(const std::array<Vec3, 3>& a0) {
  const Vec3 two_thirds_sum = (a0[0] + a0[1] + a0[2]) * (2.0 / 3.0);
  std::array<Vec3, 3> a1{};
  for (int x = 0; x < 3; ++x) {
    a1[static_cast<std::size_t>(x)] = two_thirds_sum - a0[static_cast<std::size_t>(mod3(x + 2))];
  }
  return a1;
}

Preparations complete_preparations(const std::array<DensityState, 3>& a0_states, double tol) {
  const std::array<Vec3, 3> a0{a0_states[0].bloch(), a0_states[1].bloch(), a0_states[2].bloch()};
  const auto a1 = completed_a1_blochs(a0);
  Preparations preps{};
  for (int x = 0; x < 3; ++x) {
    preps[prep_index(x, 0)] = a0_states[static_cast<std::size_t>(x)];
    const Vec3& v = a1[static_cast<std::size_t>(x)];
    if (norm(v) > 1.0 + tol) {
      std::ostringstream msg;
      msg << "infeasible preparation rho_" << x << "1: derived Bloch length " << norm(v) << " exceeds 1";
      throw InfeasiblePreparationError(static_cast<int>(prep_index(x, 1)), msg.str());
    }
    preps[prep_index(x, 1)] = DensityState::from_bloch(v, tol);
  }
  return preps;
}

}  // namespace pmgame
