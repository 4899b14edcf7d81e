#include "pmgame/povm_simulation.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pmgame/errors.hpp"
#include "random.hpp"

namespace pmgame {

namespace {

void require_odd(int n) {
  if (n < 3 || n % 2 == 0) throw DomainError("n must be odd and at least 3, got " + std::to_string(n));
}

int wrap(int k, int n) { return ((k % n) + n) % n; }

}  // namespace

double equatorial_angle(int n, int k) { return 2.0 * std::numbers::pi * wrap(k, n) / n; }

Vec3 equatorial_direction(int n, int k) { return xz_direction(equatorial_angle(n, k)); }

Povm equatorial_povm(int n) {
  require_odd(n);
  std::vector<Effect> effects;
  effects.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) effects.push_back(Effect::scaled_projector(2.0 / n, equatorial_direction(n, k)));
  return Povm(std::move(effects), std::vector<double>(static_cast<std::size_t>(n), 2.0 / n));
}

SimulatorSet simulator_set(int n) {
  require_odd(n);
  SimulatorSet set;
  set.n = n;
  const double c = std::cos(std::numbers::pi / n);
  set.h0 = 2.0 * c / (1.0 + c);
  set.h1 = 1.0 / (1.0 + c);
  const int half = (n - 1) / 2;
  for (int o = 0; o < n; ++o) {
    const std::array<int, 3> lab{o, wrap(o + half, n), wrap(o + half + 1, n)};
    const std::array<double, 3> alphas{set.h0, set.h1, set.h1};
    std::array<Vec3, 3> dirs{};
    for (std::size_t j = 0; j < 3; ++j) dirs[j] = equatorial_direction(n, lab[j]);
    set.members.push_back(Povm::from_weighted_directions(alphas, dirs));
    set.labels.push_back(lab);
  }
  return set;
}

SimulationReport verify_simulation(int n, double tol, std::uint64_t seed, int num_states) {
  const Povm target = equatorial_povm(n);
  const SimulatorSet set = simulator_set(n);
  SimulationReport rep;
  rep.n = n;
  rep.coefficient_residual = std::abs(set.h0 + 2.0 * set.h1 - 2.0);

  std::vector<PauliOperator> mixed(static_cast<std::size_t>(n));
  rep.simulators_valid = true;
  for (int o = 0; o < n; ++o) {
    const Povm& m = set.members[static_cast<std::size_t>(o)];
    rep.simulators_valid = rep.simulators_valid && m.validate(tol).pass;
    for (std::size_t j = 0; j < 3; ++j) {
      auto& acc = mixed[static_cast<std::size_t>(set.labels[static_cast<std::size_t>(o)][j])];
      acc += (1.0 / n) * m[j].as_operator();
    }
  }
  for (int k = 0; k < n; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    rep.max_element_residual = std::max(rep.max_element_residual, max_abs_diff(mixed[idx], target[idx].as_operator()));
  }

  detail::Rng rng(seed);
  for (int s = 0; s < num_states; ++s) {
    const DensityState rho = DensityState::from_bloch(rng.in_ball());
    const auto want = target.probabilities(rho);
    std::vector<double> got(static_cast<std::size_t>(n), 0.0);
    for (int o = 0; o < n; ++o) {
      const auto p = set.members[static_cast<std::size_t>(o)].probabilities(rho);
      for (std::size_t j = 0; j < 3; ++j) {
        got[static_cast<std::size_t>(set.labels[static_cast<std::size_t>(o)][j])] += p[j] / n;
      }
    }
    for (std::size_t k = 0; k < got.size(); ++k) {
      rep.max_distribution_residual = std::max(rep.max_distribution_residual, std::abs(got[k] - want[k]));
    }
    ++rep.states_checked;
  }
  rep.pass = rep.simulators_valid && rep.max_element_residual < tol && rep.max_distribution_residual < tol &&
             rep.coefficient_residual < tol;
  return rep;
}

ExtremalityReport is_extremal_rank_one(const Povm& povm, double tol) {
  ExtremalityReport rep;
  rep.num_effects = static_cast<int>(povm.size());
  for (const Effect& e : povm.effects()) {
    if (std::abs(e.weight - norm(e.vec)) > tol || e.weight <= tol) return rep;
  }
  rep.applicable = true;
  Eigen::MatrixXd coords(povm.size(), 4);
  for (std::size_t i = 0; i < povm.size(); ++i) {
    const Effect& e = povm[i];
    const auto r = static_cast<Eigen::Index>(i);
    coords(r, 0) = e.weight;
    coords(r, 1) = e.vec.x;
    coords(r, 2) = e.vec.y;
    coords(r, 3) = e.vec.z;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(coords);
  const auto& sv = svd.singularValues();
  rep.gram_rank = static_cast<int>((sv.array() > 1e-9).count());
  rep.extremal = rep.gram_rank == rep.num_effects;
  return rep;
}

}  // namespace pmgame
