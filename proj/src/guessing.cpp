#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pmgame/errors.hpp"
#include "pmgame/lp.hpp"
#include "pmgame/measurement_classicality.hpp"
#include "random.hpp"

namespace pmgame {

Povm antidistinguishing_povm(const std::array<DensityState, 3>& states, double tol) {
  Vec3 sum{};
  for (const auto& s : states) {
    if (!s.is_pure(tol)) throw DomainError("anti-distinguishing construction needs pure states");
    sum += s.bloch();
  }
  if (norm(sum) > tol) throw DomainError("Bloch vectors do not sum to zero");
  std::vector<Effect> effects;
  for (const auto& s : states) effects.push_back(Effect::scaled_projector(2.0 / 3.0, -s.bloch()));
  return Povm(std::move(effects), std::vector<double>(3, 2.0 / 3.0));
}

PartitionedEnsemble carmeli_ensemble() {
  const double c = std::cos(std::numbers::pi / 5.0);
  const double s = std::sin(std::numbers::pi / 5.0);
  const double c2 = std::cos(2.0 * std::numbers::pi / 5.0);
  const double s2 = std::sin(2.0 * std::numbers::pi / 5.0);
  PartitionedEnsemble e;
  e.part0 = {state_from_bloch({0, 0, 1}), state_from_bloch({s, 0, -c}), state_from_bloch({-s, 0, -c})};
  e.part1 = {state_from_bloch({s2, 0, c2}), state_from_bloch({-s, 0, -c}), state_from_bloch({-s2, 0, c2})};
  return e;
}

PartitionedEnsemble rotate_ensemble(const PartitionedEnsemble& ensemble, double angle) {
  PartitionedEnsemble out;
  for (std::size_t i = 0; i < 3; ++i) {
    out.part0[i] = state_from_bloch(rotate_xz(ensemble.part0[i].bloch(), angle));
    out.part1[i] = state_from_bloch(rotate_xz(ensemble.part1[i].bloch(), angle));
  }
  return out;
}

namespace {

DensityState pure_along(const Effect& e) {
  const double n = norm(e.vec);
  if (n <= 1e-12) throw DomainError("effect has no Bloch direction");
  return state_from_bloch(e.vec / n);
}

std::vector<int> default_guess(const Povm& m) {
  if (m.size() != 3) throw ValidationError("default guessing assignment needs three outcomes");
  return {0, 1, 2};
}

double guess_sum(const std::array<DensityState, 3>& part, const Povm& m, const std::vector<int>& guess) {
  if (guess.size() != m.size()) throw ValidationError("guessing assignment does not match outcome count");
  double total = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const int g = guess[k];
    if (g < 0 || g > 2) throw ValidationError("guessed state index out of range");
    total += born_probability(part[static_cast<std::size_t>(g)], m[k]);
  }
  return total;
}

}  // namespace

PartitionedEnsemble matched_ensemble(const Povm& first, const Povm& second) {
  if (first.size() != 3 || second.size() != 3) throw ValidationError("matched ensemble needs three-outcome POVMs");
  PartitionedEnsemble e;
  for (std::size_t i = 0; i < 3; ++i) {
    e.part0[i] = pure_along(first[i]);
    e.part1[i] = pure_along(second[i]);
  }
  return e;
}

double prior_guess(const PartitionedEnsemble& ensemble, const Povm& first, const Povm& second,
                   const std::optional<std::vector<int>>& first_guess,
                   const std::optional<std::vector<int>>& second_guess) {
  if (!first.validate().pass || !second.validate().pass) throw ValidationError("invalid POVM");
  const auto g0 = first_guess ? *first_guess : default_guess(first);
  const auto g1 = second_guess ? *second_guess : default_guess(second);
  return (guess_sum(ensemble.part0, first, g0) + guess_sum(ensemble.part1, second, g1)) / 6.0;
}

std::array<PauliOperator, 9> guessing_operators(const PartitionedEnsemble& ensemble) {
  std::array<PauliOperator, 9> w{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      w[3 * i + j] = (1.0 / 6.0) * (ensemble.part0[i].as_operator() + ensemble.part1[j].as_operator());
    }
  }
  return w;
}

double post_guess_value(const PartitionedEnsemble& ensemble, const Povm& povm) {
  if (!povm.validate().pass) throw ValidationError("invalid POVM");
  double total = 0.0;
  for (const Effect& g : povm.effects()) {
    double best0 = -std::numeric_limits<double>::infinity();
    double best1 = best0;
    for (std::size_t i = 0; i < 3; ++i) {
      best0 = std::max(best0, born_probability(ensemble.part0[i], g));
      best1 = std::max(best1, born_probability(ensemble.part1[i], g));
    }
    total += best0 + best1;
  }
  return total / 6.0;
}

namespace {

struct Ball {
  Vec3 center{};
  double radius = std::numeric_limits<double>::infinity();
};

std::optional<Vec3> circumcenter(const std::vector<Vec3>& p) {
  if (p.size() == 1) return p[0];
  if (p.size() == 2) return (p[0] + p[1]) * 0.5;
  if (p.size() == 3) {
    const Vec3 a = p[1] - p[0];
    const Vec3 b = p[2] - p[0];
    const Vec3 axb = cross(a, b);
    const double d = dot(axb, axb);
    if (d < 1e-20) return std::nullopt;
    return p[0] + cross(dot(a, a) * b - dot(b, b) * a, axb) / (2.0 * d);
  }
  Eigen::Matrix3d m;
  Eigen::Vector3d rhs;
  for (int r = 0; r < 3; ++r) {
    const Vec3 d = p[static_cast<std::size_t>(r + 1)] - p[0];
    m.row(r) << 2 * d.x, 2 * d.y, 2 * d.z;
    rhs(r) = dot(p[static_cast<std::size_t>(r + 1)], p[static_cast<std::size_t>(r + 1)]) - dot(p[0], p[0]);
  }
  Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
  if (lu.rank() < 3) return std::nullopt;
  const Eigen::Vector3d c = lu.solve(rhs);
  return Vec3{c(0), c(1), c(2)};
}

// Smallest enclosing ball by enumerating boundary sets of up to four points.
Ball enclosing_ball(const std::vector<Vec3>& pts) {
  Ball best;
  const std::size_t n = pts.size();
  for (unsigned mask = 1; mask < (1U << n); ++mask) {
    const int count = __builtin_popcount(mask);
    if (count > 4) continue;
    std::vector<Vec3> sub;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1U << i)) sub.push_back(pts[i]);
    }
    const auto c = circumcenter(sub);
    if (!c) continue;
    double r = 0.0;
    for (const Vec3& q : pts) r = std::max(r, norm(q - *c));
    if (r < best.radius) best = {*c, r};
  }
  return best;
}

// Best weights t_k >= 0 with sum t = 2 and sum t u = 0 for fixed directions.
struct WeightFit {
  bool feasible = false;
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> t;
};

WeightFit fit_weights(const std::vector<Vec3>& dirs, const std::array<Vec3, 9>& c) {
  lp::LinearProgram prog;
  for (const Vec3& u : dirs) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec3& ci : c) best = std::max(best, dot(ci, u));
    prog.add_variable("t", 0.0, lp::kInf, 1.0 / 6.0 + best);
  }
  std::vector<std::pair<std::size_t, double>> sum, sx, sy, sz;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    sum.emplace_back(k, 1.0);
    sx.emplace_back(k, dirs[k].x);
    sy.emplace_back(k, dirs[k].y);
    sz.emplace_back(k, dirs[k].z);
  }
  prog.add_equality(sum, 2.0, "trace");
  prog.add_equality(sx, 0.0, "x");
  prog.add_equality(sy, 0.0, "y");
  prog.add_equality(sz, 0.0, "z");
  const auto sol = lp::solve(prog);
  WeightFit fit;
  if (sol.status != lp::LpStatus::optimal) return fit;
  fit.feasible = true;
  fit.value = sol.value;
  fit.t = sol.x;
  return fit;
}

Povm povm_from(const std::vector<Vec3>& dirs, const std::vector<double>& t) {
  std::vector<Effect> effects;
  std::vector<double> alphas;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    if (t[k] <= 0.0) continue;
    effects.push_back(Effect::scaled_projector(t[k], dirs[k]));
    alphas.push_back(t[k]);
  }
  return Povm(std::move(effects), std::move(alphas));
}

}  // namespace

GuessingReport post_guess_bounds(const PartitionedEnsemble& ensemble, const PostGuessOptions& options) {
  const auto w = guessing_operators(ensemble);
  std::array<Vec3, 9> c{};
  for (std::size_t k = 0; k < 9; ++k) c[k] = w[k].vec;

  GuessingReport rep;

  // Y = y0 I + y . sigma dominates every W_ij iff y0 - 1/6 >= |y - c_ij|, so
  // the optimal certificate sits at the centre of the smallest ball around c.
  const Ball ball = enclosing_ball(std::vector<Vec3>(c.begin(), c.end()));
  const double slack = 1e-13;
  rep.dual_certificate = {1.0 / 6.0 + ball.radius + slack, ball.center};
  rep.min_dual_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& wij : w) {
    rep.min_dual_eigenvalue = std::min(rep.min_dual_eigenvalue, (rep.dual_certificate - wij).eigenvalues().first);
  }
  rep.dual_feasible = rep.min_dual_eigenvalue >= -1e-10;
  rep.p_post_upper = rep.dual_certificate.trace();

  // Explicit strategies: rank-one effects along candidate directions, with the
  // best weights for those directions, improved by random local moves.
  detail::Rng rng(options.seed);
  const auto k_max = static_cast<std::size_t>(std::max(options.max_outcomes, 4));
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<Vec3> best_dirs;
  std::vector<double> best_t;
  for (int restart = 0; restart < options.restarts; ++restart) {
    std::vector<Vec3> dirs;
    if (restart == 0) {
      for (const Vec3& ci : c) {
        const Vec3 d = ci - ball.center;
        if (norm(d) >= ball.radius - 1e-9 && norm(d) > 1e-12 && dirs.size() < k_max) dirs.push_back(d / norm(d));
      }
    }
    while (dirs.size() < k_max) dirs.push_back(rng.unit_vector());
    WeightFit fit = fit_weights(dirs, c);
    double step = 0.5;
    for (int it = 0; it < options.climb_iterations && step > 1e-7; ++it) {
      auto trial = dirs;
      const auto k = static_cast<std::size_t>(rng.uniform() * static_cast<double>(trial.size())) % trial.size();
      const Vec3 moved = trial[k] + rng.unit_vector() * step;
      trial[k] = moved / norm(moved);
      WeightFit next = fit_weights(trial, c);
      if (next.feasible && next.value > fit.value + 1e-15) {
        dirs = std::move(trial);
        fit = std::move(next);
      } else {
        step *= 0.95;
      }
    }
    if (fit.feasible && fit.value > best_value + 1e-12) {
      best_value = fit.value;
      best_dirs = dirs;
      best_t = fit.t;
    }
  }
  if (best_dirs.empty()) {
    rep.lower_witness = Povm({Effect::identity_fraction(1.0)});
  } else {
    rep.lower_witness = povm_from(best_dirs, best_t);
  }
  rep.p_post_lower = post_guess_value(ensemble, rep.lower_witness);
  return rep;
}

GuessingReport guessing_report(const Povm& first, const Povm& second, const PartitionedEnsemble& ensemble,
                               const PostGuessOptions& options) {
  GuessingReport rep = post_guess_bounds(ensemble, options);
  rep.p_prior = prior_guess(ensemble, first, second);
  rep.witness_margin = rep.p_prior - rep.p_post_upper;
  return rep;
}

double incompatibility_witness(const Povm& first, const Povm& second, const PartitionedEnsemble& ensemble) {
  PostGuessOptions quick;
  quick.restarts = 0;
  const GuessingReport rep = post_guess_bounds(ensemble, quick);
  return prior_guess(ensemble, first, second) - rep.p_post_upper;
}

}  // namespace pmgame
