#include "pmgame/quantum_opt.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <sstream>

#include "pmgame/errors.hpp"
#include "random.hpp"

namespace pmgame {

AlphaTriple::AlphaTriple(double a0, double a1, double a2) : values_{a0, a1, a2} {
  constexpr double tol = 1e-12;
  for (double a : values_) {
    if (!(a >= -tol && a <= 1.0 + tol)) {
      std::ostringstream msg;
      msg << "alpha component " << a << " outside [0,1]";
      throw ValidationError(msg.str());
    }
  }
  if (std::abs(a0 + a1 + a2 - 2.0) > tol) {
    std::ostringstream msg;
    msg << "alpha components sum to " << (a0 + a1 + a2) << ", expected 2";
    throw ValidationError(msg.str());
  }
  for (double& a : values_) a = std::clamp(a, 0.0, 1.0);
}

AlphaTriple AlphaTriple::symmetric(double alpha0) {
  const double rest = (2.0 - alpha0) / 2.0;
  return AlphaTriple(alpha0, rest, rest);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

GameStrategy analytic_optimal_strategy() {
  constexpr double third = 2.0 * std::numbers::pi / 3.0;
  std::array<DensityState, 3> a0{};
  for (int x = 0; x < 3; ++x) a0[static_cast<std::size_t>(x)] = DensityState::from_bloch(xz_direction(third * x));
  GameStrategy s;
  s.preps = complete_preparations(a0);
  std::array<double, 3> alphas{2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0};
  std::array<Vec3, 3> dirs{};
  for (int b = 0; b < 3; ++b) {
    // B_b = (A_b - A_{b+1}) / sqrt(3) = cos(t) sigma_z - sin(t) sigma_x with
    // t = (2 pi / 3)(1/4 - b) for the trine A_x above.
    const double theta = third * (0.25 - b);
    dirs[static_cast<std::size_t>(b)] = xz_direction(-theta);
  }
  s.povm = Povm::from_weighted_directions(alphas, dirs);
  return s;
}

namespace detail {

namespace {

Vec3 unit_or_zero(const Vec3& v) {
  const double r = norm(v);
  return r > 0.0 ? v / r : Vec3{};
}

// g_b = sum of Bloch vectors of the two inputs whose winning answer is b.
std::array<Vec3, 3> outcome_gradients(const std::array<Vec3, 3>& a0) {
  const auto a1 = completed_a1_blochs(a0);
  std::array<Vec3, 3> g{};
  for (int x = 0; x < 3; ++x) {
    g[static_cast<std::size_t>(target_outcome(x, 0))] += a0[static_cast<std::size_t>(x)];
    g[static_cast<std::size_t>(target_outcome(x, 1))] += a1[static_cast<std::size_t>(x)];
  }
  return g;
}

}  // namespace

std::array<Vec3, 3> best_povm_directions(const std::array<double, 3>& alpha, const std::array<Vec3, 3>& g) {
  std::array<Vec3, 3> v{};
  std::array<bool, 3> active{};
  double total = 0.0;
  for (std::size_t b = 0; b < 3; ++b) {
    active[b] = alpha[b] > 0.0;
    if (active[b]) total += alpha[b];
  }
  constexpr double merge_tol = 1e-13;

  // Vertex case: the Weber point sits on some g_k when the pull of the others
  // does not exceed the weight gathered at g_k.
  for (std::size_t k = 0; k < 3; ++k) {
    if (!active[k]) continue;
    double weight = 0.0;
    Vec3 pull{};
    std::array<bool, 3> at_vertex{};
    for (std::size_t b = 0; b < 3; ++b) {
      if (!active[b]) continue;
      const Vec3 d = g[b] - g[k];
      if (norm(d) <= merge_tol) {
        at_vertex[b] = true;
        weight += alpha[b];
      } else {
        pull += alpha[b] * unit_or_zero(d);
      }
    }
    if (norm(pull) <= weight * (1.0 + 1e-12)) {
      for (std::size_t b = 0; b < 3; ++b) {
        if (!active[b]) continue;
        v[b] = at_vertex[b] ? -pull / weight : unit_or_zero(g[b] - g[k]);
      }
      const double longest = std::max({norm(v[0]), norm(v[1]), norm(v[2]), 1.0});
      for (auto& vb : v) vb = vb / longest;
      return v;
    }
  }

  // Interior case: Weiszfeld iteration from the weighted centroid.
  Vec3 l{};
  for (std::size_t b = 0; b < 3; ++b) {
    if (active[b]) l += alpha[b] * g[b];
  }
  l = l / total;
  for (int it = 0; it < 20000; ++it) {
    Vec3 num{};
    double den = 0.0;
    for (std::size_t b = 0; b < 3; ++b) {
      if (!active[b]) continue;
      const double d = std::max(norm(g[b] - l), 1e-300);
      num += (alpha[b] / d) * g[b];
      den += alpha[b] / d;
    }
    const Vec3 next = num / den;
    const double step = norm(next - l);
    l = next;
    if (step <= 1e-16 * (1.0 + norm(l))) break;
  }
  Vec3 residual{};
  for (std::size_t b = 0; b < 3; ++b) {
    if (!active[b]) continue;
    v[b] = unit_or_zero(g[b] - l);
    residual += alpha[b] * v[b];
  }
  for (std::size_t b = 0; b < 3; ++b) {
    if (active[b]) v[b] -= residual / total;
  }
  const double longest = std::max({norm(v[0]), norm(v[1]), norm(v[2]), 1.0});
  for (auto& vb : v) vb = vb / longest;
  return v;
}

double game_value(const std::array<double, 3>& alpha, const std::array<Vec3, 3>& a0, const std::array<Vec3, 3>& v) {
  const auto g = outcome_gradients(a0);
  double total = 0.0;
  for (std::size_t b = 0; b < 3; ++b) total += 0.5 * alpha[b] * (2.0 + dot(g[b], v[b]));
  return total / 6.0;
}

}  // namespace detail

namespace {

using Blochs = std::array<Vec3, 3>;

// Coefficients of b_y in r_x1 = (2/3) sum_y b_y - b_{x+2}; unit Euclidean norm.
double a1_coefficient(int x, int y) { return 2.0 / 3.0 - (y == mod3(x + 2) ? 1.0 : 0.0); }

// Projection onto {|b_y| <= 1}.
void project_a0(Blochs& b, int y) {
  auto& v = b[static_cast<std::size_t>(y)];
  const double r = norm(v);
  if (r > 1.0) v = v / r;
}

// Projection onto {|r_x1| <= 1}.
void project_a1(Blochs& b, int x) {
  Vec3 w{};
  for (int y = 0; y < 3; ++y) w += a1_coefficient(x, y) * b[static_cast<std::size_t>(y)];
  const double r = norm(w);
  if (r <= 1.0) return;
  const Vec3 shift = w * ((r - 1.0) / r);
  for (int y = 0; y < 3; ++y) b[static_cast<std::size_t>(y)] -= a1_coefficient(x, y) * shift;
}

double max_constraint_norm(const Blochs& b) {
  double worst = 0.0;
  for (const auto& v : b) worst = std::max(worst, norm(v));
  for (const auto& v : completed_a1_blochs(b)) worst = std::max(worst, norm(v));
  return worst;
}

double distance(const Blochs& a, const Blochs& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < 3; ++i) d = std::max(d, max_abs(a[i] - b[i]));
  return d;
}

// Dykstra's alternating projections onto the six ball constraints, followed by
// a uniform rescale that makes the point exactly feasible.
Blochs project_feasible(const Blochs& start) {
  Blochs x = start;
  std::array<Blochs, 6> increments{};
  for (int sweep = 0; sweep < 2000; ++sweep) {
    const Blochs before = x;
    for (int set = 0; set < 6; ++set) {
      Blochs shifted = x;
      auto& inc = increments[static_cast<std::size_t>(set)];
      for (std::size_t i = 0; i < 3; ++i) shifted[i] += inc[i];
      Blochs projected = shifted;
      if (set < 3) {
        project_a0(projected, set);
      } else {
        project_a1(projected, set - 3);
      }
      for (std::size_t i = 0; i < 3; ++i) inc[i] = shifted[i] - projected[i];
      x = projected;
    }
    if (distance(before, x) <= 1e-14) break;
  }
  const double worst = max_constraint_norm(x);
  if (worst > 1.0) {
    for (auto& v : x) v = v / worst;
  }
  return x;
}

// Maximizes the (linear) success probability over feasible a=0 Bloch vectors
// for a fixed POVM by projected ascent.
Blochs improve_preparations(const std::array<double, 3>& alpha, const Blochs& v, Blochs b) {
  Blochs w{};
  Vec3 w_total{};
  for (std::size_t t = 0; t < 3; ++t) {
    w[t] = alpha[t] * v[t];
    w_total += w[t];
  }
  Blochs grad{};
  for (int y = 0; y < 3; ++y) {
    grad[static_cast<std::size_t>(y)] =
        w[static_cast<std::size_t>(y)] + (2.0 / 3.0) * w_total - w[static_cast<std::size_t>(mod3(y + 2))];
  }
  constexpr double step = 1.0;
  for (int it = 0; it < 500; ++it) {
    Blochs moved = b;
    for (std::size_t i = 0; i < 3; ++i) moved[i] += step * grad[i];
    const Blochs next = project_feasible(moved);
    const double change = distance(next, b);
    b = next;
    if (change <= 1e-13) break;
  }
  return b;
}

std::array<Vec3, 3> povm_for(const std::array<double, 3>& alpha, const Blochs& a0) {
  return detail::best_povm_directions(alpha, detail::outcome_gradients(a0));
}

struct RestartOutcome {
  double value = 0.0;
  Blochs a0{};
  Blochs v{};
  bool converged = false;
};

RestartOutcome run_restart(const std::array<double, 3>& alpha, std::uint64_t seed, const OptimizerOptions& opt) {
  detail::Rng rng(seed);
  Blochs a0{};
  for (auto& b : a0) b = rng.in_ball();
  a0 = project_feasible(a0);
  Blochs v = povm_for(alpha, a0);
  double value = detail::game_value(alpha, a0, v);

  RestartOutcome out;
  for (int round = 0; round < opt.max_rounds; ++round) {
    const Blochs a0_next = improve_preparations(alpha, v, a0);
    const Blochs v_next = povm_for(alpha, a0_next);
    const double next = detail::game_value(alpha, a0_next, v_next);
    const double gain = next - value;
    if (gain > 0.0) {
      a0 = a0_next;
      v = v_next;
      value = next;
    }
    if (gain < opt.tol) {
      out.converged = true;
      break;
    }
  }
  out.value = value;
  out.a0 = a0;
  out.v = v;
  return out;
}

GameStrategy build_strategy(const std::array<double, 3>& alpha, const Blochs& a0, const Blochs& v) {
  std::array<DensityState, 3> states{};
  for (std::size_t x = 0; x < 3; ++x) states[x] = DensityState::from_bloch(a0[x]);
  GameStrategy s;
  s.preps = complete_preparations(states);
  s.povm = Povm::from_weighted_directions(alpha, v);
  return s;
}

}  // namespace

OptimizationResult optimize_quantum(const AlphaTriple& alpha, const OptimizerOptions& options) {
  if (options.restarts < 1) throw ValidationError("restarts must be positive");
  const auto& a = alpha.values();
  OptimizationResult result;
  double best = -std::numeric_limits<double>::infinity();
  double worst = std::numeric_limits<double>::infinity();
  RestartOutcome winner;
  for (int r = 0; r < options.restarts; ++r) {
    const RestartOutcome out = run_restart(a, derive_seed(options.seed, static_cast<std::uint64_t>(r)), options);
    worst = std::min(worst, out.value);
    if (out.value > best + 1e-12) {
      best = out.value;
      winner = out;
    }
  }
  result.strategy = build_strategy(a, winner.a0, winner.v);
  result.value = success_probability(result.strategy);
  result.povm_bloch = winner.v;
  result.restarts_used = options.restarts;
  result.converged = winner.converged;
  result.best_gap = best - worst;
  return result;
}

std::vector<CurvePoint> quantum_curve(std::span<const double> grid, const OptimizerOptions& options) {
  std::vector<CurvePoint> curve;
  curve.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    OptimizerOptions point = options;
    point.seed = derive_seed(options.seed, i);
    curve.push_back({grid[i], optimize_quantum(AlphaTriple::symmetric(grid[i]), point).value});
  }
  return curve;
}

double fixed_trine_value(const AlphaTriple& alpha) {
  const GameStrategy trine = analytic_optimal_strategy();
  Blochs a0{};
  for (int x = 0; x < 3; ++x) a0[static_cast<std::size_t>(x)] = trine.preps[prep_index(x, 0)].bloch();
  return detail::game_value(alpha.values(), a0, povm_for(alpha.values(), a0));
}

}  // namespace pmgame
