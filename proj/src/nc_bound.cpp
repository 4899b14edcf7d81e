#include "pmgame/nc_bound.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "pmgame/errors.hpp"

namespace pmgame {

namespace {

// Outcomes supported in each region.
constexpr std::array<std::array<int, 2>, 3> kRegionSupport{{{0, 2}, {0, 1}, {1, 2}}};
constexpr char kRegionLetter[3] = {'A', 'B', 'C'};

std::string mass_name(int region, int x, int a) {
  return std::string(1, kRegionLetter[region]) + std::to_string(x) + std::to_string(a);
}

void check_pattern(const ResponsePattern& pattern) {
  for (int r = 0; r < 3; ++r) {
    const auto& s = kRegionSupport[static_cast<std::size_t>(r)];
    const int hi = pattern[static_cast<std::size_t>(r)];
    if (hi != s[0] && hi != s[1]) throw ValidationError("response pattern names an unsupported outcome");
  }
}

}  // namespace

std::size_t nc_mass_index(int region, int x, int a) { return static_cast<std::size_t>(6 * region + 2 * x + a); }
std::size_t nc_p_index(int i) { return static_cast<std::size_t>(18 + i); }
std::size_t nc_q_index(int i) { return static_cast<std::size_t>(21 + i); }

std::array<ResponsePattern, 8> all_response_patterns() {
  std::array<ResponsePattern, 8> out{};
  std::size_t k = 0;
  for (int h0 : kRegionSupport[0]) {
    for (int h1 : kRegionSupport[1]) {
      for (int h2 : kRegionSupport[2]) out[k++] = {h0, h1, h2};
    }
  }
  return out;
}

std::vector<double> nc_uniform_point() { return std::vector<double>(24, 1.0 / 3.0); }

lp::LinearProgram build_nc_lp(const AlphaTriple& alpha, const ResponsePattern& pattern) {
  check_pattern(pattern);
  lp::LinearProgram prog;
  for (int r = 0; r < 3; ++r) {
    for (int x = 0; x < 3; ++x) {
      for (int a = 0; a < 2; ++a) prog.add_variable(mass_name(r, x, a), 0.0, 1.0);
    }
  }
  for (int i = 0; i < 3; ++i) prog.add_variable("p" + std::to_string(i), 0.0, 1.0);
  for (int i = 0; i < 3; ++i) prog.add_variable("q" + std::to_string(i), 0.0, 1.0);

  // Objective: (1/6) sum over regions and inputs of mass * response(x + a).
  for (int r = 0; r < 3; ++r) {
    const int hi = pattern[static_cast<std::size_t>(r)];
    const auto& support = kRegionSupport[static_cast<std::size_t>(r)];
    const int lo = support[0] == hi ? support[1] : support[0];
    const double hi_response = alpha[static_cast<std::size_t>(hi)];
    for (int x = 0; x < 3; ++x) {
      for (int a = 0; a < 2; ++a) {
        const int b = target_outcome(x, a);
        double response = 0.0;
        if (b == hi) response = hi_response;
        if (b == lo) response = 1.0 - hi_response;
        prog.objective[nc_mass_index(r, x, a)] = response / 6.0;
      }
    }
  }

  auto A = [](int x, int a) { return nc_mass_index(0, x, a); };
  auto B = [](int x, int a) { return nc_mass_index(1, x, a); };
  auto C = [](int x, int a) { return nc_mass_index(2, x, a); };
  auto p = nc_p_index;
  auto q = nc_q_index;

  // Pairwise-mixture (gamma_1) constraints, as printed, with p moved to the left.
  prog.add_equality({{A(0, 0), 1}, {A(1, 1), 1}, {p(0), -2}}, 0.0, "g1_A00+A11=2p0");
  prog.add_equality({{A(2, 1), 1}, {B(2, 1), 1}, {C(1, 0), -1}, {p(2), 2}}, 1.0, "g1_A21+B21-C10=1-2p2");
  prog.add_equality({{A(2, 0), 1}, {B(0, 1), -1}, {C(2, 0), 1}, {p(1), 2}}, 1.0, "g1_A20-B01+C20=1-2p1");
  prog.add_equality({{B(1, 0), 1}, {B(2, 1), 1}, {p(1), -2}}, 0.0, "g1_B10+B21=2p1");
  prog.add_equality({{A(0, 0), 1}, {B(0, 0), 1}, {C(1, 1), -1}, {p(2), 2}}, 1.0, "g1_A00+B00-C11=1-2p2");
  prog.add_equality({{A(2, 0), -1}, {B(0, 1), 1}, {C(0, 1), 1}, {p(0), 2}}, 1.0, "g1_-A20+B01+C01=1-2p0");
  prog.add_equality({{C(2, 0), 1}, {C(0, 1), 1}, {p(2), -2}}, 0.0, "g1_C20+C01=2p2");
  prog.add_equality({{A(1, 1), 1}, {B(0, 0), -1}, {C(1, 1), 1}, {p(1), 2}}, 1.0, "g1_A11-B00+C11=1-2p1");
  prog.add_equality({{A(2, 1), -1}, {B(1, 0), 1}, {C(1, 0), 1}, {p(0), 2}}, 1.0, "g1_-A21+B10+C10=1-2p0");

  // Parity-mixture (gamma_2) constraints, as printed.
  prog.add_equality({{A(0, 0), 1}, {A(2, 0), 1}, {B(1, 0), -1}, {C(1, 0), -1}, {q(0), -3}}, -1.0,
                    "g2_A00+A20-B10-C10=3q0-1");
  prog.add_equality({{A(1, 1), 1}, {A(2, 1), 1}, {B(0, 1), -1}, {C(0, 1), -1}, {q(0), -3}}, -1.0,
                    "g2_A11+A21-B01-C01=3q0-1");
  prog.add_equality({{B(0, 0), 1}, {B(1, 0), 1}, {C(2, 0), -1}, {A(2, 0), -1}, {q(1), -3}}, -1.0,
                    "g2_B00+B10-C20-A20=3q1-1");
  prog.add_equality({{B(2, 1), 1}, {B(0, 1), 1}, {A(1, 1), -1}, {C(1, 1), -1}, {q(1), -3}}, -1.0,
                    "g2_B21+B01-A11-C11=3q1-1");
  prog.add_equality({{C(1, 0), 1}, {C(2, 0), 1}, {B(0, 0), -1}, {A(0, 0), -1}, {q(2), -3}}, -1.0,
                    "g2_C10+C20-B00-A00=3q2-1");
  prog.add_equality({{C(0, 1), 1}, {C(2, 1), 1}, {B(1, 1), -1}, {A(1, 1), -1}, {q(2), -3}}, -1.0,
                    "g2_C01+C21-B11-A11=3q2-1");

  for (int x = 0; x < 3; ++x) {
    for (int a = 0; a < 2; ++a) {
      prog.add_equality({{A(x, a), 1}, {B(x, a), 1}, {C(x, a), 1}}, 1.0,
                        "norm_" + std::to_string(x) + std::to_string(a));
    }
  }
  prog.add_equality({{p(0), 1}, {p(1), 1}, {p(2), 1}}, 1.0, "sum_p");
  prog.add_equality({{q(0), 1}, {q(1), 1}, {q(2), 1}}, 1.0, "sum_q");

  // Transcription self-check: the symmetric point satisfies every row.
  const auto u = nc_uniform_point();
  std::ostringstream bad;
  for (std::size_t i = 0; i < prog.num_equalities(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) s += prog.eq_matrix[i][j] * u[j];
    if (std::abs(s - prog.eq_rhs[i]) > 1e-12) bad << ' ' << prog.row_names[i];
  }
  if (!bad.str().empty()) throw ValidationError("uniform point violates:" + bad.str());
  return prog;
}

double nc_value(const AlphaTriple& alpha, const ResponsePattern& pattern) {
  const lp::LpSolution sol = lp::solve(build_nc_lp(alpha, pattern));
  if (sol.status != lp::LpStatus::optimal) {
    throw Error(std::string("noncontextual LP not optimal: ") + lp::to_string(sol.status));
  }
  return sol.value;
}

std::vector<NcPoint> nc_curve(std::span<const double> grid) {
  std::vector<NcPoint> out;
  out.reserve(grid.size());
  for (double a0 : grid) out.push_back({a0, nc_value(AlphaTriple::symmetric(a0))});
  return out;
}

namespace {

struct Sweep {
  double best = -1.0;
  double a0 = 0.0;
  double a1 = 0.0;
  int solves = 0;
};

void sweep_box(Sweep& s, double lo0, double hi0, double lo1, double hi1, double step) {
  const int n0 = static_cast<int>(std::floor((hi0 - lo0) / step + 1e-9));
  const int n1 = static_cast<int>(std::floor((hi1 - lo1) / step + 1e-9));
  for (int i = 0; i <= n0; ++i) {
    const double a0 = lo0 + i * step;
    for (int j = 0; j <= n1; ++j) {
      const double a1 = lo1 + j * step;
      const double a2 = 2.0 - a0 - a1;
      if (a0 < -1e-12 || a0 > 1 + 1e-12 || a1 < -1e-12 || a1 > 1 + 1e-12 || a2 < -1e-9 || a2 > 1 + 1e-9) continue;
      const double c0 = std::clamp(a0, 0.0, 1.0);
      const double c1 = std::clamp(a1, 0.0, 1.0);
      const double c2 = std::clamp(2.0 - c0 - c1, 0.0, 1.0);
      if (std::abs(c0 + c1 + c2 - 2.0) > 1e-12) continue;
      const double v = nc_value(AlphaTriple(c0, c1, c2));
      ++s.solves;
      if (v > s.best + 1e-12) {
        s.best = v;
        s.a0 = c0;
        s.a1 = c1;
      }
    }
  }
}

}  // namespace

NcGlobalMax nc_global_max(double step, double refine_step) {
  if (!(step > 0.0) || !(refine_step > 0.0)) throw ValidationError("grid steps must be positive");
  Sweep s;
  sweep_box(s, 0.0, 1.0, 0.0, 1.0, step);
  double radius = step;
  while (radius > refine_step * (1.0 + 1e-9)) {
    const double fine = std::max(radius / 10.0, refine_step);
    sweep_box(s, s.a0 - radius, s.a0 + radius, s.a1 - radius, s.a1 + radius, fine);
    radius = fine;
  }
  return {s.best, {s.a0, s.a1, 2.0 - s.a0 - s.a1}, s.solves};
}

AssignmentRobustness assignment_robustness(const AlphaTriple& alpha) {
  AssignmentRobustness out;
  const auto patterns = all_response_patterns();
  out.max_value = -1.0;
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    out.values[k] = nc_value(alpha, patterns[k]);
    out.max_value = std::max(out.max_value, out.values[k]);
    if (patterns[k] == kCyclicPattern) out.cyclic_value = out.values[k];
  }
  out.cyclic_is_max = out.cyclic_value >= out.max_value - 1e-9;
  return out;
}

}  // namespace pmgame
