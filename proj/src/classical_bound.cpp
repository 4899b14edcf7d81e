#include "pmgame/classical_bound.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmgame/errors.hpp"
#include "pmgame/game.hpp"

namespace pmgame {

namespace {

double p_at(const ClassicalStrategy& s, int x, int a) { return s.p[prep_index(x, a)]; }

bool is_distribution(const std::array<double, 3>& d, double tol) {
  double total = 0.0;
  for (double v : d) {
    if (v < -tol || v > 1.0 + tol) return false;
    total += v;
  }
  return std::abs(total - 1.0) <= tol;
}

}  // namespace

ClassicalConstraintReport check_classical_constraints(const ClassicalStrategy& st, double tol) {
  ClassicalConstraintReport rep;
  double sum0 = 0.0;
  double sum1 = 0.0;
  for (int x = 0; x < 3; ++x) {
    sum0 += p_at(st, x, 0);
    sum1 += p_at(st, x, 1);
  }
  rep.input_parity_residual = std::abs(sum0 - sum1);
  rep.kappa1 = sum0 / 3.0;
  // Inputs (x,0) and (x+1,1) share the class x + 2a.
  std::array<double, 3> pair{};
  for (int x = 0; x < 3; ++x) pair[static_cast<std::size_t>(x)] = p_at(st, x, 0) + p_at(st, mod3(x + 1), 1);
  rep.partition_residual = std::max({std::abs(pair[0] - pair[1]), std::abs(pair[1] - pair[2]), std::abs(pair[0] - pair[2])});
  rep.kappa2 = pair[0] / 2.0;
  bool p_ok = std::all_of(st.p.begin(), st.p.end(), [&](double v) { return v >= -tol && v <= 1.0 + tol; });
  rep.distributions_valid = p_ok && is_distribution(st.s, tol) && is_distribution(st.r, tol);
  rep.pass = rep.distributions_valid && rep.input_parity_residual <= tol && rep.partition_residual <= tol;
  return rep;
}

double classical_value(const ClassicalStrategy& st, double tol) {
  const auto rep = check_classical_constraints(st, tol);
  if (!rep.pass) {
    std::ostringstream msg;
    msg << "classical strategy violates constraints: input parity residual " << rep.input_parity_residual
        << ", partition residual " << rep.partition_residual
        << (rep.distributions_valid ? "" : ", invalid probabilities");
    throw ValidationError(msg.str());
  }
  double total = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int x = 0; x < 3; ++x) {
      const auto b = static_cast<std::size_t>(target_outcome(x, a));
      const double p = p_at(st, x, a);
      total += p * st.s[b] + (1.0 - p) * st.r[b];
    }
  }
  return total / 6.0;
}

lp::LinearProgram build_classical_lp(int s_answer, int r_answer) {
  if (s_answer < 0 || s_answer > 2 || r_answer < 0 || r_answer > 2) throw ValidationError("answer out of range");
  lp::LinearProgram prog;
  for (int a = 0; a < 2; ++a) {
    for (int x = 0; x < 3; ++x) {
      const int b = target_outcome(x, a);
      // p s_b + (1 - p) r_b with point-mass decodings.
      const double win0 = b == s_answer ? 1.0 : 0.0;
      const double win1 = b == r_answer ? 1.0 : 0.0;
      prog.add_variable("p" + std::to_string(x) + std::to_string(a), 0.0, 1.0, (win0 - win1) / 6.0);
      prog.objective_offset += win1 / 6.0;
    }
  }
  auto p = [](int x, int a) { return prep_index(x, a); };
  prog.add_equality({{p(0, 0), 1}, {p(1, 0), 1}, {p(2, 0), 1}, {p(0, 1), -1}, {p(1, 1), -1}, {p(2, 1), -1}}, 0.0,
                    "input_parity");
  prog.add_equality({{p(0, 0), 1}, {p(1, 1), 1}, {p(0, 1), -1}, {p(2, 0), -1}}, 0.0, "partition_01");
  prog.add_equality({{p(0, 1), 1}, {p(2, 0), 1}, {p(1, 0), -1}, {p(2, 1), -1}}, 0.0, "partition_12");
  return prog;
}

ClassicalOptimum optimize_classical(bool equal_decodings_only) {
  ClassicalOptimum best;
  best.value = -1.0;
  for (int sa = 0; sa < 3; ++sa) {
    for (int ra = 0; ra < 3; ++ra) {
      const auto k = static_cast<std::size_t>(3 * sa + ra);
      if (equal_decodings_only && sa != ra) {
        best.per_decoding[k] = std::nan("");
        continue;
      }
      const auto sol = lp::solve(build_classical_lp(sa, ra));
      if (sol.status != lp::LpStatus::optimal) throw Error("classical LP not optimal");
      best.per_decoding[k] = sol.value;
      if (sol.value > best.value + 1e-12) {
        best.value = sol.value;
        ClassicalStrategy w;
        std::copy(sol.x.begin(), sol.x.end(), w.p.begin());
        w.s[static_cast<std::size_t>(sa)] = 1.0;
        w.r[static_cast<std::size_t>(ra)] = 1.0;
        best.witness = w;
      }
    }
  }
  return best;
}

std::vector<std::uint8_t> feasible_deterministic_encodings() {
  std::vector<std::uint8_t> out;
  for (unsigned mask = 0; mask < 64; ++mask) {
    ClassicalStrategy st;
    for (std::size_t k = 0; k < 6; ++k) st.p[k] = (mask >> k) & 1U ? 1.0 : 0.0;
    st.s = {1.0, 0.0, 0.0};
    st.r = {1.0, 0.0, 0.0};
    if (check_classical_constraints(st, 0.0).pass) out.push_back(static_cast<std::uint8_t>(mask));
  }
  return out;
}

ClassicalStrategy relabel(const ClassicalStrategy& st, int shift) {
  ClassicalStrategy out;
  for (int a = 0; a < 2; ++a) {
    for (int x = 0; x < 3; ++x) out.p[prep_index(mod3(x + shift), a)] = st.p[prep_index(x, a)];
  }
  for (int b = 0; b < 3; ++b) {
    out.s[static_cast<std::size_t>(mod3(b + shift))] = st.s[static_cast<std::size_t>(b)];
    out.r[static_cast<std::size_t>(mod3(b + shift))] = st.r[static_cast<std::size_t>(b)];
  }
  return out;
}

}  // namespace pmgame
