#include <algorithm>
#include <cmath>
#include <numbers>

#include "pmgame/errors.hpp"
#include "pmgame/measurement_classicality.hpp"

namespace pmgame {

namespace {

Vec3 unit_axis(const Vec3& d) {
  const double n = norm(d);
  if (n <= 1e-12) throw DomainError("basis direction must be nonzero");
  return d / n;
}

Vec3 orthogonal_part(const Vec3& v, const Vec3& axis) { return v - axis * dot(v, axis); }

}  // namespace

DensityState dephase(const DensityState& state, const Vec3& basis_direction) {
  const Vec3 n = unit_axis(basis_direction);
  return state_from_bloch(n * dot(state.bloch(), n));
}

FreeReport is_free_povm(const Povm& povm, const Vec3& basis_direction, double tol) {
  const Vec3 n = unit_axis(basis_direction);
  FreeReport rep;
  for (std::size_t b = 0; b < povm.size(); ++b) {
    const Vec3 perp = orthogonal_part(povm[b].vec, n);
    const double size = norm(perp);
    if (size > rep.witness_value) {
      rep.witness_value = size;
      rep.witness_effect = static_cast<int>(b);
      rep.witness_state = state_from_bloch(perp / size);
    }
  }
  rep.free = rep.witness_value <= tol;
  if (rep.free) {
    rep.witness_state = DensityState::maximally_mixed();
    rep.witness_effect = -1;
  }
  return rep;
}

AnyBasisReport is_free_in_any_basis(const Povm& povm, double tol) {
  AnyBasisReport rep;
  const auto& e = povm.effects();
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      rep.max_cross = std::max(rep.max_cross, norm(cross(e[i].vec, e[j].vec)));
    }
  }
  rep.max_commutator_norm = 2.0 * rep.max_cross;
  rep.free = rep.max_cross <= tol;
  if (rep.free) {
    const auto longest = std::max_element(e.begin(), e.end(),
                                          [](const Effect& a, const Effect& b) { return norm(a.vec) < norm(b.vec); });
    Vec3 axis{0, 0, 1};
    if (longest != e.end() && norm(longest->vec) > 1e-12) axis = longest->vec / norm(longest->vec);
    rep.axis = axis;
    rep.diagonal_in_axis = is_free_povm(povm, axis, tol).free;
  }
  return rep;
}

Vec3 trine_basis_direction() { return xz_direction(-std::numbers::pi / 6.0); }

Povm degenerate_povm(int alpha0, const Vec3& axis) {
  const Vec3 n = unit_axis(axis);
  if (alpha0 == 1) {
    return Povm({Effect::scaled_projector(1.0, n), Effect::scaled_projector(0.5, -n), Effect::scaled_projector(0.5, -n)},
                std::vector<double>{1.0, 0.5, 0.5});
  }
  if (alpha0 == 0) {
    return Povm({Effect{}, Effect::scaled_projector(1.0, n), Effect::scaled_projector(1.0, -n)},
                std::vector<double>{0.0, 1.0, 1.0});
  }
  throw DomainError("degenerate POVMs exist only for alpha0 in {0, 1}");
}

}  // namespace pmgame
