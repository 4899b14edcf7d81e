#include "pmgame/qubit.hpp"

#include <algorithm>
#include <sstream>

#include "pmgame/errors.hpp"

namespace pmgame {

double max_abs(const Vec3& a) { return std::max({std::abs(a.x), std::abs(a.y), std::abs(a.z)}); }

Vec3 xz_direction(double theta) { return {std::sin(theta), 0.0, std::cos(theta)}; }

Vec3 rotate_xz(const Vec3& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  // Maps xz_direction(t) to xz_direction(t + angle).
  return {c * v.x + s * v.z, v.y, c * v.z - s * v.x};
}

std::pair<double, double> PauliOperator::eigenvalues() const {
  const double r = norm(vec);
  return {scalar - r, scalar + r};
}

double max_abs_diff(const PauliOperator& a, const PauliOperator& b) {
  return std::max(std::abs(a.scalar - b.scalar), max_abs(a.vec - b.vec));
}

DensityState DensityState::from_bloch(const Vec3& v, double tol) {
  const double r = norm(v);
  if (!(r <= 1.0 + tol)) {
    std::ostringstream msg;
    msg << "invalid state: Bloch vector length " << r << " exceeds 1";
    throw InvalidStateError(msg.str());
  }
  return DensityState(v);
}

Vec3 Effect::direction() const {
  if (weight == 0.0) return {};
  return vec / weight;
}

bool Effect::is_valid(double tol) const {
  const auto [lo, hi] = effect_eigenvalues(*this);
  return lo >= -tol && hi <= 1.0 + tol;
}

std::pair<double, double> effect_eigenvalues(const Effect& e) { return e.as_operator().eigenvalues(); }

PovmReport validate_povm(std::span<const Effect> effects, double tol) {
  PovmReport report;
  report.min_eigenvalue = effects.empty() ? 0.0 : 1.0;
  report.max_eigenvalue = 0.0;
  PauliOperator sum;
  for (const auto& e : effects) {
    const auto [lo, hi] = effect_eigenvalues(e);
    report.min_eigenvalue = std::min(report.min_eigenvalue, lo);
    report.max_eigenvalue = std::max(report.max_eigenvalue, hi);
    if (lo < -tol || hi > 1.0 + tol) report.effects_psd = false;
    sum += e.as_operator();
  }
  report.completeness_residual = max_abs_diff(sum, PauliOperator{1.0, {}});
  report.pass = report.effects_psd && report.completeness_residual <= tol;
  return report;
}

Povm Povm::from_weighted_directions(std::span<const double> alphas, std::span<const Vec3> directions) {
  if (alphas.size() != directions.size()) {
    throw ValidationError("alphas and directions differ in length");
  }
  std::vector<Effect> effects;
  effects.reserve(alphas.size());
  for (std::size_t b = 0; b < alphas.size(); ++b) {
    effects.push_back(Effect::scaled_projector(alphas[b], directions[b]));
  }
  return Povm(std::move(effects), std::vector<double>(alphas.begin(), alphas.end()));
}

std::vector<double> Povm::probabilities(const DensityState& rho) const {
  std::vector<double> p;
  p.reserve(effects_.size());
  for (const auto& e : effects_) p.push_back(born_probability(rho, e));
  return p;
}

}  // namespace pmgame
