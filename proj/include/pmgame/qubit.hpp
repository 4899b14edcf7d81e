#pragma once

// Real Pauli-coordinate algebra for qubit states, effects and POVMs.
//
// Every Hermitian 2x2 operator is stored as O = scalar * I + vec . sigma,
// with sigma = (sigma_x, sigma_y, sigma_z). For a density operator the
// Bloch vector b gives scalar = 1/2 and vec = b/2. Effects are stored with
// their identity weight w and Pauli vector directly, so Tr[rho E] = w + vec . b.

#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace pmgame {

inline constexpr double kDefaultTol = 1e-9;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
double max_abs(const Vec3& a);

/// Unit vector in the xz-plane at polar angle theta from +z towards +x:
/// (sin theta, 0, cos theta). This is the Bloch vector of
/// (I + cos(theta) sigma_z + sin(theta) sigma_x) / 2.
Vec3 xz_direction(double theta);

/// Rotation by `angle` about the y axis, i.e. within the xz-plane.
Vec3 rotate_xz(const Vec3& v, double angle);

struct PauliOperator {
  double scalar = 0.0;
  Vec3 vec{};

  double trace() const { return 2.0 * scalar; }
  /// Ascending pair (scalar - |vec|, scalar + |vec|).
  std::pair<double, double> eigenvalues() const;

  PauliOperator& operator+=(const PauliOperator& o) {
    scalar += o.scalar;
    vec += o.vec;
    return *this;
  }
  PauliOperator& operator-=(const PauliOperator& o) {
    scalar -= o.scalar;
    vec -= o.vec;
    return *this;
  }
  friend PauliOperator operator+(PauliOperator a, const PauliOperator& b) { return a += b; }
  friend PauliOperator operator-(PauliOperator a, const PauliOperator& b) { return a -= b; }
  friend PauliOperator operator*(double s, const PauliOperator& a) { return {s * a.scalar, s * a.vec}; }
};

/// Largest coordinate-wise deviation between two operators.
double max_abs_diff(const PauliOperator& a, const PauliOperator& b);

/// Qubit density operator, (I + bloch . sigma) / 2 with |bloch| <= 1.
class DensityState {
 public:
  DensityState() = default;

  /// Throws InvalidStateError when |v| > 1 + tol. Vectors within tolerance
  /// outside the ball are kept as given.
  static DensityState from_bloch(const Vec3& v, double tol = kDefaultTol);
  static DensityState maximally_mixed() { return DensityState{}; }

  const Vec3& bloch() const { return bloch_; }
  PauliOperator as_operator() const { return {0.5, bloch_ * 0.5}; }
  bool is_pure(double tol = 1e-12) const { return std::abs(norm(bloch_) - 1.0) <= tol; }
  std::pair<double, double> eigenvalues() const { return as_operator().eigenvalues(); }

 private:
  explicit DensityState(const Vec3& v) : bloch_(v) {}
  Vec3 bloch_{};
};

inline DensityState state_from_bloch(const Vec3& v, double tol = kDefaultTol) {
  return DensityState::from_bloch(v, tol);
}

/// POVM element w * I + vec . sigma.
struct Effect {
  double weight = 0.0;
  Vec3 vec{};

  /// alpha * (I + n . sigma) / 2; a scaled projector when |n| = 1.
  static Effect scaled_projector(double alpha, const Vec3& n) { return {0.5 * alpha, n * (0.5 * alpha)}; }
  static Effect identity_fraction(double w) { return {w, {}}; }

  PauliOperator as_operator() const { return {weight, vec}; }
  /// Bloch vector of the normalised effect, vec / weight (zero for a zero effect).
  Vec3 direction() const;
  bool is_valid(double tol = kDefaultTol) const;
};

std::pair<double, double> effect_eigenvalues(const Effect& e);

/// Tr[rho E].
inline double born_probability(const DensityState& rho, const Effect& e) {
  return e.weight + dot(e.vec, rho.bloch());
}

struct PovmReport {
  bool effects_psd = true;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  /// Max-abs deviation of the effect sum from the identity, in Pauli coordinates.
  double completeness_residual = 0.0;
  bool pass = false;
};

PovmReport validate_povm(std::span<const Effect> effects, double tol = kDefaultTol);

class Povm {
 public:
  Povm() = default;
  explicit Povm(std::vector<Effect> effects, std::optional<std::vector<double>> alphas = std::nullopt)
      : effects_(std::move(effects)), alphas_(std::move(alphas)) {}

  /// Effects alpha_b (I + n_b . sigma) / 2. The alphas are recorded.
  static Povm from_weighted_directions(std::span<const double> alphas, std::span<const Vec3> directions);

  const std::vector<Effect>& effects() const { return effects_; }
  const Effect& operator[](std::size_t i) const { return effects_[i]; }
  std::size_t size() const { return effects_.size(); }
  const std::optional<std::vector<double>>& alphas() const { return alphas_; }

  PovmReport validate(double tol = kDefaultTol) const { return validate_povm(effects_, tol); }
  std::vector<double> probabilities(const DensityState& rho) const;

 private:
  std::vector<Effect> effects_;
  std::optional<std::vector<double>> alphas_;
};

}  // namespace pmgame
