#pragma once

// Reference computations for the tests, written independently of the library:
// explicit complex 2x2 matrices, brute-force LP vertex enumeration, and random
// generators for states and POVMs.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "pmgame/qubit.hpp"

namespace oracle {

using Mat2 = Eigen::Matrix2cd;
using cd = std::complex<double>;

inline Mat2 pauli_x() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}
inline Mat2 pauli_y() {
  Mat2 m;
  m << 0, cd(0, -1), cd(0, 1), 0;
  return m;
}
inline Mat2 pauli_z() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}

inline Mat2 matrix(double scalar, const pmgame::Vec3& v) {
  return scalar * Mat2::Identity() + v.x * pauli_x() + v.y * pauli_y() + v.z * pauli_z();
}
inline Mat2 matrix(const pmgame::Effect& e) { return matrix(e.weight, e.vec); }
inline Mat2 matrix(const pmgame::DensityState& s) { return matrix(0.5, s.bloch() * 0.5); }
inline Mat2 matrix(const pmgame::PauliOperator& o) { return matrix(o.scalar, o.vec); }

/// Pauli coordinates of a Hermitian matrix: scalar = Tr[M]/2, v_k = Tr[M sigma_k]/2.
inline pmgame::PauliOperator coordinates(const Mat2& m) {
  return {0.5 * m.trace().real(),
          {0.5 * (m * pauli_x()).trace().real(), 0.5 * (m * pauli_y()).trace().real(),
           0.5 * (m * pauli_z()).trace().real()}};
}

inline double trace_product(const Mat2& a, const Mat2& b) { return (a * b).trace().real(); }

inline Eigen::Vector2d eigenvalues(const Mat2& m) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(m);
  return es.eigenvalues();
}

inline double min_eigenvalue(const Mat2& m) { return eigenvalues(m)(0); }
inline double max_eigenvalue(const Mat2& m) { return eigenvalues(m)(1); }

/// Largest singular value of A B - B A.
inline double commutator_norm(const Mat2& a, const Mat2& b) {
  const Mat2 c = a * b - b * a;
  Eigen::JacobiSVD<Mat2> svd(c);
  return svd.singularValues()(0);
}

// ------------------------------------------------------------ random draws

class Random {
 public:
  explicit Random(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

  pmgame::Vec3 unit() {
    std::normal_distribution<double> n;
    while (true) {
      pmgame::Vec3 v{n(gen_), n(gen_), n(gen_)};
      const double r = pmgame::norm(v);
      if (r > 1e-9) return v / r;
    }
  }
  pmgame::Vec3 ball() { return unit() * std::cbrt(uniform()); }
  pmgame::Vec3 unit_xz() {
    const double t = uniform(0.0, 2.0 * 3.141592653589793);
    return {std::sin(t), 0.0, std::cos(t)};
  }

  pmgame::DensityState state() { return pmgame::DensityState::from_bloch(ball()); }

  /// k positive operators rescaled by S^{-1/2} (.) S^{-1/2} to sum to the identity.
  std::vector<pmgame::Effect> povm(int k, bool coplanar_xz = false) {
    std::vector<Mat2> raw;
    Mat2 total = Mat2::Zero();
    for (int i = 0; i < k; ++i) {
      const pmgame::Vec3 dir = coplanar_xz ? unit_xz() : unit();
      const double a = uniform(0.05, 1.0);
      const double r = a * uniform(0.0, 1.0);
      raw.push_back(matrix(a, dir * r));
      total += raw.back();
    }
    Eigen::SelfAdjointEigenSolver<Mat2> es(total);
    const Mat2 inv_sqrt = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                          es.eigenvectors().adjoint();
    std::vector<pmgame::Effect> out;
    for (const Mat2& p : raw) {
      const auto c = coordinates(inv_sqrt * p * inv_sqrt);
      out.push_back({c.scalar, c.vec});
    }
    return out;
  }

  /// k effects whose Bloch vectors all lie along +-axis.
  std::vector<pmgame::Effect> collinear_povm(int k, const pmgame::Vec3& axis) {
    // Split I = P+ + P- into k pieces: each effect is c_i P+ + d_i P-.
    std::vector<double> c(static_cast<std::size_t>(k)), d(static_cast<std::size_t>(k));
    double sc = 0.0;
    double sd = 0.0;
    for (int i = 0; i < k; ++i) {
      c[static_cast<std::size_t>(i)] = uniform();
      d[static_cast<std::size_t>(i)] = uniform();
      sc += c[static_cast<std::size_t>(i)];
      sd += d[static_cast<std::size_t>(i)];
    }
    std::vector<pmgame::Effect> out;
    for (int i = 0; i < k; ++i) {
      const double ci = c[static_cast<std::size_t>(i)] / sc;
      const double di = d[static_cast<std::size_t>(i)] / sd;
      out.push_back({0.5 * (ci + di), axis * (0.5 * (ci - di))});
    }
    return out;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// ------------------------------------------------------ LP by enumeration

struct DenseLp {
  std::vector<double> c;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> lo;
  std::vector<double> hi;
};

struct EnumResult {
  bool feasible = false;
  double value = -std::numeric_limits<double>::infinity();
};

/// max c.x s.t. A x = b, lo <= x <= hi with every bound finite. Every basic
/// solution fixes each variable at a bound or leaves it free; all 3^n such
/// patterns are tried and the free block solved by complete orthogonal
/// decomposition.
inline EnumResult enumerate_vertices(const DenseLp& lp) {
  const std::size_t n = lp.c.size();
  const std::size_t m = lp.b.size();
  EnumResult best;
  std::size_t patterns = 1;
  for (std::size_t j = 0; j < n; ++j) patterns *= 3;
  for (std::size_t code = 0; code < patterns; ++code) {
    std::vector<int> kind(n);
    std::size_t c = code;
    std::vector<std::size_t> free_vars;
    for (std::size_t j = 0; j < n; ++j) {
      kind[j] = static_cast<int>(c % 3);
      c /= 3;
      if (kind[j] == 2) free_vars.push_back(j);
    }
    if (free_vars.size() > m) continue;
    std::vector<double> x(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (kind[j] == 0) x[j] = lp.lo[j];
      if (kind[j] == 1) x[j] = lp.hi[j];
    }
    if (!free_vars.empty()) {
      Eigen::MatrixXd as(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(free_vars.size()));
      Eigen::VectorXd rhs(static_cast<Eigen::Index>(m));
      for (std::size_t i = 0; i < m; ++i) {
        double r = lp.b[i];
        for (std::size_t j = 0; j < n; ++j) {
          if (kind[j] != 2) r -= lp.a[i][j] * x[j];
        }
        rhs(static_cast<Eigen::Index>(i)) = r;
        for (std::size_t k = 0; k < free_vars.size(); ++k) {
          as(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = lp.a[i][free_vars[k]];
        }
      }
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(as);
      if (cod.rank() < static_cast<Eigen::Index>(free_vars.size())) continue;
      const Eigen::VectorXd sol = cod.solve(rhs);
      for (std::size_t k = 0; k < free_vars.size(); ++k) x[free_vars[k]] = sol(static_cast<Eigen::Index>(k));
    }
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += lp.a[i][j] * x[j];
      ok = std::abs(s - lp.b[i]) <= 1e-9;
    }
    for (std::size_t j = 0; j < n && ok; ++j) ok = x[j] >= lp.lo[j] - 1e-9 && x[j] <= lp.hi[j] + 1e-9;
    if (!ok) continue;
    double v = 0.0;
    for (std::size_t j = 0; j < n; ++j) v += lp.c[j] * x[j];
    best.feasible = true;
    best.value = std::max(best.value, v);
  }
  return best;
}

// ---------------------------------------------------------- game formulas

/// Literal sum of the six winning terms of a one-bit strategy; p in order
/// p00, p10, p20, p01, p11, p21.
inline double classical_success_literal(const std::array<double, 6>& p, const std::array<double, 3>& s,
                                        const std::array<double, 3>& r) {
  const double p00 = p[0], p10 = p[1], p20 = p[2], p01 = p[3], p11 = p[4], p21 = p[5];
  return ((p00 + p21) * s[0] + (p11 + p20) * s[2] + (p01 + p10) * s[1] + (2 - p00 - p21) * r[0] +
          (2 - p11 - p20) * r[2] + (2 - p01 - p10) * r[1]) /
         6.0;
}

}  // namespace oracle
