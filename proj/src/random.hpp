#pragma once

// Seeded random draws with bit-stable conversions. std::mt19937_64 output is
// fixed by the standard; the distributions below avoid the
// implementation-defined std:: distribution algorithms.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "pmgame/qubit.hpp"

namespace pmgame::detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    // Box-Muller, one value per call.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Vec3 unit_vector() {
    while (true) {
      const Vec3 v{normal(), normal(), normal()};
      const double r = norm(v);
      if (r > 1e-12) return v / r;
    }
  }

  /// Uniform in the closed unit ball.
  Vec3 in_ball() { return unit_vector() * std::cbrt(uniform()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pmgame::detail
