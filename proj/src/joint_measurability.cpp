#include <algorithm>
#include <cmath>
#include <numbers>

#include "pmgame/errors.hpp"
#include "pmgame/lp.hpp"
#include "pmgame/measurement_classicality.hpp"

namespace pmgame {

const char* to_string(Compatibility verdict) {
  switch (verdict) {
    case Compatibility::compatible:
      return "compatible";
    case Compatibility::incompatible:
      return "incompatible";
    case Compatibility::undecided:
      return "undecided";
  }
  return "unknown";
}

Povm add_white_noise(const Povm& povm, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("noise parameter must lie in [0, 1]");
  std::vector<Effect> out;
  for (const Effect& e : povm.effects()) out.push_back({e.weight, e.vec * eta});
  return Povm(std::move(out));
}

namespace {

struct Plane {
  Vec3 e1{};
  Vec3 e2{};
};

Plane common_plane(const Povm& a, const Povm& b, double tol) {
  std::vector<Vec3> vecs;
  for (const Povm* m : {&a, &b}) {
    for (const Effect& e : m->effects()) {
      if (norm(e.vec) > tol) vecs.push_back(e.vec);
    }
  }
  Vec3 normal{};
  double best = 0.0;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    for (std::size_t j = i + 1; j < vecs.size(); ++j) {
      const Vec3 c = cross(vecs[i], vecs[j]);
      if (norm(c) > best) {
        best = norm(c);
        normal = c;
      }
    }
  }
  Plane p;
  if (best <= tol) {
    // Collinear or trivial: any plane through the common axis.
    p.e1 = vecs.empty() ? Vec3{0, 0, 1} : vecs.front() / norm(vecs.front());
    const Vec3 helper = std::abs(p.e1.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 n = cross(p.e1, helper);
    p.e2 = cross(n / norm(n), p.e1);
    return p;
  }
  normal = normal / norm(normal);
  for (const Vec3& v : vecs) {
    if (std::abs(dot(v, normal)) > tol) throw NotApplicableError("POVM Bloch vectors are not coplanar");
  }
  // Keep the xz-plane in its usual orientation when it is the common plane.
  if (std::abs(normal.y) > 1.0 - tol) {
    p.e1 = {1, 0, 0};
    p.e2 = {0, 0, 1};
    return p;
  }
  p.e1 = vecs.front() / norm(vecs.front());
  p.e2 = cross(normal, p.e1);
  return p;
}

struct Relaxation {
  bool feasible = false;
  std::vector<double> x;
};

struct Facet {
  double angle = 0.0;
  double offset = 1.0;
};

// Tangent polygon: k facets at angles (2m + 1) pi / k touching the unit circle.
std::vector<Facet> outer_facets(int k) {
  std::vector<Facet> f;
  for (int m = 0; m < k; ++m) f.push_back({(2.0 * m + 1.0) * std::numbers::pi / k, 1.0});
  return f;
}

// Inscribed polygon with vertices at angles 2 pi m / k plus the in-plane
// directions of the marginal effects, so rank-one marginals lie inside.
std::vector<Facet> inner_facets(int k, const Povm& a, const Povm& b, const Plane& plane) {
  std::vector<double> vertex;
  for (int m = 0; m < k; ++m) vertex.push_back(2.0 * std::numbers::pi * m / k);
  for (const Povm* povm : {&a, &b}) {
    for (const Effect& e : povm->effects()) {
      const double u = dot(e.vec, plane.e1);
      const double v = dot(e.vec, plane.e2);
      if (std::hypot(u, v) <= 1e-12) continue;
      double phi = std::atan2(v, u);
      if (phi < 0.0) phi += 2.0 * std::numbers::pi;
      vertex.push_back(phi);
    }
  }
  std::sort(vertex.begin(), vertex.end());
  std::vector<Facet> f;
  for (std::size_t m = 0; m < vertex.size(); ++m) {
    const double from = vertex[m];
    const double to = m + 1 < vertex.size() ? vertex[m + 1] : vertex.front() + 2.0 * std::numbers::pi;
    if (to - from < 1e-12) continue;
    f.push_back({0.5 * (from + to), std::cos(0.5 * (to - from))});
  }
  return f;
}

// Joint POVM with every cone {w >= |v|} replaced by the polygon cone
// {d_m . v <= c_m w}.
Relaxation solve_relaxation(const Povm& a, const Povm& b, const Plane& plane, const std::vector<Facet>& facets) {
  const int k = static_cast<int>(facets.size());
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  lp::LinearProgram prog;
  const std::size_t stride = 3 + static_cast<std::size_t>(k);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const std::string tag = std::to_string(i) + std::to_string(j);
      prog.add_variable("w" + tag, 0.0, lp::kInf);
      prog.add_variable("v1_" + tag, -lp::kInf, lp::kInf);
      prog.add_variable("v2_" + tag, -lp::kInf, lp::kInf);
      for (int m = 0; m < k; ++m) prog.add_variable("s" + tag + "_" + std::to_string(m), 0.0, lp::kInf);
    }
  }
  auto base = [&](std::size_t i, std::size_t j) { return (i * nb + j) * stride; };
  for (std::size_t i = 0; i < na; ++i) {
    std::vector<std::pair<std::size_t, double>> w, v1, v2;
    for (std::size_t j = 0; j < nb; ++j) {
      w.emplace_back(base(i, j), 1.0);
      v1.emplace_back(base(i, j) + 1, 1.0);
      v2.emplace_back(base(i, j) + 2, 1.0);
    }
    prog.add_equality(w, a[i].weight, "first_w" + std::to_string(i));
    prog.add_equality(v1, dot(a[i].vec, plane.e1), "first_v1_" + std::to_string(i));
    prog.add_equality(v2, dot(a[i].vec, plane.e2), "first_v2_" + std::to_string(i));
  }
  for (std::size_t j = 0; j < nb; ++j) {
    std::vector<std::pair<std::size_t, double>> w, v1, v2;
    for (std::size_t i = 0; i < na; ++i) {
      w.emplace_back(base(i, j), 1.0);
      v1.emplace_back(base(i, j) + 1, 1.0);
      v2.emplace_back(base(i, j) + 2, 1.0);
    }
    prog.add_equality(w, b[j].weight, "second_w" + std::to_string(j));
    prog.add_equality(v1, dot(b[j].vec, plane.e1), "second_v1_" + std::to_string(j));
    prog.add_equality(v2, dot(b[j].vec, plane.e2), "second_v2_" + std::to_string(j));
  }
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const std::size_t o = base(i, j);
      for (int m = 0; m < k; ++m) {
        const Facet& fm = facets[static_cast<std::size_t>(m)];
        prog.add_equality({{o + 1, std::cos(fm.angle)},
                           {o + 2, std::sin(fm.angle)},
                           {o, -fm.offset},
                           {o + 3 + static_cast<std::size_t>(m), 1.0}},
                          0.0);
      }
    }
  }
  const auto sol = lp::solve(prog);
  Relaxation r;
  r.feasible = sol.status == lp::LpStatus::optimal;
  r.x = sol.x;
  return r;
}

}  // namespace

JointMeasurabilityReport joint_measurability_check(const Povm& first, const Povm& second, int polygon_k) {
  if (polygon_k < 3) throw ValidationError("polygon needs at least three sides");
  if (!first.validate().pass || !second.validate().pass) throw ValidationError("invalid POVM");
  const Plane plane = common_plane(first, second, 1e-9);
  JointMeasurabilityReport rep;
  rep.polygon_k = polygon_k;
  const auto facets = inner_facets(polygon_k, first, second, plane);
  const Relaxation inner = solve_relaxation(first, second, plane, facets);
  rep.inner_feasible = inner.feasible;
  if (inner.feasible) {
    rep.outer_feasible = true;
    rep.verdict = Compatibility::compatible;
    const std::size_t stride = 3 + facets.size();
    for (std::size_t cell = 0; cell < first.size() * second.size(); ++cell) {
      const std::size_t o = cell * stride;
      rep.parent.push_back({inner.x[o], plane.e1 * inner.x[o + 1] + plane.e2 * inner.x[o + 2]});
    }
    return rep;
  }
  rep.outer_feasible = solve_relaxation(first, second, plane, outer_facets(polygon_k)).feasible;
  rep.verdict = rep.outer_feasible ? Compatibility::undecided : Compatibility::incompatible;
  return rep;
}

NoiseThreshold noise_threshold(const Povm& first, const Povm& second, int polygon_k, double resolution) {
  NoiseThreshold out;
  auto compatible = [&](double eta) {
    ++out.lp_checks;
    return joint_measurability_check(add_white_noise(first, eta), add_white_noise(second, eta), polygon_k)
        .inner_feasible;
  };
  if (compatible(1.0)) {
    out.eta = 1.0;
    return out;
  }
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    (compatible(mid) ? lo : hi) = mid;
  }
  out.eta = lo;
  return out;
}

}  // namespace pmgame
