// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "curvebound/curvebound.hpp"
#include "test_support.hpp"

using namespace curvebound;
using testing_support::regular_polygon;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds, 0 = none
  std::function<Outcome()> run;
};

// ---------------------------------------------------------------------------

Outcome equality_cases() {
  Outcome out;
  const struct {
    double c, lambda, bound;
  } cases[] = {{0.0, 1.0, 2 * pi}, {1.0, 1.0, pi * std::sqrt(2.0)}, {-1.0, std::sqrt(2.0), 2 * pi}};
  double worst = 0.0;
  for (const auto& k : cases) {
    const ModelPlane plane(k.c);
    const auto curve = regular_polygon(plane, 4096, circle_radius_from_curvature(k.c, k.lambda));
    const auto rep = theorem_bound_check(curve, k.lambda);
    const double gap = std::abs(rep.length - k.bound) / k.bound;
    worst = std::max(worst, gap);
    const bool eq = equality_detect(curve, k.lambda).equal;
    out.pass = out.pass && gap <= 1e-6 && std::abs(rep.bound - k.bound) <= 1e-12 * k.bound && eq;
    if (!eq) out.detail += fmt::format(" equality_detect false at c={}", k.c);
  }
  out.detail = fmt::format("max |length - bound| / bound = {:.3e}", worst) + out.detail;
  return out;
}

Outcome random_instances() {
  Outcome out;
  double worst_len = -1e300, worst_incl = -1e300;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    const auto curve = gen_support_curve(cfg);
    const double len = curve_length(curve);
    worst_len = std::max(worst_len, len / (2 * pi) - 1.0);
    const auto chk = curve_in_disk_check(curve, 1.0);
    const double diam = diameter(curve, SupportFunction(curve));
    const double v = chk.worst()->max_violation / diam;
    worst_incl = std::max(worst_incl, v);
    out.pass = out.pass && len <= 2 * pi * (1 + 1e-9) && chk.hypothesis_ok && v <= 1e-8;
  }
  double worst_poly = -1e300;
  for (auto [c, lambda] : {std::pair{1.0, 1.0}, {-1.0, std::sqrt(2.0)}}) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      GenConfig cfg;
      cfg.kind = GenKind::polyline;
      cfg.seed = seed;
      cfg.c = c;
      cfg.lambda = lambda;
      const auto gen = gen_polyline(cfg);
      const double excess = perimeter(gen.curve) - length_bound(c, lambda);
      worst_poly = std::max(worst_poly, excess);
      out.pass = out.pass && excess <= 1e-6;
    }
  }
  out.detail = fmt::format("support: max length/2pi - 1 = {:.3e}, max violation/diam = {:.3e}; polylines: max length - bound = {:.3e}",
                           worst_len, worst_incl, worst_poly);
  return out;
}

Outcome klein_map_criterion() {
  Outcome out;
  const ModelPlane h(-1.0);
  double worst_k = 0.0;
  for (double r0 : {0.5, 1.0, 2.0}) {
    const auto image = klein_image(regular_polygon(h, 1024, r0));
    for (double k : menger_curvature(image)) worst_k = std::max(worst_k, std::abs(k - 1.0 / std::tanh(r0)));
  }
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_col = 0.0;
  int triples = 0;
  while (triples < 10000) {
    const auto p = h.polar_point(3 * u(rng), 2 * pi * u(rng));
    const auto q = h.polar_point(3 * u(rng), 2 * pi * u(rng));
    const double d = distance(h, p, q);
    if (d < 1e-3) continue;
    const auto r = exp_map(h, direction_to(h, p, q), d * (0.1 + 1.8 * u(rng)));
    const Vec2 a = klein_map(h, p), b = klein_map(h, q), c = klein_map(h, r);
    const Vec2 e = b - a, f = c - a;
    worst_col = std::max(worst_col, std::abs(e.x() * f.y() - e.y() * f.x()) / (e.norm() * f.norm()));
    ++triples;
  }
  out.pass = worst_k <= 1e-6 && worst_col <= 1e-10;
  out.detail = fmt::format("max |menger - coth R0| = {:.3e}, max collinearity residual = {:.3e} over {} triples", worst_k,
                           worst_col, triples);
  return out;
}

// Exact Hausdorff distance between a spherical polygon winding once around the
// north pole o and the circle of radius r about o: for y on the polygon,
// d(y, circle) = |d(o, y) - r|, and every circle point has a polygon point on
// its ray from o no farther away. So the distance is max over the polygon of
// |d(o, y) - r|; along an edge d(o, .) peaks at an endpoint and bottoms out at
// the foot of the perpendicular from o when it falls inside the edge.
double hausdorff_to_circle(const std::vector<Vec3>& verts, double r) {
  const Vec3 o = Vec3::UnitZ();
  auto dist = [&](const Vec3& y) { return std::atan2(o.cross(y).norm(), o.dot(y)); };
  double worst = 0.0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const Vec3& a = verts[i];
    const Vec3& b = verts[(i + 1) % verts.size()];
    worst = std::max(worst, std::abs(dist(a) - r));
    const Vec3 n = a.cross(b).normalized();
    const Vec3 foot = (o - o.dot(n) * n).normalized();
    if (a.cross(foot).dot(n) >= 0 && foot.cross(b).dot(n) >= 0) worst = std::max(worst, std::abs(dist(foot) - r));
  }
  return worst;
}

Outcome polar_duality() {
  Outcome out;
  const ModelPlane s(1.0);
  double worst_h = 0.0, worst_dd = 0.0;
  for (double rho : {pi / 8, pi / 4, 3 * pi / 8}) {
    const auto curve = regular_polygon(s, 4096, rho);
    const auto dual = polar_dual(curve);
    worst_h = std::max(worst_h, hausdorff_to_circle(dual.verts, pi / 2 - rho));
    const auto back = polar_dual(dual);
    for (std::size_t i = 0; i < curve.size(); ++i)
      worst_dd = std::max(worst_dd, (back.verts[i] - curve.vertex(static_cast<std::ptrdiff_t>(i) + 1).coords).norm());
  }
  out.pass = worst_h <= 1e-6 && worst_dd <= 1e-6;
  out.detail = fmt::format("max Hausdorff to radius pi/2 - rho = {:.3e}, max double-dual vertex error = {:.3e}", worst_h,
                           worst_dd);
  return out;
}

Outcome support_calculus() {
  Outcome out;
  double worst_res = 0.0, worst_rec = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GenConfig cfg;
    cfg.seed = 5000 + seed;
    const auto curve = gen_support_curve(cfg);
    const SupportFunction h(curve);
    worst_res = std::max(worst_res, support_residual(curve, h) / curve.max_radius());
    const auto poly = to_polyline(curve, curve.size());
    const auto rec = reconstruct_from_swerve(swerve_profile(poly)).curve();
    if (rec.size() != poly.size()) {
      out.pass = false;
      continue;
    }
    // Rigid alignment: vertex 0 to the origin, edge 0 onto the positive x axis.
    const Vec2 origin = poly.vertex(0).xy();
    const Vec2 e = (poly.vertex(1).xy() - origin).normalized();
    const double diam = diameter(poly);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Vec2 d = poly.vertex(static_cast<std::ptrdiff_t>(k)).xy() - origin;
      const Vec2 aligned(d.dot(e), e.x() * d.y() - e.y() * d.x());
      worst_rec = std::max(worst_rec, (aligned - rec.vertex(static_cast<std::ptrdiff_t>(k)).xy()).norm() / diam);
    }
  }
  const auto gap = reconstruct_from_swerve(SwerveProfile::uniform([](double s) { return s; }, 2 * pi, 4097)).endpoint_gap;
  out.pass = out.pass && worst_res <= 1e-8 && worst_rec <= 1e-8 && gap <= 1e-8;
  out.detail = fmt::format("max residual/maxR = {:.3e}, max reconstruction error/diam = {:.3e}, tau = s closure gap = {:.3e}",
                           worst_res, worst_rec, gap);
  return out;
}

Outcome cap_comparison() {
  Outcome out;
  double worst_margin = -1e300, worst_id = 0.0, worst_total = 0.0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    GenConfig cfg;
    cfg.kind = GenKind::cap;
    cfg.seed = seed;
    cfg.size = 64;
    const auto cap = gen_cap(cfg);
    const auto rep = doubling_curvature(cap);
    for (std::size_t i = 0; i < rep.tau_cap.size(); ++i) {
      worst_margin = std::max(worst_margin, rep.tau_cap[i] - rep.tau_plane[i]);
      worst_id = std::max(worst_id, std::abs(rep.omega[i] - (rep.tau_cap[i] + rep.tau_plane[i])));
    }
    worst_total = std::max(worst_total, std::abs(rep.total_curvature - 4 * pi));
  }
  out.pass = worst_margin <= 1e-10 && worst_id <= 1e-12 && worst_total <= 1e-9;
  out.detail = fmt::format("max tau_cap - tau_plane = {:.3e}, max identity error = {:.3e}, max |total - 4pi| = {:.3e}",
                           worst_margin, worst_id, worst_total);
  return out;
}

Outcome convergence_orders() {
  Outcome out;
  const ModelPlane plane(0.0);
  double lo = 1e300, hi = -1e300;
  for (double r0 : {0.5, 1.0, 2.0}) {
    std::vector<double> err_k, err_s;
    for (std::size_t m : {64, 128, 256, 512, 1024}) {
      const auto sw = min_specific_curvature(regular_polygon(plane, m, r0));
      err_k.push_back(std::abs(sw.lambda_hat - 1.0 / r0));
      err_s.push_back(std::abs(sw.perimeter - 2 * pi * r0));
    }
    for (const auto* err : {&err_k, &err_s})
      for (std::size_t i = 0; i + 1 < err->size(); ++i) {
        const double order = std::log2((*err)[i] / (*err)[i + 1]);
        lo = std::min(lo, order);
        hi = std::max(hi, order);
      }
  }
  out.pass = lo >= 1.8 && hi <= 2.2;
  out.detail = fmt::format("observed orders in [{:.4f}, {:.4f}] (lambda_hat and length, R in {{0.5, 1, 2}})", lo, hi);
  return out;
}

Outcome oracle_equivalence() {
  Outcome out;
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> size(3, 256);
  const double planes[] = {0.0, 1.0, -1.0, 0.3};
  std::size_t mismatches = 0, largest = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const ModelPlane plane(planes[trial % 4]);
    const std::size_t n = size(rng);
    // Points near a circle so most of them survive the hull.
    std::vector<PlanePoint> pts;
    std::vector<Vec2> chart;
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back(plane.polar_point(0.8 * (1 - 1e-4 * u(rng)), 2 * pi * u(rng)));
      chart.push_back(projective_chart(plane, pts.back(), plane.origin()));
    }
    const auto hull = detail::hull_indices(chart);
    std::vector<PlanePoint> verts;
    for (auto i : hull) verts.push_back(pts[i]);
    const PolyCurve curve(plane, std::move(verts));
    largest = std::max(largest, curve.size());
    const auto fast = min_specific_curvature(curve);
    const auto brute = min_specific_curvature_bruteforce(curve);
    if (fast.lambda_hat != brute.lambda_hat) ++mismatches;
  }
  out.pass = mismatches == 0;
  out.detail = fmt::format("{} mismatches over 200 polygons (largest n = {})", mismatches, largest);
  return out;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "equality cases", 1.0, equality_cases},
      {2, "bound over random instances", 30.0, random_instances},
      {3, "Klein map", 0.0, klein_map_criterion},
      {4, "polar duality", 0.0, polar_duality},
      {5, "support calculus", 0.0, support_calculus},
      {6, "cap comparison", 20.0, cap_comparison},
      {7, "convergence orders", 0.0, convergence_orders},
      {8, "oracle equivalence", 0.0, oracle_equivalence},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt::format("{:.2f} s", secs);
    if (c.time_limit > 0) {
      timing += fmt::format(" (limit {:.0f} s)", c.time_limit);
      if (secs >= c.time_limit) o.pass = false;
    }
    if (!o.pass) ++failed;
    fmt::print("[{}] {}. {}: {}; {}\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail, timing);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
