#pragma once

// Rolling-disk inclusions, the sharp length bound and equality detection.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "curvebound/geo_maps.hpp"
#include "curvebound/poly_curve.hpp"
#include "curvebound/support_curve.hpp"

namespace curvebound {

/// Relative slack allowed on lambda-convexity hypotheses. Discretized circles
/// on curved planes miss their smooth curvature by O(m^-2) of either sign.
inline constexpr double hypothesis_rel_tol = 1e-6;
/// Inclusion tolerance relative to the curve diameter.
inline constexpr double inclusion_rel_tol = 1e-8;
/// Relative slack on the upper curvature hypothesis of disk-in-domain.
inline constexpr double upper_hypothesis_rel_tol = 1e-6;
inline constexpr double default_tol_eq = 1e-6;
inline constexpr double default_tol_circ = 1e-3;

/// Anchors tested: every vertex, or a stride of ceil(m / 256) beyond 256.
inline std::size_t anchor_stride(std::size_t m) { return m > 256 ? (m + 255) / 256 : 1; }

namespace detail {

inline int orientation(const PolyCurve& curve) {
  double sum = 0.0;
  for (double t : turning_angles(curve)) sum += t;
  return sum < 0.0 ? -1 : 1;
}

inline TangentVec inward_normal(const PolyCurve& curve, std::size_t i, int orientation) {
  const auto& plane = curve.plane();
  const auto k = static_cast<std::ptrdiff_t>(i);
  const auto& v = curve.vertex(k);
  const TangentVec out = direction_to(plane, v, curve.vertex(k + 1));
  const TangentVec back = direction_to(plane, v, curve.vertex(k - 1));
  // Left normals of the incoming (-back) and outgoing tangents; their sum is
  // the bisector of the support cone.
  const Vec3 n = rotate_left(plane, v, out.dir) - rotate_left(plane, v, back.dir);
  return make_tangent(plane, v, orientation > 0 ? n : Vec3(-n));
}

}  // namespace detail

/// Inward unit normal at vertex i; at a corner, the angle bisector.
inline TangentVec inward_normal(const PolyCurve& curve, std::size_t i) {
  return detail::inward_normal(curve, i, detail::orientation(curve));
}

/// Disk of radius r0 tangent at vertex i to the support line orthogonal to
/// the inward normal, on the side containing the curve.
inline GeoDisk tangent_disk(const PolyCurve& curve, std::size_t i, double r0) {
  detail::require_radius(curve.plane().curvature(), r0);
  const TangentVec n = inward_normal(curve, i);
  return {exp_map(curve.plane(), n, r0), r0};
}

enum class InclusionKind { curve_in_disk, disk_in_domain };

inline std::string to_string(InclusionKind k) {
  return k == InclusionKind::curve_in_disk ? "curve-in-disk" : "disk-in-domain";
}

struct InclusionReport {
  InclusionKind kind = InclusionKind::curve_in_disk;
  std::size_t anchor_index = 0;
  double max_violation = 0.0;  ///< positive means violation, in length units
  bool passed = false;
};

struct InclusionCheck {
  InclusionKind kind = InclusionKind::curve_in_disk;
  double c = 0.0;
  double lambda = 0.0;
  double radius = 0.0;          ///< rolling disk radius
  double tolerance = 0.0;
  bool hypothesis_ok = false;
  double hypothesis_value = 0.0;  ///< lambda_hat, max run ratio, or 1 / max R
  std::string note;
  std::vector<InclusionReport> anchors;

  bool passed() const {
    return hypothesis_ok && std::all_of(anchors.begin(), anchors.end(), [](const auto& a) { return a.passed; });
  }

  const InclusionReport* worst() const {
    const InclusionReport* w = nullptr;
    for (const auto& a : anchors)
      if (!w || a.max_violation > w->max_violation) w = &a;
    return w;
  }
};

/// Every point of a lambda-convex curve lies in each rolling disk of radius
/// R0 (circle curvature lambda) tangent at a boundary anchor.
inline InclusionCheck curve_in_disk_check(const PolyCurve& curve, double lambda) {
  const auto& plane = curve.plane();
  InclusionCheck out;
  out.kind = InclusionKind::curve_in_disk;
  out.c = plane.curvature();
  out.lambda = lambda;
  out.radius = circle_radius_from_curvature(out.c, lambda);
  if (!is_convex(curve)) throw error(errc::not_convex, "rolling checks need a convex simple curve");
  const auto rep = min_specific_curvature(curve);
  out.hypothesis_value = rep.lambda_hat;
  out.hypothesis_ok = rep.lambda_hat >= lambda * (1.0 - hypothesis_rel_tol);
  if (!out.hypothesis_ok) out.note = "hypothesis violated: lambda_hat < lambda (curve is not lambda-convex)";
  out.tolerance = inclusion_rel_tol * diameter(curve);
  const int orient = detail::orientation(curve);
  const std::size_t stride = anchor_stride(curve.size());
  for (std::size_t i = 0; i < curve.size(); i += stride) {
    const TangentVec n = detail::inward_normal(curve, i, orient);
    const PlanePoint center = exp_map(plane, n, out.radius);
    double worst = -out.radius;
    for (const auto& v : curve.vertices()) worst = std::max(worst, distance(plane, center, v) - out.radius);
    out.anchors.push_back({out.kind, i, worst, worst <= out.tolerance});
  }
  return out;
}

/// Euclidean rolling inclusion for a support-density curve: the hypothesis is
/// max R <= 1 / lambda, anchors are grid normals, and the tested points are
/// the boundary points at the grid angles.
inline InclusionCheck curve_in_disk_check(const SupportCurve& curve, double lambda) {
  InclusionCheck out;
  out.kind = InclusionKind::curve_in_disk;
  out.lambda = lambda;
  out.radius = circle_radius_from_curvature(0.0, lambda);
  out.hypothesis_value = 1.0 / curve.max_radius();
  out.hypothesis_ok = curve.max_radius() * lambda <= 1.0 + hypothesis_rel_tol;
  if (!out.hypothesis_ok) out.note = "hypothesis violated: max R > 1 / lambda";
  const SupportFunction h(curve);
  const auto pts = boundary_grid(curve, h);
  out.tolerance = inclusion_rel_tol * diameter(curve, h);
  const std::size_t stride = anchor_stride(curve.size());
  for (std::size_t k = 0; k < curve.size(); k += stride) {
    const double phi = curve.angle(k);
    const Vec2 center = pts[k] - out.radius * Vec2(std::cos(phi), std::sin(phi));
    double worst = -out.radius;
    for (const auto& p : pts) worst = std::max(worst, (p - center).norm() - out.radius);
    out.anchors.push_back({out.kind, k, worst, worst <= out.tolerance});
  }
  return out;
}

/// For a Euclidean convex polygon whose specific curvature never exceeds
/// lambda, the disk of radius 1 / lambda tangent at an edge midpoint lies in
/// the enclosed domain. Anchors are edge midpoints (corners break the upper
/// curvature bound). The tolerance adds 4 R (1 - cos(theta_max / 2)) with
/// theta_max the largest turning: for a polygon inscribed in a circle of
/// radius R this is four chord sagittas, and the tangent disk overshoots such
/// a polygon by two.
inline InclusionCheck disk_in_domain_check(const PolyCurve& curve, double lambda) {
  if (!curve.plane().euclidean()) throw error(errc::domain, "disk-in-domain is a Euclidean check");
  if (!(lambda > 0.0)) throw error(errc::invalid_input, "lambda must be positive");
  if (!is_convex(curve)) throw error(errc::not_convex, "rolling checks need a convex simple curve");
  InclusionCheck out;
  out.kind = InclusionKind::disk_in_domain;
  out.lambda = lambda;
  out.radius = 1.0 / lambda;

  const auto data = detail::run_data(curve);
  const std::size_t n = curve.size();
  double max_ratio = 0.0;
  bool nonnegative = true;
  for (std::size_t k = 0; k < n; ++k) {
    const double b = (data.edges[(k + n - 1) % n] + data.edges[k]) / 2.0;
    max_ratio = std::max(max_ratio, data.turning[k] / b);
    nonnegative = nonnegative && data.turning[k] >= 0.0;
  }
  out.hypothesis_value = max_ratio;
  out.hypothesis_ok = nonnegative && max_ratio <= lambda * (1.0 + upper_hypothesis_rel_tol);
  if (!out.hypothesis_ok) out.note = "hypothesis violated: a run has specific curvature > lambda";

  double max_turn = 0.0;
  for (double t : data.turning) max_turn = std::max(max_turn, t);
  const double sagitta = out.radius * (1.0 - std::cos(max_turn / 2.0));
  const PolyCurve oriented = detail::orientation(curve) > 0 ? curve : curve.reversed();
  out.tolerance = inclusion_rel_tol * diameter(curve) + 4.0 * sagitta;

  // Inward (left) unit normals and offsets of each edge line of the CCW polygon.
  std::vector<Vec2> normal(n);
  std::vector<double> offset(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 a = oriented.vertex(static_cast<std::ptrdiff_t>(k)).xy();
    const Vec2 b = oriented.vertex(static_cast<std::ptrdiff_t>(k) + 1).xy();
    const Vec2 t = (b - a).normalized();
    normal[k] = Vec2(-t.y(), t.x());
    offset[k] = normal[k].dot(a);
  }
  const std::size_t stride = anchor_stride(n);
  for (std::size_t k = 0; k < n; k += stride) {
    const Vec2 mid = 0.5 * (oriented.vertex(static_cast<std::ptrdiff_t>(k)).xy() +
                            oriented.vertex(static_cast<std::ptrdiff_t>(k) + 1).xy());
    const Vec2 center = mid + out.radius * normal[k];
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < n; ++e) worst = std::max(worst, out.radius - (normal[e].dot(center) - offset[e]));
    out.anchors.push_back({out.kind, k, worst, worst <= out.tolerance});
  }
  return out;
}

/// Hyperbolic curve-in-disk test carried out in the Klein chart: for each
/// anchor the tangent disk centre is moved to the origin, where the disk of
/// radius R0 becomes the Euclidean disk of radius tanh(R0 sqrt|c|). Violations
/// are in Klein-chart units; the tolerance is the image of the hyperbolic one.
inline InclusionCheck klein_inclusion_check(const PolyCurve& curve, double lambda) {
  const auto& plane = curve.plane();
  if (plane.sign() >= 0) throw error(errc::domain, "the Klein route needs c < 0");
  const InclusionCheck direct = curve_in_disk_check(curve, lambda);
  InclusionCheck out = direct;
  const double r = plane.scale();
  const double image_radius = std::tanh(direct.radius / r);
  out.tolerance = std::tanh((direct.radius + direct.tolerance) / r) - image_radius;
  out.anchors.clear();
  const int orient = detail::orientation(curve);
  for (const auto& a : direct.anchors) {
    const TangentVec n = detail::inward_normal(curve, a.anchor_index, orient);
    const PlanePoint center = exp_map(plane, n, direct.radius);
    const PlaneIsometry iso = isometry_to_origin(plane, center);
    double worst = -image_radius;
    for (const auto& v : curve.vertices())
      worst = std::max(worst, klein_map(plane, plane.project(iso.apply(plane, v).coords)).norm() - image_radius);
    out.anchors.push_back({out.kind, a.anchor_index, worst, worst <= out.tolerance});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Length bound and equality.

struct BoundReport {
  double c = 0.0;
  double lambda = 0.0;
  std::string lambda_source;  ///< "supplied", "lambda_hat" or "max_radius"
  double lambda_hat = 0.0;    ///< the curve's own specific-curvature infimum
  bool hypothesis_ok = false;
  double length = 0.0;
  double bound = 0.0;
  double slack = 0.0;         ///< bound - length
  double tolerance = 0.0;
  bool passed = false;
  bool equality = false;
  double circle_deviation = 0.0;
};

struct EqualityReport {
  bool equal = false;
  double relative_slack = 0.0;
  double curvature_variation = 0.0;  ///< (max - min) / mean of vertex specific curvature
  double radius_variation = 0.0;     ///< (max - min) / mean of distance to the centre
};

inline constexpr double bound_rel_tol = 1e-9;

/// Metric-circle test on a polygon: vertex specific curvatures agree, and
/// vertices and edge midpoints are equidistant from the vertex centroid.
inline EqualityReport circle_test(const PolyCurve& curve) {
  const auto& plane = curve.plane();
  const auto data = detail::run_data(curve);
  const std::size_t n = curve.size();
  double kmin = std::numeric_limits<double>::infinity(), kmax = -kmin, ksum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double ratio = data.turning[k] / ((data.edges[(k + n - 1) % n] + data.edges[k]) / 2.0);
    kmin = std::min(kmin, ratio);
    kmax = std::max(kmax, ratio);
    ksum += ratio;
  }
  Vec3 mean = Vec3::Zero();
  for (const auto& v : curve.vertices()) mean += v.coords;
  mean /= static_cast<double>(n);
  const PlanePoint center = plane.project(mean);
  double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0, dsum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& a = curve.vertex(static_cast<std::ptrdiff_t>(k));
    const auto& b = curve.vertex(static_cast<std::ptrdiff_t>(k) + 1);
    const PlanePoint mid = exp_map(plane, direction_to(plane, a, b), 0.5 * data.edges[k]);
    for (const auto* p : {&a, &mid}) {
      const double d = distance(plane, center, *p);
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
      dsum += d;
    }
  }
  EqualityReport out;
  out.curvature_variation = (kmax - kmin) / (ksum / static_cast<double>(n));
  out.radius_variation = (dmax - dmin) / (dsum / static_cast<double>(2 * n));
  return out;
}

inline EqualityReport circle_test(const SupportCurve& curve) {
  const auto r = curve.radius();
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  const SupportFunction h(curve);
  const auto pts = boundary_grid(curve, h);
  double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0, dsum = 0.0;
  for (const auto& p : pts) {
    dmin = std::min(dmin, p.norm());
    dmax = std::max(dmax, p.norm());
    dsum += p.norm();
  }
  EqualityReport out;
  out.curvature_variation = (*hi - *lo) / curve.mean_radius();
  out.radius_variation = (dmax - dmin) / (dsum / static_cast<double>(pts.size()));
  return out;
}

namespace detail {

inline void finish_bound(BoundReport& rep, double tol_bound) {
  rep.bound = length_bound(rep.c, rep.lambda);
  rep.slack = rep.bound - rep.length;
  rep.tolerance = tol_bound * rep.bound;
  rep.passed = rep.hypothesis_ok && rep.length <= rep.bound + rep.tolerance;
}

template <class Curve>
EqualityReport equality_from(const Curve& curve, const BoundReport& rep, double tol_eq, double tol_circ) {
  EqualityReport eq = circle_test(curve);
  eq.relative_slack = rep.slack / rep.bound;
  eq.equal = std::abs(rep.slack) <= tol_eq * rep.bound && eq.curvature_variation <= tol_circ &&
             eq.radius_variation <= tol_circ;
  return eq;
}

}  // namespace detail

/// Length of a convex simple polygon against 2 pi / sqrt(c + lambda^2).
/// lambda defaults to the curve's lambda_hat.
inline BoundReport theorem_bound_check(const PolyCurve& curve, std::optional<double> lambda = std::nullopt,
                                       double tol_eq = default_tol_eq, double tol_circ = default_tol_circ,
                                       double tol_bound = bound_rel_tol) {
  if (!is_convex(curve) || !is_simple(curve))
    throw error(errc::not_convex, "the length bound needs a convex simple curve");
  const auto sw = min_specific_curvature(curve);
  BoundReport rep;
  rep.c = curve.plane().curvature();
  rep.lambda_hat = sw.lambda_hat;
  rep.lambda = lambda.value_or(sw.lambda_hat);
  rep.lambda_source = lambda ? "supplied" : "lambda_hat";
  if (!(rep.c + rep.lambda * rep.lambda > 0.0))
    throw error(errc::hypothesis, "c + lambda^2 > 0 fails for lambda = " + std::to_string(rep.lambda));
  rep.hypothesis_ok = sw.lambda_hat >= rep.lambda * (1.0 - hypothesis_rel_tol);
  rep.length = sw.perimeter;
  detail::finish_bound(rep, tol_bound);
  const auto eq = detail::equality_from(curve, rep, tol_eq, tol_circ);
  rep.equality = eq.equal;
  rep.circle_deviation = std::max(eq.curvature_variation, eq.radius_variation);
  return rep;
}

/// Euclidean bound for a support-density curve; lambda defaults to 1 / max R.
inline BoundReport theorem_bound_check(const SupportCurve& curve, std::optional<double> lambda = std::nullopt,
                                       double tol_eq = default_tol_eq, double tol_circ = default_tol_circ,
                                       double tol_bound = bound_rel_tol) {
  BoundReport rep;
  rep.c = 0.0;
  rep.lambda_hat = 1.0 / curve.max_radius();
  rep.lambda = lambda.value_or(rep.lambda_hat);
  rep.lambda_source = lambda ? "supplied" : "max_radius";
  if (!(rep.lambda > 0.0)) throw error(errc::hypothesis, "c + lambda^2 > 0 fails");
  rep.hypothesis_ok = curve.max_radius() * rep.lambda <= 1.0 + hypothesis_rel_tol;
  rep.length = curve_length(curve);
  detail::finish_bound(rep, tol_bound);
  const auto eq = detail::equality_from(curve, rep, tol_eq, tol_circ);
  rep.equality = eq.equal;
  rep.circle_deviation = std::max(eq.curvature_variation, eq.radius_variation);
  return rep;
}

/// Equality in the length bound: zero slack and a metric circle.
template <class Curve>
EqualityReport equality_detect(const Curve& curve, double lambda, double tol_eq = default_tol_eq,
                               double tol_circ = default_tol_circ) {
  const BoundReport rep = theorem_bound_check(curve, lambda, tol_eq, tol_circ);
  return detail::equality_from(curve, rep, tol_eq, tol_circ);
}

}  // namespace curvebound
