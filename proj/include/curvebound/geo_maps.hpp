#pragma once

// Geodesic maps between model planes and spherical polar duality.

#include <cmath>
#include <span>
#include <vector>

#include "curvebound/charts.hpp"
#include "curvebound/poly_curve.hpp"

namespace curvebound {

/// Image of a hyperbolic polygon in the Klein disk, as a Euclidean polygon.
inline PolyCurve klein_image(const PolyCurve& curve) {
  std::vector<Vec2> pts;
  pts.reserve(curve.size());
  for (const auto& v : curve.vertices()) pts.push_back(klein_map(curve.plane(), v));
  return PolyCurve::euclidean(pts);
}

/// Support value of the Klein image of a curve with hyperbolic support value h
/// measured from the chart origin.
inline double klein_support_transform(double h) {
  if (!(h >= 0.0)) throw error(errc::invalid_input, "support value must be >= 0");
  return std::tanh(h);
}

/// Euclidean radius of curvature of the Klein image at a point whose image
/// has support value g and support derivative g' (so |p|^2 = g^2 + g'^2 < 1),
/// given the hyperbolic radius of curvature R of the source:
///   R~ = R (1 - g'^2 / (1 - g^2))^{3/2},  0 <= R~ <= R.
inline double klein_curvature_transform(double radius, double g, double g_prime) {
  if (!(radius >= 0.0)) throw error(errc::invalid_input, "radius of curvature must be >= 0");
  if (!(g * g < 1.0) || !(g_prime * g_prime <= 1.0 - g * g))
    throw error(errc::domain, "support data outside the Klein disk (needs g^2 + g'^2 <= 1)");
  const double f = 1.0 - g_prime * g_prime / (1.0 - g * g);
  return radius * std::pow(std::max(0.0, f), 1.5);
}

/// Image of a spherical polygon under central projection about pole.
inline PolyCurve gnomonic_image(const PolyCurve& curve, const PlanePoint& pole) {
  std::vector<Vec2> pts;
  pts.reserve(curve.size());
  for (const auto& v : curve.vertices()) pts.push_back(gnomonic_map(curve.plane(), v, pole));
  return PolyCurve::euclidean(pts);
}

/// Discrete curvature at each vertex of a closed Euclidean polyline: the
/// reciprocal circumradius of consecutive vertex triples, signed by turn.
inline std::vector<double> menger_curvature(std::span<const Vec2> pts) {
  const std::size_t n = pts.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = pts[(i + n - 1) % n];
    const Vec2& b = pts[i];
    const Vec2& c = pts[(i + 1) % n];
    const Vec2 u = b - a, v = c - b, w = c - a;
    const double cross = u.x() * v.y() - u.y() * v.x();
    out[i] = 2.0 * cross / (u.norm() * v.norm() * w.norm());
  }
  return out;
}

inline std::vector<double> menger_curvature(const PolyCurve& curve) {
  if (!curve.plane().euclidean()) throw error(errc::domain, "Menger curvature is measured in E^2");
  std::vector<Vec2> pts;
  for (const auto& v : curve.vertices()) pts.push_back(v.xy());
  return menger_curvature(pts);
}

// ---------------------------------------------------------------------------
// Polar duality on the unit sphere.

/// Vertices of a dual curve on the unit sphere.
struct PolarCurve {
  std::vector<Vec3> verts;

  /// Rescales onto the sphere of curvature c and wraps as a polygon.
  PolyCurve to_curve(const ModelPlane& plane) const {
    if (plane.sign() <= 0) throw error(errc::domain, "polar curves live on a sphere");
    std::vector<PlanePoint> pts;
    pts.reserve(verts.size());
    for (const auto& v : verts) pts.emplace_back(Vec3(plane.scale() * v));
    return PolyCurve(plane, std::move(pts));
  }
};

/// Polar dual of a convex spherical polygon.
///
/// Along edge i the arclength tangent t is constant and the dual point
/// gamma x t is the pole of the edge's great circle, so the dual polygon has
/// vertices normalize(v_i x v_{i+1}). The curve is first oriented so that the
/// enclosed domain lies to its left. The dual of the dual returns the source
/// vertices, shifted by one index.
inline PolarCurve polar_dual(const PolyCurve& curve) {
  const auto& plane = curve.plane();
  if (plane.sign() <= 0) throw error(errc::domain, "polar duality needs c > 0");
  const double r = plane.scale();
  Vec3 mean = Vec3::Zero();
  for (const auto& v : curve.vertices()) mean += v.coords / r;
  if (!(mean.norm() > 1e-9)) throw error(errc::hemisphere, "curve is not contained in an open hemisphere");
  const Vec3 pole = mean.normalized();
  for (const auto& v : curve.vertices())
    if (!(v.coords.dot(pole) / r > 1e-9))
      throw error(errc::hemisphere, "curve is not contained in an open hemisphere");
  if (!is_convex(curve)) throw error(errc::not_convex, "polar duality expects a convex curve");

  double turning = 0.0;
  for (double t : turning_angles(curve)) turning += t;
  const PolyCurve oriented = turning < 0.0 ? curve.reversed() : curve;

  PolarCurve out;
  out.verts.reserve(oriented.size());
  for (std::size_t i = 0; i < oriented.size(); ++i) {
    const Vec3 a = oriented.vertex(static_cast<std::ptrdiff_t>(i)).coords / r;
    const Vec3 b = oriented.vertex(static_cast<std::ptrdiff_t>(i) + 1).coords / r;
    out.verts.push_back(a.cross(b).normalized());
  }
  return out;
}

inline PolarCurve polar_dual(const PolarCurve& curve) {
  return polar_dual(curve.to_curve(ModelPlane(1.0)));
}

}  // namespace curvebound
