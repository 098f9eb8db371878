#pragma once

// Projective (geodesic) charts: geodesics map to straight lines.
//   Klein chart of the hyperbolic plane, normalized to the unit disk.
//   Gnomonic chart of an open hemisphere, tangent plane at a pole.

#include <cmath>
#include <utility>

#include "curvebound/plane.hpp"

namespace curvebound {

/// Klein chart (x/w, y/w); lands in the open unit disk for any c < 0.
inline Vec2 klein_map(const ModelPlane& plane, const PlanePoint& p) {
  if (plane.sign() >= 0) throw error(errc::domain, "the Klein map needs c < 0");
  plane.require(p);
  return {p.coords.x() / p.coords.z(), p.coords.y() / p.coords.z()};
}

inline PlanePoint klein_inverse(const ModelPlane& plane, const Vec2& k) {
  if (plane.sign() >= 0) throw error(errc::domain, "the Klein map needs c < 0");
  const double s = 1.0 - k.squaredNorm();
  if (!(s > 0.0)) throw error(errc::domain, "Klein point outside the open unit disk");
  const double w = plane.scale() / std::sqrt(s);
  return PlanePoint(Vec3(k.x() * w, k.y() * w, w));
}

/// Orthonormal basis (e1, e2) of the tangent plane of the unit sphere at u0,
/// with e1 x e2 = u0. At the north pole it is the chart basis.
inline std::pair<Vec3, Vec3> sphere_tangent_basis(const Vec3& u0) {
  const Vec3 axis = std::abs(u0.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = (axis - axis.dot(u0) * u0).normalized();
  return {e1, u0.cross(e1)};
}

/// Central projection onto the tangent plane at pole, in units of length:
/// a point at distance rho from the pole lands at radius r tan(rho / r).
inline Vec2 gnomonic_map(const ModelPlane& plane, const PlanePoint& p, const PlanePoint& pole) {
  if (plane.sign() <= 0) throw error(errc::domain, "the gnomonic map needs c > 0");
  plane.require(p);
  plane.require(pole);
  const double r = plane.scale();
  const Vec3 u = p.coords / r, u0 = pole.coords / r;
  const double cosine = u.dot(u0);
  if (!(cosine > 1e-12)) throw error(errc::hemisphere, "point on or beyond the equator of the pole");
  const Vec3 q = u / cosine - u0;
  const auto [e1, e2] = sphere_tangent_basis(u0);
  return {r * q.dot(e1), r * q.dot(e2)};
}

inline PlanePoint gnomonic_inverse(const ModelPlane& plane, const Vec2& g, const PlanePoint& pole) {
  if (plane.sign() <= 0) throw error(errc::domain, "the gnomonic map needs c > 0");
  const double r = plane.scale();
  const Vec3 u0 = pole.coords / r;
  const auto [e1, e2] = sphere_tangent_basis(u0);
  const Vec3 q = u0 + (g.x() / r) * e1 + (g.y() / r) * e2;
  return PlanePoint(Vec3(r * q.normalized()));
}

/// Chart in which geodesics are straight: identity, gnomonic about pole, or Klein.
inline Vec2 projective_chart(const ModelPlane& plane, const PlanePoint& p, const PlanePoint& pole) {
  switch (plane.sign()) {
    case 0: return p.xy();
    case 1: return gnomonic_map(plane, p, pole);
    default: return klein_map(plane, p);
  }
}

}  // namespace curvebound
