#pragma once

// Sign-exact orientation predicates: a double-precision evaluation with a
// static forward error bound, falling back to rational arithmetic when the
// floating-point sign cannot be trusted.

#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

#include "curvebound/plane.hpp"

namespace curvebound::predicates {

namespace detail {

using rational = boost::multiprecision::cpp_rational;

inline constexpr double eps = std::numeric_limits<double>::epsilon() * 0.5;

inline int sign_of(const rational& r) { return r.sign(); }

inline int orient2d_exact(const Vec2& a, const Vec2& b, const Vec2& c) {
  const rational ax(a.x()), ay(a.y()), bx(b.x()), by(b.y()), cx(c.x()), cy(c.y());
  return sign_of((bx - ax) * (cy - ay) - (by - ay) * (cx - ax));
}

inline int orient3d_exact(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const rational adx = rational(a.x()) - rational(d.x()), ady = rational(a.y()) - rational(d.y()),
                 adz = rational(a.z()) - rational(d.z());
  const rational bdx = rational(b.x()) - rational(d.x()), bdy = rational(b.y()) - rational(d.y()),
                 bdz = rational(b.z()) - rational(d.z());
  const rational cdx = rational(c.x()) - rational(d.x()), cdy = rational(c.y()) - rational(d.y()),
                 cdz = rational(c.z()) - rational(d.z());
  return sign_of(adx * (bdy * cdz - bdz * cdy) + bdx * (cdy * adz - cdz * ady) +
                 cdx * (ady * bdz - adz * bdy));
}

}  // namespace detail

/// Sign of the signed area of (a, b, c): +1 counterclockwise, -1 clockwise, 0 collinear.
inline int orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double detleft = (b.x() - a.x()) * (c.y() - a.y());
  const double detright = (b.y() - a.y()) * (c.x() - a.x());
  const double det = detleft - detright;
  const double bound = (3.0 + 16.0 * detail::eps) * detail::eps * (std::abs(detleft) + std::abs(detright));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return detail::orient2d_exact(a, b, c);
}

/// Sign of det[a-d, b-d, c-d]: positive when d lies below the plane through
/// a, b, c oriented counterclockwise seen from above.
inline int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const Vec3 ad = a - d, bd = b - d, cd = c - d;
  const double t1 = bd.y() * cd.z(), t2 = bd.z() * cd.y();
  const double t3 = cd.y() * ad.z(), t4 = cd.z() * ad.y();
  const double t5 = ad.y() * bd.z(), t6 = ad.z() * bd.y();
  const double det = ad.x() * (t1 - t2) + bd.x() * (t3 - t4) + cd.x() * (t5 - t6);
  const double permanent = std::abs(ad.x()) * (std::abs(t1) + std::abs(t2)) +
                           std::abs(bd.x()) * (std::abs(t3) + std::abs(t4)) +
                           std::abs(cd.x()) * (std::abs(t5) + std::abs(t6));
  const double bound = (7.0 + 56.0 * detail::eps) * detail::eps * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return detail::orient3d_exact(a, b, c, d);
}

}  // namespace curvebound::predicates
