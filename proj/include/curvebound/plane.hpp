#pragma once

// Model planes of constant curvature c and their geometry primitives.
//
// Every point is stored as an ambient 3-vector (x, y, w):
//   c = 0  the Euclidean plane, w = 0;
//   c > 0  the sphere x^2 + y^2 + w^2 = 1/c;
//   c < 0  the upper sheet of the hyperboloid w^2 - x^2 - y^2 = 1/|c|, w > 0.
// The chart origin is (0, 0, 0) for c = 0 and (0, 0, 1/sqrt|c|) otherwise, so
// (x, y) are always "horizontal" coordinates near the origin.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "curvebound/error.hpp"

namespace curvebound {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Relative tolerance on the quadric constraint.
inline constexpr double quadric_tol = 1e-12;

struct PlanePoint {
  Vec3 coords = Vec3::Zero();

  PlanePoint() = default;
  explicit PlanePoint(const Vec3& v) : coords(v) {}
  PlanePoint(double x, double y) : coords(x, y, 0.0) {}

  double x() const { return coords.x(); }
  double y() const { return coords.y(); }
  Vec2 xy() const { return coords.head<2>(); }
};

/// Unit tangent vector at a base point, stored in ambient coordinates.
struct TangentVec {
  PlanePoint base;
  Vec3 dir = Vec3::UnitX();
};

class ModelPlane {
 public:
  explicit ModelPlane(double c = 0.0) : c_(c) {
    if (!std::isfinite(c)) throw error(errc::invalid_input, "curvature must be finite");
  }

  double curvature() const { return c_; }
  int sign() const { return (c_ > 0.0) - (c_ < 0.0); }
  bool euclidean() const { return c_ == 0.0; }

  /// Length scale 1/sqrt|c| (1 for the Euclidean plane).
  double scale() const { return c_ == 0.0 ? 1.0 : 1.0 / std::sqrt(std::abs(c_)); }

  /// pi / sqrt(c) on the sphere, infinite otherwise.
  double injectivity_radius() const {
    return c_ > 0.0 ? std::numbers::pi * scale() : std::numeric_limits<double>::infinity();
  }

  PlanePoint origin() const {
    return c_ == 0.0 ? PlanePoint(0.0, 0.0) : PlanePoint(Vec3(0.0, 0.0, scale()));
  }

  /// Ambient bilinear form: Euclidean for c >= 0, Minkowski (+,+,-) for c < 0.
  double inner(const Vec3& a, const Vec3& b) const {
    return c_ < 0.0 ? a.x() * b.x() + a.y() * b.y() - a.z() * b.z() : a.dot(b);
  }

  /// Residual of the quadric equation relative to its natural scale.
  double quadric_residual(const Vec3& v) const {
    if (c_ == 0.0) return std::abs(v.z());
    const double r2 = scale() * scale();
    const double target = c_ > 0.0 ? r2 : -r2;
    return std::abs(inner(v, v) - target) / std::max(r2, v.squaredNorm());
  }

  bool contains(const PlanePoint& p) const {
    if (!p.coords.allFinite()) return false;
    if (c_ < 0.0 && p.coords.z() <= 0.0) return false;
    return quadric_residual(p.coords) <= quadric_tol;
  }

  void require(const PlanePoint& p) const {
    if (!contains(p)) throw error(errc::invalid_point, "point violates the model quadric");
  }

  /// Validated point from ambient coordinates.
  PlanePoint point(const Vec3& v) const {
    PlanePoint p(v);
    require(p);
    return p;
  }

  /// Projects an ambient vector back onto the quadric (radial rescaling).
  PlanePoint project(const Vec3& v) const {
    if (c_ == 0.0) return PlanePoint(v.x(), v.y());
    if (c_ > 0.0) return PlanePoint(Vec3(v * (scale() / v.norm())));
    const double m = -inner(v, v);
    if (!(m > 0.0) || v.z() <= 0.0)
      throw error(errc::invalid_point, "vector is not timelike future-pointing");
    return PlanePoint(Vec3(v * (scale() / std::sqrt(m))));
  }

  /// Point at geodesic distance rho from the origin in direction theta.
  PlanePoint polar_point(double rho, double theta) const {
    const double r = scale();
    const double cs = std::cos(theta), sn = std::sin(theta);
    if (c_ == 0.0) return PlanePoint(rho * cs, rho * sn);
    if (c_ > 0.0) {
      const double a = rho / r;
      return PlanePoint(Vec3(r * std::sin(a) * cs, r * std::sin(a) * sn, r * std::cos(a)));
    }
    const double a = rho / r;
    return PlanePoint(Vec3(r * std::sinh(a) * cs, r * std::sinh(a) * sn, r * std::cosh(a)));
  }

  bool operator==(const ModelPlane&) const = default;

 private:
  double c_;
};

namespace detail {

inline double metric_norm(const ModelPlane& plane, const Vec3& v) {
  return std::sqrt(std::max(0.0, plane.inner(v, v)));
}

inline void require_tangent(const ModelPlane& plane, const TangentVec& v) {
  plane.require(v.base);
  const double s = plane.scale();
  const double tangency = plane.euclidean() ? std::abs(v.dir.z())
                                            : std::abs(plane.inner(v.dir, v.base.coords)) / s;
  const double unit = std::abs(plane.inner(v.dir, v.dir) - 1.0);
  if (!(tangency <= 1e-12 && unit <= 1e-12) || !v.dir.allFinite())
    throw error(errc::invalid_input, "tangent vector is not unit or not tangent");
}

}  // namespace detail

/// Projects an ambient vector onto the tangent plane at base and normalizes it.
inline TangentVec make_tangent(const ModelPlane& plane, const PlanePoint& base, const Vec3& v) {
  Vec3 d = v;
  if (plane.euclidean()) {
    d.z() = 0.0;
  } else {
    const Vec3& p = base.coords;
    const double pp = plane.inner(p, p);
    d -= (plane.inner(v, p) / pp) * p;
  }
  const double n = detail::metric_norm(plane, d);
  if (!(n > 0.0)) throw error(errc::degenerate, "zero tangent direction");
  return {base, d / n};
}

/// Geodesic distance.
inline double distance(const ModelPlane& plane, const PlanePoint& p, const PlanePoint& q) {
  plane.require(p);
  plane.require(q);
  if (plane.euclidean()) return (p.xy() - q.xy()).norm();
  const double r = plane.scale();
  if (plane.sign() > 0)
    return r * std::atan2(p.coords.cross(q.coords).norm(), p.coords.dot(q.coords));
  // <p-q, p-q> = 4 r^2 sinh^2(d / 2r) on the hyperboloid.
  const Vec3 diff = p.coords - q.coords;
  const double m = std::max(0.0, plane.inner(diff, diff));
  return 2.0 * r * std::asinh(std::sqrt(m) / (2.0 * r));
}

/// Point reached after length t along the geodesic through v.
inline PlanePoint exp_map(const ModelPlane& plane, const TangentVec& v, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw error(errc::invalid_input, "geodesic length must be >= 0");
  detail::require_tangent(plane, v);
  const Vec3& p = v.base.coords;
  if (plane.euclidean()) return PlanePoint(Vec3(p + t * v.dir));
  const double r = plane.scale();
  const double a = t / r;
  if (plane.sign() > 0) return plane.project(std::cos(a) * p + r * std::sin(a) * v.dir);
  return plane.project(std::cosh(a) * p + r * std::sinh(a) * v.dir);
}

/// Initial unit direction of the geodesic from p to q.
inline TangentVec direction_to(const ModelPlane& plane, const PlanePoint& p, const PlanePoint& q) {
  if (plane.euclidean()) {
    const Vec3 d = q.coords - p.coords;
    const double n = d.head<2>().norm();
    if (!(n > 0.0)) throw error(errc::degenerate, "coincident points have no direction");
    return {p, Vec3(d.x() / n, d.y() / n, 0.0)};
  }
  return make_tangent(plane, p, q.coords);
}

/// Rotates a tangent vector by +pi/2 in the oriented tangent plane.
/// Orientation: counterclockwise in the (x, y) chart seen from +w.
inline Vec3 rotate_left(const ModelPlane& plane, const PlanePoint& base, const Vec3& v) {
  if (plane.euclidean()) return {-v.y(), v.x(), 0.0};
  const Vec3 n = base.coords / plane.scale();
  Vec3 j = n.cross(v);
  if (plane.sign() < 0) j.z() = -j.z();
  return j;
}

namespace detail {

inline void require_same_base(const ModelPlane& plane, const TangentVec& u, const TangentVec& v) {
  if ((u.base.coords - v.base.coords).norm() > 1e-12 * std::max(1.0, plane.scale()))
    throw error(errc::mismatched_base, "tangent vectors live at different points");
}

}  // namespace detail

/// Unsigned angle in [0, pi] measured with the Riemannian inner product.
inline double angle_between(const ModelPlane& plane, const TangentVec& u, const TangentVec& v) {
  detail::require_same_base(plane, u, v);
  const double uv = plane.inner(u.dir, v.dir);
  const Vec3 perp = v.dir - uv * u.dir;
  return std::atan2(detail::metric_norm(plane, perp), uv);
}

/// Signed angle from u to v in (-pi, pi], positive counterclockwise.
inline double signed_angle(const ModelPlane& plane, const TangentVec& u, const TangentVec& v) {
  detail::require_same_base(plane, u, v);
  const Vec3 ju = rotate_left(plane, u.base, u.dir);
  return std::atan2(plane.inner(ju, v.dir), plane.inner(u.dir, v.dir));
}

// ---------------------------------------------------------------------------
// Geodesic circles and the length bound.

struct GeoDisk {
  PlanePoint center;
  double radius = 0.0;
};

namespace detail {

inline void require_radius(double c, double r0) {
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw error(errc::domain, "circle radius must be positive");
  if (c > 0.0 && !(std::sqrt(c) * r0 < std::numbers::pi / 2.0))
    throw error(errc::domain, "spherical disk radius must stay below pi/(2 sqrt c)");
}

}  // namespace detail

/// Geodesic curvature of a circle of radius r0 on the plane of curvature c.
inline double circle_curvature(double c, double r0) {
  detail::require_radius(c, r0);
  if (c == 0.0) return 1.0 / r0;
  const double k = std::sqrt(std::abs(c));
  if (c > 0.0) return k / std::tan(k * r0);
  return k / std::tanh(k * r0);
}

/// Radius of the circle whose geodesic curvature is lambda.
inline double circle_radius_from_curvature(double c, double lambda) {
  if (!std::isfinite(c) || !std::isfinite(lambda)) throw error(errc::invalid_input, "non-finite argument");
  if (!(c + lambda * lambda > 0.0))
    throw error(errc::hypothesis, "c + lambda^2 > 0 fails: no circle has this curvature");
  if (!(lambda > 0.0)) throw error(errc::domain, "lambda must be positive");
  if (c == 0.0) return 1.0 / lambda;
  const double k = std::sqrt(std::abs(c));
  if (c > 0.0) return std::atan(k / lambda) / k;
  return std::atanh(k / lambda) / k;
}

inline double circle_circumference(double c, double r0) {
  detail::require_radius(c, r0);
  if (c == 0.0) return two_pi * r0;
  const double k = std::sqrt(std::abs(c));
  if (c > 0.0) return two_pi * std::sin(k * r0) / k;
  return two_pi * std::sinh(k * r0) / k;
}

/// Sharp upper bound on the length of a lambda-convex curve: the
/// circumference 2 pi / sqrt(c + lambda^2) of the circle of curvature lambda.
inline double length_bound(double c, double lambda) {
  if (!std::isfinite(c) || !std::isfinite(lambda)) throw error(errc::invalid_input, "non-finite argument");
  if (!(c + lambda * lambda > 0.0))
    throw error(errc::hypothesis, "c + lambda^2 > 0 fails");
  if (!(lambda > 0.0)) throw error(errc::domain, "lambda must be positive");
  return two_pi / std::sqrt(c + lambda * lambda);
}

// ---------------------------------------------------------------------------
// Isometries. For c = 0 the matrix acts on homogeneous (x, y, 1); otherwise it
// acts linearly on the ambient vector (orthogonal for c > 0, Lorentz for c < 0).

class PlaneIsometry {
 public:
  PlaneIsometry() = default;
  explicit PlaneIsometry(const Mat3& m) : m_(m) {}

  PlanePoint apply(const ModelPlane& plane, const PlanePoint& p) const {
    if (plane.euclidean()) {
      const Vec3 h = m_ * Vec3(p.x(), p.y(), 1.0);
      return PlanePoint(h.x(), h.y());
    }
    return PlanePoint(Vec3(m_ * p.coords));
  }

  /// Composition: (a * b).apply(p) == a.apply(b.apply(p)).
  friend PlaneIsometry operator*(const PlaneIsometry& a, const PlaneIsometry& b) {
    return PlaneIsometry(Mat3(a.m_ * b.m_));
  }

  const Mat3& matrix() const { return m_; }

 private:
  Mat3 m_ = Mat3::Identity();
};

/// Rotation by angle about the chart origin.
inline PlaneIsometry rotation_about_origin(const ModelPlane&, double angle) {
  Mat3 m = Mat3::Identity();
  m(0, 0) = std::cos(angle);
  m(0, 1) = -std::sin(angle);
  m(1, 0) = std::sin(angle);
  m(1, 1) = std::cos(angle);
  return PlaneIsometry(m);
}

/// Translation by distance d along the geodesic through the origin in the x direction.
inline PlaneIsometry translation_along_x(const ModelPlane& plane, double d) {
  Mat3 m = Mat3::Identity();
  if (plane.euclidean()) {
    m(0, 2) = d;
    return PlaneIsometry(m);
  }
  const double a = d / plane.scale();
  if (plane.sign() > 0) {
    m(0, 0) = std::cos(a);
    m(0, 2) = std::sin(a);
    m(2, 0) = -std::sin(a);
    m(2, 2) = std::cos(a);
  } else {
    m(0, 0) = std::cosh(a);
    m(0, 2) = std::sinh(a);
    m(2, 0) = std::sinh(a);
    m(2, 2) = std::cosh(a);
  }
  return PlaneIsometry(m);
}

/// Orientation-preserving isometry sending p to the chart origin.
inline PlaneIsometry isometry_to_origin(const ModelPlane& plane, const PlanePoint& p) {
  plane.require(p);
  const double theta = std::atan2(p.y(), p.x());
  const double d = distance(plane, plane.origin(), p);
  return translation_along_x(plane, -d) * rotation_about_origin(plane, -theta);
}

}  // namespace curvebound
