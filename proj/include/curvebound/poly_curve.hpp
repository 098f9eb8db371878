#pragma once

// Closed geodesic polygons on a model plane: edge lengths, signed turning
// angles, total swerve, and the discrete specific-curvature infimum.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "curvebound/charts.hpp"
#include "curvebound/plane.hpp"
#include "curvebound/predicates.hpp"

namespace curvebound {

class PolyCurve {
 public:
  PolyCurve(ModelPlane plane, std::vector<PlanePoint> verts) : plane_(plane), verts_(std::move(verts)) {
    if (verts_.size() < 3) throw error(errc::invalid_input, "a closed polygon needs at least 3 vertices");
    for (const auto& v : verts_) plane_.require(v);
    const double tiny = 1e-15 * plane_.scale();
    for (std::size_t i = 0; i < verts_.size(); ++i) {
      const auto& a = verts_[i];
      const auto& b = verts_[(i + 1) % verts_.size()];
      if ((a.coords - b.coords).norm() <= tiny)
        throw error(errc::degenerate, "consecutive vertices coincide at index " + std::to_string(i));
    }
  }

  static PolyCurve euclidean(std::span<const Vec2> pts) {
    std::vector<PlanePoint> v;
    v.reserve(pts.size());
    for (const auto& p : pts) v.emplace_back(p.x(), p.y());
    return PolyCurve(ModelPlane(0.0), std::move(v));
  }

  const ModelPlane& plane() const { return plane_; }
  std::span<const PlanePoint> vertices() const { return verts_; }
  std::size_t size() const { return verts_.size(); }

  /// Cyclic vertex access.
  const PlanePoint& vertex(std::ptrdiff_t i) const {
    const auto n = static_cast<std::ptrdiff_t>(verts_.size());
    return verts_[static_cast<std::size_t>(((i % n) + n) % n)];
  }

  PolyCurve reversed() const {
    std::vector<PlanePoint> v(verts_.rbegin(), verts_.rend());
    return PolyCurve(plane_, std::move(v));
  }

  /// Same curve with vertex k relabeled as vertex 0.
  PolyCurve relabeled(std::size_t k) const {
    std::vector<PlanePoint> v;
    v.reserve(verts_.size());
    for (std::size_t i = 0; i < verts_.size(); ++i) v.push_back(vertex(static_cast<std::ptrdiff_t>(i + k)));
    return PolyCurve(plane_, std::move(v));
  }

  PolyCurve transformed(const PlaneIsometry& iso) const {
    std::vector<PlanePoint> v;
    v.reserve(verts_.size());
    for (const auto& p : verts_) v.push_back(iso.apply(plane_, p));
    return PolyCurve(plane_, std::move(v));
  }

 private:
  ModelPlane plane_;
  std::vector<PlanePoint> verts_;
};

/// Edge i runs from vertex i to vertex i + 1.
inline std::vector<double> edge_lengths(const PolyCurve& curve) {
  std::vector<double> out(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i)
    out[i] = distance(curve.plane(), curve.vertex(static_cast<std::ptrdiff_t>(i)),
                      curve.vertex(static_cast<std::ptrdiff_t>(i) + 1));
  return out;
}

inline double perimeter(const PolyCurve& curve) {
  double s = 0.0;
  for (double e : edge_lengths(curve)) s += e;
  return s;
}

/// Turning angles closer than this to +-pi are rejected as cusps.
inline constexpr double cusp_margin = 1e-6;

/// Signed exterior angle at each vertex between the incoming and outgoing
/// geodesic tangents; positive where the curve turns left.
inline std::vector<double> turning_angles(const PolyCurve& curve) {
  const auto& plane = curve.plane();
  std::vector<double> out(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto k = static_cast<std::ptrdiff_t>(i);
    const auto& v = curve.vertex(k);
    const TangentVec out_dir = direction_to(plane, v, curve.vertex(k + 1));
    TangentVec in_dir = direction_to(plane, v, curve.vertex(k - 1));
    in_dir.dir = -in_dir.dir;
    const double a = signed_angle(plane, in_dir, out_dir);
    if (std::abs(a) > std::numbers::pi - cusp_margin)
      throw error(errc::cusp, "cusp at vertex " + std::to_string(i));
    out[i] = a;
  }
  return out;
}

/// Vertex coordinates in a chart where edges are straight segments: the
/// identity for c = 0, gnomonic about the mean direction for c > 0, Klein for c < 0.
inline std::vector<Vec2> chart_polygon(const PolyCurve& curve) {
  const auto& plane = curve.plane();
  PlanePoint pole = plane.origin();
  if (plane.sign() > 0) {
    Vec3 mean = Vec3::Zero();
    for (const auto& v : curve.vertices()) mean += v.coords;
    if (!(mean.norm() > 1e-9 * plane.scale()))
      throw error(errc::hemisphere, "curve is not contained in an open hemisphere");
    pole = plane.project(mean);
  }
  std::vector<Vec2> out;
  out.reserve(curve.size());
  for (const auto& v : curve.vertices()) out.push_back(projective_chart(plane, v, pole));
  return out;
}

/// Convex: all chart turns share one sign and the chart polygon winds once.
/// Projective charts preserve geodesic convexity.
inline bool is_convex(const PolyCurve& curve) {
  std::vector<Vec2> pts;
  try {
    pts = chart_polygon(curve);
  } catch (const error&) {
    return false;
  }
  const std::size_t n = pts.size();
  int sign = 0;
  double winding = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = pts[(i + n - 1) % n];
    const Vec2& b = pts[i];
    const Vec2& c = pts[(i + 1) % n];
    const Vec2 u = b - a, w = c - b;
    const double cross = u.x() * w.y() - u.y() * w.x();
    const double scale = u.norm() * w.norm();
    if (std::abs(cross) > 1e-14 * scale) {
      const int s = cross > 0.0 ? 1 : -1;
      if (sign != 0 && s != sign) return false;
      sign = s;
    }
    winding += std::atan2(cross, u.dot(w));
  }
  return sign != 0 && std::abs(std::abs(winding) - two_pi) < 1e-6;
}

struct SwerveTotal {
  double value = 0.0;      ///< sum of turning angles, positively oriented
  bool convex = false;
  int orientation = 1;     ///< +1 counterclockwise, -1 clockwise
};

/// Total swerve of the positively oriented curve. Non-convex input is still
/// summed and flagged.
inline SwerveTotal total_swerve(const PolyCurve& curve) {
  double sum = 0.0;
  for (double t : turning_angles(curve)) sum += t;
  SwerveTotal out;
  out.orientation = sum < 0.0 ? -1 : 1;
  out.value = std::abs(sum);
  out.convex = is_convex(curve);
  return out;
}

/// Enclosed area from a triangle fan: shoelace for c = 0, signed solid-angle
/// (tan-half) formulas with Euclidean or Minkowski products for c != 0.
/// Independent of the turning angles.
inline double enclosed_area(const PolyCurve& curve) {
  const auto& plane = curve.plane();
  const std::size_t n = curve.size();
  double area = 0.0;
  if (plane.euclidean()) {
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = curve.vertex(static_cast<std::ptrdiff_t>(i)).xy();
      const Vec2 b = curve.vertex(static_cast<std::ptrdiff_t>(i) + 1).xy();
      area += a.x() * b.y() - a.y() * b.x();
    }
    return std::abs(0.5 * area);
  }
  const double r = plane.scale();
  const Vec3 a = curve.vertex(0).coords / r;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec3 b = curve.vertex(static_cast<std::ptrdiff_t>(i)).coords / r;
    const Vec3 c = curve.vertex(static_cast<std::ptrdiff_t>(i) + 1).coords / r;
    Mat3 m;
    m.row(0) = a;
    m.row(1) = b;
    m.row(2) = c;
    const double det = m.determinant();
    const double denom = plane.sign() > 0 ? 1.0 + a.dot(b) + b.dot(c) + c.dot(a)
                                          : 1.0 - plane.inner(a, b) - plane.inner(b, c) - plane.inner(c, a);
    area += 2.0 * std::atan2(det, denom);
  }
  return std::abs(area) * r * r;
}

/// Geodesic diameter (max vertex-pair distance), via monotone surrogates.
inline double diameter(const PolyCurve& curve) {
  const auto& plane = curve.plane();
  const auto verts = curve.vertices();
  double best = 0.0;
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = i + 1; j < verts.size(); ++j) {
      const Vec3 d = verts[i].coords - verts[j].coords;
      best = std::max(best, plane.inner(d, d));
    }
  if (plane.euclidean()) return std::sqrt(best);
  const double r = plane.scale();
  if (plane.sign() > 0) return 2.0 * r * std::asin(std::min(1.0, std::sqrt(best) / (2.0 * r)));
  return 2.0 * r * std::asinh(std::sqrt(best) / (2.0 * r));
}

// ---------------------------------------------------------------------------
// Specific curvature.

struct VertexRun {
  std::size_t first = 0;
  std::size_t count = 1;
};

struct SwerveReport {
  double total_swerve = 0.0;
  std::vector<double> turning;  ///< positively oriented
  double perimeter = 0.0;
  double lambda_hat = 0.0;      ///< min over vertex runs of swerve / run length
  VertexRun argmin_run;
};

namespace detail {

struct RunData {
  std::vector<double> turning;
  std::vector<double> edges;
  double total = 0.0;
  double perimeter = 0.0;
};

inline RunData run_data(const PolyCurve& curve) {
  RunData d;
  d.turning = turning_angles(curve);
  d.edges = edge_lengths(curve);
  double sum = 0.0;
  for (double t : d.turning) sum += t;
  if (sum < 0.0)
    for (double& t : d.turning) t = -t;
  for (double t : d.turning) d.total += t;
  for (double e : d.edges) d.perimeter += e;
  return d;
}

}  // namespace detail

/// Discrete specific-curvature infimum over midpoint-to-midpoint subarcs.
///
/// A run of vertices i..j carries their full turnings and has length
/// e_{i-1}/2 + e_i + ... + e_{j-1} + e_j/2, which is the sum of the per-vertex
/// weights b_k = (e_{k-1} + e_k)/2. A ratio of sums is never below the smallest
/// of its term ratios (mediant inequality), so the minimum over all runs is
/// attained by a single vertex and one linear pass suffices.
inline SwerveReport min_specific_curvature(const PolyCurve& curve) {
  auto d = detail::run_data(curve);
  const std::size_t n = curve.size();
  SwerveReport rep;
  rep.lambda_hat = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double b = (d.edges[(k + n - 1) % n] + d.edges[k]) / 2.0;
    const double ratio = d.turning[k] / b;
    if (ratio < rep.lambda_hat) {
      rep.lambda_hat = ratio;
      rep.argmin_run = {k, 1};
    }
  }
  rep.total_swerve = d.total;
  rep.perimeter = d.perimeter;
  rep.turning = std::move(d.turning);
  return rep;
}

/// O(n^2) enumeration of every cyclic vertex run. Runs are visited shortest
/// first; a longer run replaces the incumbent only when it is smaller by more
/// than rounding, so ties resolve to the shortest run.
inline SwerveReport min_specific_curvature_bruteforce(const PolyCurve& curve) {
  auto d = detail::run_data(curve);
  const std::size_t n = curve.size();
  SwerveReport rep;
  rep.lambda_hat = std::numeric_limits<double>::infinity();
  constexpr double margin = 16.0 * std::numeric_limits<double>::epsilon();
  for (std::size_t len = 1; len <= n; ++len) {
    for (std::size_t i = 0; i < n; ++i) {
      double swerve = 0.0;
      for (std::size_t k = 0; k < len; ++k) swerve += d.turning[(i + k) % n];
      double length = d.edges[(i + n - 1) % n] / 2.0;
      for (std::size_t k = 0; k + 1 < len; ++k) length += d.edges[(i + k) % n];
      length += d.edges[(i + len - 1) % n] / 2.0;
      const double ratio = swerve / length;
      const bool better = len == 1 ? ratio < rep.lambda_hat
                                   : ratio < rep.lambda_hat - margin * std::abs(rep.lambda_hat);
      if (better) {
        rep.lambda_hat = ratio;
        rep.argmin_run = {i, len};
      }
    }
  }
  rep.total_swerve = d.total;
  rep.perimeter = d.perimeter;
  rep.turning = std::move(d.turning);
  return rep;
}

struct ConvexityCheck {
  bool lambda_convex = false;
  SwerveReport report;
};

inline ConvexityCheck is_lambda_convex(const PolyCurve& curve, double lambda, double tol) {
  if (!(lambda > 0.0)) throw error(errc::invalid_input, "lambda must be positive");
  ConvexityCheck out;
  out.report = min_specific_curvature(curve);
  out.lambda_convex = out.report.lambda_hat >= lambda - tol;
  return out;
}

// ---------------------------------------------------------------------------
// Simplicity.

namespace detail {

template <class Orient>
bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p, Orient orient) {
  if (orient(a, b, p) != 0) return false;
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

template <class Orient>
bool segments_meet(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, Orient orient) {
  if (std::max(a.x(), b.x()) < std::min(c.x(), d.x()) || std::max(c.x(), d.x()) < std::min(a.x(), b.x()) ||
      std::max(a.y(), b.y()) < std::min(c.y(), d.y()) || std::max(c.y(), d.y()) < std::min(a.y(), b.y()))
    return false;
  const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  return on_segment(a, b, c, orient) || on_segment(a, b, d, orient) || on_segment(c, d, a, orient) ||
         on_segment(c, d, b, orient);
}

template <class Orient>
bool polygon_simple(const std::vector<Vec2>& p, Orient orient) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    // Adjacent edges share a vertex; they must not fold back onto each other.
    const Vec2& a = p[i];
    const Vec2& b = p[(i + 1) % n];
    const Vec2& c = p[(i + 2) % n];
    if (orient(a, b, c) == 0 && (c - b).dot(a - b) > 0.0) return false;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_meet(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n], orient)) return false;
    }
  return true;
}

}  // namespace detail

/// Non-self-intersection test. Exact predicates on the chart for c = 0;
/// for c != 0 the projective chart is used and near-degenerate orientations
/// count as contact, so the answer errs towards "not simple".
inline bool is_simple(const PolyCurve& curve) {
  std::vector<Vec2> pts;
  try {
    pts = chart_polygon(curve);
  } catch (const error&) {
    return false;
  }
  if (curve.plane().euclidean()) return detail::polygon_simple(pts, predicates::orient2d);
  const auto fuzzy = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    const Vec2 u = b - a, w = c - a;
    const double det = u.x() * w.y() - u.y() * w.x();
    const double tol = 1e-12 * (u.norm() * w.norm() + 1e-300);
    return det > tol ? 1 : (det < -tol ? -1 : 0);
  };
  return detail::polygon_simple(pts, fuzzy);
}

}  // namespace curvebound
