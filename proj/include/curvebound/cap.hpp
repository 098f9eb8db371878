#pragma once

// Polyhedral convex caps over a planar convex polygon and the swerve
// comparison of their common boundary: measured on the cap surface versus on
// the base plane, plus the curvature measures of the doubled surfaces.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "curvebound/plane.hpp"
#include "curvebound/predicates.hpp"

namespace curvebound {

using Triangle = std::array<std::size_t, 3>;

namespace detail {

/// Upper convex hull of base vertices (height 0, indices [0, nb)) and raised
/// points. Returns faces oriented counterclockwise seen from outside, and the
/// indices of points that are not vertices of the upper hull.
inline std::pair<std::vector<Triangle>, std::vector<std::size_t>> upper_hull(const std::vector<Vec3>& pts,
                                                                             std::size_t nb) {
  using predicates::orient3d;
  std::size_t top = nb;
  for (std::size_t i = nb; i < pts.size(); ++i)
    if (pts[i].z() > pts[top].z()) top = i;

  std::vector<Triangle> faces;
  std::vector<bool> alive;
  auto add = [&](std::size_t a, std::size_t b, std::size_t c) {
    faces.push_back({a, b, c});
    alive.push_back(true);
  };
  // Initial tetrahedron: three base vertices and the highest point.
  const std::array<std::size_t, 4> t{0, 1, 2, top};
  const std::array<std::array<int, 4>, 4> combos{{{0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 3, 1}, {1, 2, 3, 0}}};
  for (const auto& k : combos) {
    const auto a = t[static_cast<std::size_t>(k[0])], b = t[static_cast<std::size_t>(k[1])],
               c = t[static_cast<std::size_t>(k[2])], d = t[static_cast<std::size_t>(k[3])];
    if (orient3d(pts[a], pts[b], pts[c], pts[d]) > 0) add(a, b, c);
    else add(a, c, b);
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 3; i < nb; ++i) order.push_back(i);
  for (std::size_t i = nb; i < pts.size(); ++i)
    if (i != top) order.push_back(i);

  for (std::size_t p : order) {
    std::vector<std::size_t> visible;
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (alive[f] && orient3d(pts[faces[f][0]], pts[faces[f][1]], pts[faces[f][2]], pts[p]) < 0)
        visible.push_back(f);
    if (visible.empty()) continue;
    std::map<std::pair<std::size_t, std::size_t>, int> edges;
    for (std::size_t f : visible)
      for (int e = 0; e < 3; ++e) ++edges[{faces[f][static_cast<std::size_t>(e)], faces[f][static_cast<std::size_t>((e + 1) % 3)]}];
    for (std::size_t f : visible) alive[f] = false;
    for (const auto& [edge, count] : edges)
      if (!edges.contains({edge.second, edge.first})) add(edge.first, edge.second, p);
  }

  std::vector<Triangle> upper;
  std::vector<bool> used(pts.size(), false);
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (!alive[f]) continue;
    const auto& [a, b, c] = faces[f];
    if (predicates::orient2d(pts[a].head<2>(), pts[b].head<2>(), pts[c].head<2>()) > 0) {
      upper.push_back(faces[f]);
      used[a] = used[b] = used[c] = true;
    }
  }
  // Points skipped on insertion, or buried by later insertions.
  std::vector<std::size_t> dropped;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!used[i]) dropped.push_back(i);
  return {upper, dropped};
}

inline double corner_angle(const Vec3& at, const Vec3& p, const Vec3& q) {
  const Vec3 u = p - at, w = q - at;
  return std::atan2(u.cross(w).norm(), u.dot(w));
}

}  // namespace detail

/// Polyhedral convex graph over a convex polygon; base vertices sit at
/// height 0 and come first in vertices().
class ConvexCap {
 public:
  ConvexCap(std::vector<Vec2> base, std::vector<Vec3> interior) {
    const std::size_t nb = base.size();
    if (nb < 3) throw error(errc::invalid_input, "base polygon needs at least 3 vertices");
    for (const auto& b : base)
      if (!b.allFinite()) throw error(errc::invalid_input, "non-finite base vertex");
    double area2 = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
      const Vec2& a = base[i];
      const Vec2& b = base[(i + 1) % nb];
      area2 += a.x() * b.y() - a.y() * b.x();
    }
    if (area2 < 0.0) std::reverse(base.begin(), base.end());
    for (std::size_t i = 0; i < nb; ++i)
      if (predicates::orient2d(base[i], base[(i + 1) % nb], base[(i + 2) % nb]) <= 0)
        throw error(errc::not_convex, "base polygon is not strictly convex at vertex " + std::to_string((i + 1) % nb));
    double winding = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
      const Vec2 u = base[(i + 1) % nb] - base[i], w = base[(i + 2) % nb] - base[(i + 1) % nb];
      winding += std::atan2(u.x() * w.y() - u.y() * w.x(), u.dot(w));
    }
    if (std::abs(winding - two_pi) > 1e-6) throw error(errc::not_convex, "base polygon winds more than once");

    for (std::size_t i = 0; i < interior.size(); ++i) {
      const Vec3& p = interior[i];
      if (!p.allFinite() || !(p.z() > 0.0)) throw error(errc::invalid_input, "interior heights must be > 0");
      for (std::size_t k = 0; k < nb; ++k)
        if (predicates::orient2d(base[k], base[(k + 1) % nb], p.head<2>()) <= 0)
          throw error(errc::invalid_input, "interior point " + std::to_string(i) + " is not strictly inside the base");
      for (std::size_t j = 0; j < i; ++j)
        if (interior[j].head<2>() == p.head<2>()) throw error(errc::invalid_input, "duplicate interior points");
    }

    std::vector<Vec3> pts;
    for (const auto& b : base) pts.emplace_back(b.x(), b.y(), 0.0);
    for (const auto& p : interior) pts.push_back(p);

    base_ = std::move(base);
    if (interior.empty()) {
      for (std::size_t i = 1; i + 1 < nb; ++i) faces_.push_back({0, i, i + 1});
      verts_ = std::move(pts);
      return;
    }
    auto [faces, dropped] = detail::upper_hull(pts, nb);
    // Compact the vertex list to the hull vertices.
    std::vector<std::size_t> remap(pts.size(), static_cast<std::size_t>(-1));
    std::vector<bool> is_dropped(pts.size(), false);
    for (std::size_t d : dropped) {
      is_dropped[d] = true;
      if (d < nb) throw error(errc::degenerate, "base vertex lost from the hull");
      dropped_.push_back(d - nb);
    }
    std::sort(dropped_.begin(), dropped_.end());
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (!is_dropped[i]) {
        remap[i] = verts_.size();
        verts_.push_back(pts[i]);
      }
    for (auto& f : faces) {
      for (auto& v : f) v = remap[v];
      faces_.push_back(f);
    }
  }

  std::span<const Vec2> base() const { return base_; }
  std::size_t base_size() const { return base_.size(); }
  std::span<const Vec3> vertices() const { return verts_; }
  std::span<const Triangle> faces() const { return faces_; }
  /// Indices (into the constructor's interior list) of points below the hull.
  std::span<const std::size_t> dropped() const { return dropped_; }

  /// Sum of the projected face areas over the base area minus one.
  double graph_defect() const {
    double base2 = 0.0, proj2 = 0.0;
    for (std::size_t i = 0; i < base_.size(); ++i) {
      const Vec2& a = base_[i];
      const Vec2& b = base_[(i + 1) % base_.size()];
      base2 += a.x() * b.y() - a.y() * b.x();
    }
    for (const auto& f : faces_) {
      const Vec2 a = verts_[f[0]].head<2>(), b = verts_[f[1]].head<2>(), c = verts_[f[2]].head<2>();
      const Vec2 u = b - a, w = c - a;
      proj2 += u.x() * w.y() - u.y() * w.x();
    }
    return proj2 / base2 - 1.0;
  }

  /// Every face plane supports the vertex set from above (exact).
  bool is_convex() const {
    for (const auto& f : faces_)
      for (const auto& v : verts_)
        if (predicates::orient3d(verts_[f[0]], verts_[f[1]], verts_[f[2]], v) < 0) return false;
    return true;
  }

  /// Every projected face is counterclockwise and the projections tile the base.
  bool is_graph() const {
    for (const auto& f : faces_)
      if (predicates::orient2d(verts_[f[0]].head<2>(), verts_[f[1]].head<2>(), verts_[f[2]].head<2>()) <= 0)
        return false;
    return std::abs(graph_defect()) <= 1e-12;
  }

  /// Sum of face angles at each vertex.
  std::vector<double> angle_sums() const {
    std::vector<double> sums(verts_.size(), 0.0);
    for (const auto& f : faces_) {
      const Vec3 &a = verts_[f[0]], &b = verts_[f[1]], &c = verts_[f[2]];
      if (!((b - a).cross(c - a).norm() > 0.0)) throw error(errc::degenerate, "degenerate cap face");
      sums[f[0]] += detail::corner_angle(a, b, c);
      sums[f[1]] += detail::corner_angle(b, c, a);
      sums[f[2]] += detail::corner_angle(c, a, b);
    }
    return sums;
  }

 private:
  std::vector<Vec2> base_;
  std::vector<Vec3> verts_;
  std::vector<Triangle> faces_;
  std::vector<std::size_t> dropped_;
};

inline ConvexCap build_cap(std::vector<Vec2> base, std::vector<Vec3> interior) {
  return ConvexCap(std::move(base), std::move(interior));
}

/// Swerve of the boundary on the base plane: pi minus the interior angle.
inline std::vector<double> boundary_swerve_planar(const ConvexCap& cap) {
  const auto base = cap.base();
  const std::size_t n = base.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& prev = base[(i + n - 1) % n];
    const Vec2& next = base[(i + 1) % n];
    const Vec2 u = prev - base[i], w = next - base[i];
    out[i] = std::numbers::pi - std::atan2(std::abs(u.x() * w.y() - u.y() * w.x()), u.dot(w));
  }
  return out;
}

/// Swerve of the boundary on the cap surface: pi minus the total face angle.
inline std::vector<double> boundary_swerve_intrinsic(const ConvexCap& cap) {
  const auto sums = cap.angle_sums();
  std::vector<double> out(cap.base_size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::numbers::pi - sums[i];
  return out;
}

struct CapSwerveReport {
  std::vector<double> tau_plane;
  std::vector<double> tau_cap;
  std::vector<double> omega;       ///< curvature of the closed cap+base surface at the seam
  std::vector<double> psi_double;  ///< curvature of the doubled base, 2 tau_plane
  double total_tau_plane = 0.0;
  double total_tau_cap = 0.0;
  double total_omega = 0.0;
  double total_psi_double = 0.0;
  double identity_error = 0.0;     ///< max |omega - (tau_cap + tau_plane)|
  bool psi_dominates = false;      ///< psi_double >= omega at every seam vertex
  double interior_defect = 0.0;    ///< sum of angle defects at raised hull vertices
  double total_curvature = 0.0;    ///< interior_defect + total_omega, 4 pi by Gauss-Bonnet
  double lambda_hat_plane = 0.0;   ///< boundary specific-curvature infimum on the base
  double lambda_hat_cap = 0.0;     ///< same, with swerve measured on the cap
};

inline CapSwerveReport doubling_curvature(const ConvexCap& cap) {
  constexpr double pi = std::numbers::pi;
  const auto base = cap.base();
  const std::size_t n = base.size();
  const auto sums = cap.angle_sums();
  CapSwerveReport rep;
  rep.tau_plane = boundary_swerve_planar(cap);
  rep.tau_cap.resize(n);
  rep.omega.resize(n);
  rep.psi_double.resize(n);
  rep.psi_dominates = true;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& verts = cap.vertices();
    const double planar_angle =
        detail::corner_angle(verts[i], verts[(i + n - 1) % n], verts[(i + 1) % n]);
    rep.tau_cap[i] = pi - sums[i];
    rep.omega[i] = 2.0 * pi - (sums[i] + planar_angle);
    rep.psi_double[i] = 2.0 * rep.tau_plane[i];
    rep.identity_error = std::max(rep.identity_error, std::abs(rep.omega[i] - (rep.tau_cap[i] + rep.tau_plane[i])));
    rep.psi_dominates = rep.psi_dominates && rep.psi_double[i] >= rep.omega[i] - 1e-10;
    rep.total_tau_plane += rep.tau_plane[i];
    rep.total_tau_cap += rep.tau_cap[i];
    rep.total_omega += rep.omega[i];
    rep.total_psi_double += rep.psi_double[i];
  }
  for (std::size_t v = n; v < sums.size(); ++v) rep.interior_defect += 2.0 * pi - sums[v];
  rep.total_curvature = rep.interior_defect + rep.total_omega;

  rep.lambda_hat_plane = rep.lambda_hat_cap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double b = 0.5 * ((base[i] - base[(i + n - 1) % n]).norm() + (base[(i + 1) % n] - base[i]).norm());
    rep.lambda_hat_plane = std::min(rep.lambda_hat_plane, rep.tau_plane[i] / b);
    rep.lambda_hat_cap = std::min(rep.lambda_hat_cap, rep.tau_cap[i] / b);
  }
  return rep;
}

struct MonotonicityResult {
  bool holds = false;
  std::size_t worst_vertex = 0;
  double worst_margin = 0.0;  ///< max over vertices of tau_cap - tau_plane
};

/// tau_cap <= tau_plane + 1e-10 at every boundary vertex; subarc swerve is a
/// sum of vertex terms, so this covers every subarc.
inline MonotonicityResult monotonicity_check(const ConvexCap& cap) {
  const auto plane = boundary_swerve_planar(cap);
  const auto intrinsic = boundary_swerve_intrinsic(cap);
  MonotonicityResult out;
  out.worst_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < plane.size(); ++i) {
    const double m = intrinsic[i] - plane[i];
    if (m > out.worst_margin) {
      out.worst_margin = m;
      out.worst_vertex = i;
    }
  }
  out.holds = out.worst_margin <= 1e-10;
  return out;
}

}  // namespace curvebound
