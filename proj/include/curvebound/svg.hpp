#pragma once

// Static SVG plots. Coordinates are printed with fixed precision so the bytes
// depend only on the input.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "curvebound/cap.hpp"
#include "curvebound/charts.hpp"
#include "curvebound/rolling.hpp"
#include "curvebound/support_curve.hpp"

namespace curvebound::svg {

namespace detail {

struct Box {
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ymin = xmin, ymax = xmax;

  void add(const Vec2& p) {
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y());
    ymax = std::max(ymax, p.y());
  }
};

inline std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

class Canvas {
 public:
  static constexpr double width = 640.0;
  static constexpr double pad = 24.0;
  static constexpr double footer = 64.0;

  explicit Canvas(const Box& box) : box_(box) {
    const double span = std::max({box.xmax - box.xmin, box.ymax - box.ymin, 1e-12});
    scale_ = (width - 2 * pad) / span;
    height_ = (box.ymax - box.ymin) * scale_ + 2 * pad + footer;
  }

  Vec2 map(const Vec2& p) const { return {pad + (p.x() - box_.xmin) * scale_, pad + (box_.ymax - p.y()) * scale_}; }

  void path(const std::vector<Vec2>& pts, bool closed, const std::string& cls) {
    if (pts.empty()) return;
    std::string d;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vec2 q = map(pts[i]);
      d += fmt::format("{}{:.3f},{:.3f}", i == 0 ? "M" : " L", q.x(), q.y());
    }
    if (closed) d += " Z";
    body_ += fmt::format("  <path class=\"{}\" d=\"{}\"/>\n", cls, d);
  }

  void dot(const Vec2& p, const std::string& cls) {
    const Vec2 q = map(p);
    body_ += fmt::format("  <circle class=\"{}\" cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"3\"/>\n", cls, q.x(), q.y());
  }

  void label(const Vec2& p, const std::string& text) {
    const Vec2 q = map(p);
    body_ += fmt::format("  <text class=\"label\" x=\"{:.3f}\" y=\"{:.3f}\">{}</text>\n", q.x() + 4, q.y() - 4, text);
  }

  void note(const std::string& text) { notes_.push_back(text); }

  std::string finish(const std::string& title) const {
    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" viewBox=\"0 0 {0:.0f} {1:.0f}\">\n",
        width, height_);
    out += fmt::format("  <title>{}</title>\n", escape(title));
    out +=
        "  <style>.curve{fill:none;stroke:#1f4e9c;stroke-width:1.5}.disk{fill:none;stroke:#c0392b;"
        "stroke-dasharray:4 3}.mesh{fill:none;stroke:#999;stroke-width:0.5}.anchor{fill:#c0392b}"
        ".label{font:10px monospace;fill:#333}.note{font:12px monospace;fill:#000}</style>\n";
    out += body_;
    double y = height_ - footer + 16;
    for (const auto& n : notes_) {
      out += fmt::format("  <text class=\"note\" x=\"{:.0f}\" y=\"{:.0f}\">{}</text>\n", pad, y, n);
      y += 16;
    }
    return out + "</svg>\n";
  }

 private:
  Box box_;
  double scale_ = 1.0;
  double height_ = 0.0;
  std::string body_;
  std::vector<std::string> notes_;
};

inline constexpr std::size_t disk_samples = 256;

/// Chart pole used by chart_polygon.
inline PlanePoint chart_pole(const PolyCurve& curve) {
  const auto& plane = curve.plane();
  if (plane.sign() <= 0) return plane.origin();
  Vec3 mean = Vec3::Zero();
  for (const auto& v : curve.vertices()) mean += v.coords;
  return plane.project(mean);
}

/// Boundary of a geodesic disk in the curve's chart, or nothing when part of
/// it leaves the chart.
inline std::optional<std::vector<Vec2>> disk_outline(const ModelPlane& plane, const PlanePoint& center, double radius,
                                                    const PlanePoint& pole) {
  const bool along_x = plane.sign() > 0 && std::abs(center.coords.x()) > 0.9 * plane.scale();
  const TangentVec u = make_tangent(plane, center, along_x ? Vec3(Vec3::UnitY()) : Vec3(Vec3::UnitX()));
  const Vec3 w = rotate_left(plane, center, u.dir);
  std::vector<Vec2> out;
  try {
    for (std::size_t k = 0; k < disk_samples; ++k) {
      const double t = two_pi * static_cast<double>(k) / static_cast<double>(disk_samples);
      const TangentVec d = make_tangent(plane, center, std::cos(t) * u.dir + std::sin(t) * w);
      out.push_back(projective_chart(plane, exp_map(plane, d, radius), pole));
    }
  } catch (const error&) {
    return std::nullopt;
  }
  return out;
}

}  // namespace detail

/// Curve in its projective chart, the rolling disk of curvature lambda at the
/// anchor where lambda_hat is attained and at the worst inclusion anchor, and
/// a bound/slack annotation.
inline std::string plot_curve(const PolyCurve& curve, std::optional<double> lambda, const std::string& title) {
  const auto& plane = curve.plane();
  const PlanePoint pole = detail::chart_pole(curve);
  const auto pts = chart_polygon(curve);
  const auto sw = min_specific_curvature(curve);
  const BoundReport rep = theorem_bound_check(curve, lambda);
  detail::Box box;
  for (const auto& p : pts) box.add(p);

  std::vector<std::vector<Vec2>> disks;
  std::vector<Vec2> anchors;
  std::optional<InclusionCheck> inc;
  try {
    inc = curve_in_disk_check(curve, rep.lambda);
  } catch (const error&) {
  }
  std::vector<std::size_t> at = {sw.argmin_run.first};
  if (inc && inc->worst() && inc->worst()->anchor_index != at.front()) at.push_back(inc->worst()->anchor_index);
  if (inc) {
    for (std::size_t i : at) {
      const PlanePoint center = exp_map(plane, inward_normal(curve, i), inc->radius);
      if (auto outline = detail::disk_outline(plane, center, inc->radius, pole)) {
        for (const auto& p : *outline) box.add(p);
        disks.push_back(std::move(*outline));
        anchors.push_back(pts[i]);
      }
    }
  }
  detail::Canvas canvas(box);
  for (const auto& d : disks) canvas.path(d, true, "disk");
  canvas.path(pts, true, "curve");
  for (const auto& a : anchors) canvas.dot(a, "anchor");
  canvas.note(fmt::format("c = {}  n = {}  lambda = {:.9g} ({})", plane.curvature(), curve.size(), rep.lambda,
                          rep.lambda_source));
  canvas.note(fmt::format("length = {:.12g}  bound = {:.12g}  slack = {:.3e}", rep.length, rep.bound, rep.slack));
  canvas.note(fmt::format("lambda_hat = {:.9g}  equality = {}", rep.lambda_hat, rep.equality ? "yes" : "no"));
  return canvas.finish(title);
}

/// Support curve boundary with the disk of radius 1 / lambda tangent at the
/// normal angle of largest R.
inline std::string plot_curve(const SupportCurve& curve, std::optional<double> lambda, const std::string& title) {
  const SupportFunction h(curve);
  const auto pts = boundary_grid(curve, h);
  const BoundReport rep = theorem_bound_check(curve, lambda);
  detail::Box box;
  for (const auto& p : pts) box.add(p);
  const auto r = curve.radius();
  const std::size_t k = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
  const double radius = 1.0 / rep.lambda;
  const double phi = curve.angle(k);
  const Vec2 center = pts[k] - radius * Vec2(std::cos(phi), std::sin(phi));
  std::vector<Vec2> disk;
  for (std::size_t j = 0; j < detail::disk_samples; ++j) {
    const double t = two_pi * static_cast<double>(j) / static_cast<double>(detail::disk_samples);
    disk.push_back(center + radius * Vec2(std::cos(t), std::sin(t)));
    box.add(disk.back());
  }
  detail::Canvas canvas(box);
  canvas.path(disk, true, "disk");
  canvas.path(pts, true, "curve");
  canvas.dot(pts[k], "anchor");
  canvas.note(fmt::format("c = 0  n = {}  lambda = {:.9g} ({})", curve.size(), rep.lambda, rep.lambda_source));
  canvas.note(fmt::format("length = {:.12g}  bound = {:.12g}  slack = {:.3e}", rep.length, rep.bound, rep.slack));
  canvas.note(fmt::format("max R = {:.9g}  equality = {}", curve.max_radius(), rep.equality ? "yes" : "no"));
  return canvas.finish(title);
}

/// Base polygon with projected cap faces and the seam curvature omega at each
/// base vertex.
inline std::string plot_cap(const ConvexCap& cap, const std::string& title) {
  const auto rep = doubling_curvature(cap);
  const auto verts = cap.vertices();
  detail::Box box;
  for (const auto& b : cap.base()) box.add(b);
  detail::Canvas canvas(box);
  for (const auto& f : cap.faces())
    canvas.path({verts[f[0]].head<2>(), verts[f[1]].head<2>(), verts[f[2]].head<2>()}, true, "mesh");
  canvas.path(std::vector<Vec2>(cap.base().begin(), cap.base().end()), true, "curve");
  const bool sparse = cap.base_size() <= 64;
  for (std::size_t i = 0; i < cap.base_size(); ++i) {
    canvas.dot(cap.base()[i], "anchor");
    if (sparse) canvas.label(cap.base()[i], fmt::format("{:.4f}", rep.omega[i]));
  }
  canvas.note(fmt::format("base n = {}  faces = {}  total omega = {:.9f}", cap.base_size(), cap.faces().size(),
                          rep.total_omega));
  canvas.note(fmt::format("total tau_cap = {:.9f}  total tau_plane = {:.9f}", rep.total_tau_cap, rep.total_tau_plane));
  canvas.note(fmt::format("total curvature = {:.12f}  identity error = {:.1e}", rep.total_curvature,
                          rep.identity_error));
  return canvas.finish(title);
}

}  // namespace curvebound::svg
