#pragma once

// Seedable random instances: lambda-convex support curves, lambda-convex
// polygons on any model plane, and convex caps. Identical configurations
// produce bit-identical output.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "curvebound/cap.hpp"
#include "curvebound/poly_curve.hpp"
#include "curvebound/support_curve.hpp"

namespace curvebound {

enum class GenKind { support, polyline, cap };

inline std::string to_string(GenKind k) {
  switch (k) {
    case GenKind::support: return "support";
    case GenKind::polyline: return "polyline";
    case GenKind::cap: return "cap";
  }
  return "unknown";
}

inline GenKind gen_kind_from_string(const std::string& s) {
  if (s == "support") return GenKind::support;
  if (s == "polyline") return GenKind::polyline;
  if (s == "cap") return GenKind::cap;
  throw error(errc::invalid_input, "unknown generator kind '" + s + "'");
}

struct GenConfig {
  std::uint64_t seed = 0;
  GenKind kind = GenKind::support;
  double c = 0.0;
  double lambda = 1.0;
  std::size_t size = 512;
  double amplitude = 0.3;

  bool operator==(const GenConfig&) const = default;

  void validate() const {
    if (size < 8) throw error(errc::invalid_input, "generator size must be >= 8");
    if (!(amplitude >= 0.0 && amplitude < 1.0)) throw error(errc::invalid_input, "amplitude must lie in [0, 1)");
    if (kind != GenKind::cap) {
      if (!(c + lambda * lambda > 0.0)) throw error(errc::hypothesis, "c + lambda^2 > 0 fails");
      if (!(lambda > 0.0)) throw error(errc::invalid_input, "lambda must be positive");
    }
  }
};

namespace detail {

/// Smooth random trigonometric polynomial with modes 0 and 2..K (no first
/// harmonic), evaluated with its first two derivatives.
class RandomField {
 public:
  RandomField(std::mt19937_64& rng, int max_mode) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int k = 2; k <= max_mode; ++k) {
      const double w = 1.0 / (static_cast<double>(k) * static_cast<double>(k));
      cos_.push_back(w * normal(rng));
      sin_.push_back(w * normal(rng));
    }
  }

  std::array<double, 3> eval(double phi) const {
    std::array<double, 3> out{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < cos_.size(); ++i) {
      const double k = static_cast<double>(i + 2);
      const double c = std::cos(k * phi), s = std::sin(k * phi);
      out[0] += cos_[i] * c + sin_[i] * s;
      out[1] += k * (-cos_[i] * s + sin_[i] * c);
      out[2] += -k * k * (cos_[i] * c + sin_[i] * s);
    }
    return out;
  }

  /// Global extremum (sign = +1 max, -1 min): dense scan plus Newton polish.
  double extremum(int sign, std::size_t samples) const {
    double best_phi = 0.0, best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < samples; ++j) {
      const double phi = two_pi * static_cast<double>(j) / static_cast<double>(samples);
      const double v = sign * eval(phi)[0];
      if (v > best) {
        best = v;
        best_phi = phi;
      }
    }
    double phi = best_phi;
    for (int it = 0; it < 30; ++it) {
      const auto d = eval(phi);
      if (d[2] == 0.0) break;
      const double step = d[1] / d[2];
      phi -= step;
      if (std::abs(step) < 1e-15) break;
    }
    return std::max(best, sign * eval(phi)[0]) * sign;
  }

 private:
  std::vector<double> cos_, sin_;
};

/// Indices of the convex hull (counterclockwise, no collinear points).
inline std::vector<std::size_t> hull_indices(const std::vector<Vec2>& pts) {
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return pts[a].x() < pts[b].x() || (pts[a].x() == pts[b].x() && pts[a].y() < pts[b].y());
  });
  std::vector<std::size_t> hull(2 * idx.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    while (k >= 2 && predicates::orient2d(pts[hull[k - 2]], pts[hull[k - 1]], pts[idx[i]]) <= 0) --k;
    hull[k++] = idx[i];
  }
  for (std::size_t i = idx.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && predicates::orient2d(pts[hull[k - 2]], pts[hull[k - 1]], pts[idx[i]]) <= 0) --k;
    hull[k++] = idx[i];
  }
  hull.resize(k > 0 ? k - 1 : 0);
  return hull;
}

}  // namespace detail

/// Rounds of the clamp / harmonic-removal projection before giving up.
inline constexpr int max_projection_rounds = 100;

/// Support density R = (1/lambda)(1 - amplitude u) with u a smooth random
/// periodic field rescaled to [0, 1] on its continuous range, followed by the
/// alternating projection onto {first harmonic = 0} and the box [0, 1/lambda].
inline SupportCurve gen_support_curve(const GenConfig& cfg) {
  cfg.validate();
  if (cfg.c != 0.0) throw error(errc::domain, "support curves are Euclidean (c = 0)");
  const std::size_t n = cfg.size;
  if (n < 64 || (n & (n - 1)) != 0) throw error(errc::invalid_input, "support grid size must be a power of two >= 64");
  std::mt19937_64 rng(cfg.seed);
  const int modes = static_cast<int>(std::min<std::size_t>(8, n / 8));
  const detail::RandomField field(rng, modes);
  const double lo = field.extremum(-1, 16 * n), hi = field.extremum(+1, 16 * n);
  const double span = hi - lo;
  const double rmax = 1.0 / cfg.lambda;

  std::vector<double> r(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = span > 0.0 ? (field.eval(two_pi * static_cast<double>(k) / static_cast<double>(n))[0] - lo) / span : 0.0;
    r[k] = rmax * (1.0 - cfg.amplitude * std::clamp(u, 0.0, 1.0));
  }

  const auto closure_residual = [&] {
    Vec2 closure = Vec2::Zero();
    double mean = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double phi = two_pi * static_cast<double>(k) / static_cast<double>(n);
      closure += r[k] * Vec2(std::cos(phi), std::sin(phi));
      mean += r[k];
    }
    return std::pair(closure.norm() * two_pi / static_cast<double>(n), mean / static_cast<double>(n));
  };

  double residual = 0.0;
  for (int round = 0; round <= max_projection_rounds; ++round) {
    const auto [res, mean] = closure_residual();
    residual = res;
    if (residual <= 1e-12 * two_pi * mean) return SupportCurve(std::move(r));
    if (round == max_projection_rounds) break;
    double a1 = 0.0, b1 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double phi = two_pi * static_cast<double>(k) / static_cast<double>(n);
      a1 += r[k] * std::cos(phi);
      b1 += r[k] * std::sin(phi);
    }
    a1 *= 2.0 / static_cast<double>(n);
    b1 *= 2.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double phi = two_pi * static_cast<double>(k) / static_cast<double>(n);
      r[k] = std::clamp(r[k] - a1 * std::cos(phi) - b1 * std::sin(phi), 0.0, rmax);
    }
  }
  throw error(errc::convergence, "support projection did not close the curve; residual " + std::to_string(residual));
}

struct GeneratedPolyline {
  PolyCurve curve;
  std::size_t proposals = 0;
  double acceptance_rate = 0.0;
};

inline constexpr std::size_t max_polyline_proposals = 100000;

/// Rejection sampling of lambda-convex polygons. A proposal picks a circle of
/// radius in [0.8 (1 - amplitude / 2) R0, 0.8 R0] about the origin (R0 the
/// radius of the circle of curvature lambda), places points on it at jittered
/// angles with a small radial perturbation scaled by the squared angular
/// step, takes the hull in the projective chart, and is accepted once
/// lambda_hat >= lambda.
inline GeneratedPolyline gen_polyline(const GenConfig& cfg) {
  cfg.validate();
  const ModelPlane plane(cfg.c);
  const double rho = 0.8 * circle_radius_from_curvature(cfg.c, cfg.lambda);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t k = cfg.size;
  const double step = two_pi / static_cast<double>(k);
  for (std::size_t proposal = 1; proposal <= max_polyline_proposals; ++proposal) {
    const double phase = two_pi * unif(rng);
    const double base = rho * (1.0 - 0.5 * cfg.amplitude * unif(rng));
    std::vector<PlanePoint> pts;
    std::vector<Vec2> chart;
    for (std::size_t j = 0; j < k; ++j) {
      const double theta = phase + step * (static_cast<double>(j) + 0.5 * cfg.amplitude * (unif(rng) - 0.5));
      const double radius = base * (1.0 - 0.1 * cfg.amplitude * step * step * unif(rng));
      pts.push_back(plane.polar_point(radius, theta));
      chart.push_back(projective_chart(plane, pts.back(), plane.origin()));
    }
    const auto hull = detail::hull_indices(chart);
    if (hull.size() < 3) continue;
    std::vector<PlanePoint> verts;
    for (std::size_t i : hull) verts.push_back(pts[i]);
    PolyCurve curve(plane, std::move(verts));
    if (min_specific_curvature(curve).lambda_hat >= cfg.lambda)
      return {std::move(curve), proposal, 1.0 / static_cast<double>(proposal)};
  }
  throw error(errc::convergence, "polyline acceptance below 0.1% over 1e5 proposals");
}

inline constexpr int max_cap_retries = 20;

/// Random convex cap: jittered convex base polygon near the unit circle, ring
/// samples inside it raised on a concave paraboloid with multiplicative noise,
/// then the upper hull.
inline ConvexCap gen_cap(const GenConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t nb = cfg.size;
  const double a = cfg.amplitude;
  for (int attempt = 0; attempt < max_cap_retries; ++attempt) {
    std::vector<Vec2> raw;
    for (std::size_t j = 0; j < nb; ++j) {
      const double theta = two_pi * (static_cast<double>(j) + 0.45 * a * (2.0 * unif(rng) - 1.0)) / static_cast<double>(nb);
      const double radius = 1.0 - 0.15 * a * unif(rng);
      raw.emplace_back(radius * std::cos(theta), radius * std::sin(theta));
    }
    std::vector<Vec2> base;
    for (std::size_t i : detail::hull_indices(raw)) base.push_back(raw[i]);

    std::vector<Vec3> interior;
    auto height = [&](double r) { return (1.0 - r * r) * (1.0 + 0.1 * a * (2.0 * unif(rng) - 1.0)); };
    interior.emplace_back(0.0, 0.0, height(0.0));
    const std::size_t rings = std::max<std::size_t>(1, nb / 16);
    for (std::size_t ring = 1; ring <= rings; ++ring) {
      const double r = 0.7 * static_cast<double>(ring) / static_cast<double>(rings);
      const std::size_t count = 6 * ring;
      for (std::size_t i = 0; i < count; ++i) {
        const double theta = two_pi * (static_cast<double>(i) + 0.4 * a * (2.0 * unif(rng) - 1.0)) / static_cast<double>(count);
        interior.emplace_back(r * std::cos(theta), r * std::sin(theta), height(r));
      }
    }
    try {
      return ConvexCap(std::move(base), std::move(interior));
    } catch (const error& e) {
      if (e.code() != errc::degenerate) throw;
    }
  }
  throw error(errc::convergence, "cap generation lost base vertices in every retry");
}

}  // namespace curvebound
