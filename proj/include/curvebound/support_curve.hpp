#pragma once

// Closed convex Euclidean curves stored by their radius-of-curvature density
// R(phi) on a uniform grid of normal angles. The support function solves
// h + h'' = R; the boundary point with outward normal phi is
// h(phi) n(phi) + h'(phi) n'(phi).

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "curvebound/poly_curve.hpp"

namespace curvebound {

class SupportCurve {
 public:
  /// Closure tolerance: |residual| <= closure_tol * mean(R) * 2 pi.
  static constexpr double closure_tol = 1e-10;

  explicit SupportCurve(std::vector<double> radius) : radius_(std::move(radius)) {
    const std::size_t n = radius_.size();
    if (n < 64 || (n & (n - 1)) != 0)
      throw error(errc::invalid_input, "grid size must be a power of two >= 64");
    double sum = 0.0;
    for (double r : radius_) {
      if (!std::isfinite(r) || r < 0.0) throw error(errc::invalid_input, "radius samples must be finite and >= 0");
      sum += r;
      max_ = std::max(max_, r);
    }
    mean_ = sum / static_cast<double>(n);
    if (!(mean_ > 0.0)) throw error(errc::invalid_input, "radius density is identically zero");
    const double dphi = two_pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double phi = angle(k);
      closure_ += radius_[k] * dphi * Vec2(std::cos(phi), std::sin(phi));
    }
    if (closure_.norm() > closure_tol * mean_ * two_pi)
      throw error(errc::not_closed, "first harmonic of R does not vanish (curve does not close)");
  }

  std::size_t size() const { return radius_.size(); }
  std::span<const double> radius() const { return radius_; }
  double angle(std::size_t k) const { return two_pi * static_cast<double>(k) / static_cast<double>(radius_.size()); }
  Vec2 closure_residual() const { return closure_; }
  double max_radius() const { return max_; }
  double mean_radius() const { return mean_; }

  /// Pointwise form of lambda-convexity: R <= 1 / lambda.
  bool is_lambda_convex(double lambda) const { return max_ * lambda <= 1.0; }

 private:
  std::vector<double> radius_;
  Vec2 closure_ = Vec2::Zero();
  double max_ = 0.0;
  double mean_ = 0.0;
};

namespace detail {

using cvec = std::vector<std::complex<double>>;

inline cvec forward_spectrum(std::span<const double> samples) {
  Eigen::FFT<double> fft;
  cvec in(samples.begin(), samples.end()), out;
  fft.fwd(out, in);
  const double inv_n = 1.0 / static_cast<double>(samples.size());
  for (auto& c : out) c *= inv_n;
  return out;
}

inline std::vector<double> inverse_real(const cvec& coeffs) {
  Eigen::FFT<double> fft;
  cvec scaled(coeffs), out;
  for (auto& c : scaled) c *= static_cast<double>(coeffs.size());
  fft.inv(out, scaled);
  std::vector<double> re(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) re[k] = out[k].real();
  return re;
}

/// Signed frequency of FFT bin k.
inline double frequency(std::size_t k, std::size_t n) {
  return k <= n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
}

}  // namespace detail

/// Support function on the grid together with its trigonometric interpolant.
/// The origin is the Steiner point (first harmonic of h set to zero).
class SupportFunction {
 public:
  explicit SupportFunction(const SupportCurve& curve) : n_(curve.size()) {
    const auto rhat = detail::forward_spectrum(curve.radius());
    coeffs_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      const double f = detail::frequency(k, n_);
      coeffs_[k] = std::abs(f) == 1.0 ? 0.0 : rhat[k] / (1.0 - f * f);
    }
    values_ = detail::inverse_real(coeffs_);
  }

  std::size_t size() const { return n_; }
  std::span<const double> values() const { return values_; }

  /// Spectral multiplier applied to h: m(f) * h_f for every mode.
  template <class Multiplier>
  std::vector<double> apply(Multiplier m) const {
    detail::cvec c(coeffs_);
    for (std::size_t k = 0; k < n_; ++k) c[k] *= m(detail::frequency(k, n_));
    return detail::inverse_real(c);
  }

  std::vector<double> first_derivative() const {
    // The Nyquist mode has no odd-derivative partner in a real signal.
    const double nyq = static_cast<double>(n_ / 2);
    return apply([nyq](double f) { return std::abs(f) == nyq ? std::complex<double>(0.0) : std::complex<double>(0.0, f); });
  }

  std::vector<double> second_derivative() const {
    return apply([](double f) { return std::complex<double>(-f * f); });
  }

  /// h and h' at an arbitrary angle, from the trigonometric interpolant.
  std::pair<double, double> evaluate(double phi) const {
    double h = coeffs_[0].real(), dh = 0.0;
    const std::complex<double> step(std::cos(phi), std::sin(phi));
    std::complex<double> rot = step;
    for (std::size_t k = 1; k < n_ / 2; ++k) {
      const std::complex<double> t = coeffs_[k] * rot;
      h += 2.0 * t.real();
      dh -= 2.0 * static_cast<double>(k) * t.imag();
      rot *= step;
    }
    const double nyq = static_cast<double>(n_ / 2);
    h += coeffs_[n_ / 2].real() * std::cos(nyq * phi);
    return {h, dh};
  }

 private:
  std::size_t n_;
  detail::cvec coeffs_;
  std::vector<double> values_;
};

/// Spectral solve of h + h'' = R.
inline SupportFunction support_from_radius(const SupportCurve& curve) { return SupportFunction(curve); }

/// max |h + h'' - R| on the grid, with h'' from the spectral derivative.
inline double support_residual(const SupportCurve& curve, const SupportFunction& h) {
  const auto h2 = h.second_derivative();
  const auto hv = h.values();
  const auto r = curve.radius();
  double worst = 0.0;
  for (std::size_t k = 0; k < curve.size(); ++k) worst = std::max(worst, std::abs(hv[k] + h2[k] - r[k]));
  return worst;
}

inline Vec2 boundary_point(const SupportFunction& h, double phi) {
  const auto [v, dv] = h.evaluate(phi);
  const double c = std::cos(phi), s = std::sin(phi);
  return {v * c - dv * s, v * s + dv * c};
}

inline Vec2 boundary_point(const SupportCurve& curve, double phi) {
  return boundary_point(support_from_radius(curve), phi);
}

/// Boundary points at the grid angles (spectral h and h').
inline std::vector<Vec2> boundary_grid(const SupportCurve& curve, const SupportFunction& h) {
  const auto hv = h.values();
  const auto dh = h.first_derivative();
  std::vector<Vec2> out(curve.size());
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const double phi = curve.angle(k), c = std::cos(phi), s = std::sin(phi);
    out[k] = {hv[k] * c - dh[k] * s, hv[k] * s + dh[k] * c};
  }
  return out;
}

/// Trapezoid quadrature of the arclength density: integral of R dphi.
inline double curve_length(const SupportCurve& curve) { return two_pi * curve.mean_radius(); }

/// Width-based diameter: max over the grid of h(phi) + h(phi + pi).
inline double diameter(const SupportCurve& curve, const SupportFunction& h) {
  const auto hv = h.values();
  const std::size_t n = curve.size();
  double best = 0.0;
  for (std::size_t k = 0; k < n / 2; ++k) best = std::max(best, hv[k] + hv[k + n / 2]);
  return best;
}

/// Polygon through m boundary points at uniformly spaced normal angles.
inline PolyCurve to_polyline(const SupportCurve& curve, std::size_t m) {
  if (m < 3) throw error(errc::invalid_input, "need at least 3 samples");
  const SupportFunction h(curve);
  std::vector<Vec2> pts(m);
  for (std::size_t j = 0; j < m; ++j)
    pts[j] = boundary_point(h, two_pi * static_cast<double>(j) / static_cast<double>(m));
  return PolyCurve::euclidean(pts);
}

// ---------------------------------------------------------------------------
// Swerve profiles and reconstruction from the tangent angle.

/// Cumulative swerve tau sampled at arclengths s. The tangent angle is taken
/// as tau[j] on [s[j], s[j+1]), so jumps of tau encode corners exactly.
class SwerveProfile {
 public:
  SwerveProfile(std::vector<double> s, std::vector<double> tau) : s_(std::move(s)), tau_(std::move(tau)) {
    if (s_.size() != tau_.size() || s_.size() < 2)
      throw error(errc::invalid_input, "profile needs matching s and tau arrays of size >= 2");
    if (s_.front() != 0.0 || tau_.front() != 0.0)
      throw error(errc::invalid_input, "profile must start at s = 0 with tau = 0");
    for (std::size_t j = 1; j < s_.size(); ++j) {
      if (!(s_[j] >= s_[j - 1])) throw error(errc::invalid_input, "arclength samples must be nondecreasing");
      if (!(tau_[j] >= tau_[j - 1])) throw error(errc::non_monotone, "swerve decreases at sample " + std::to_string(j));
    }
    if (!(s_.back() > 0.0)) throw error(errc::invalid_input, "total length must be positive");
  }

  /// m uniform samples of tau over [0, s_total].
  template <class Fn>
  static SwerveProfile uniform(Fn tau, double s_total, std::size_t m) {
    if (m < 2) throw error(errc::invalid_input, "need at least 2 samples");
    std::vector<double> s(m), t(m);
    for (std::size_t j = 0; j < m; ++j) {
      s[j] = s_total * static_cast<double>(j) / static_cast<double>(m - 1);
      t[j] = tau(s[j]);
    }
    return SwerveProfile(std::move(s), std::move(t));
  }

  std::span<const double> arclength() const { return s_; }
  std::span<const double> swerve() const { return tau_; }
  std::size_t size() const { return s_.size(); }
  double total_length() const { return s_.back(); }

 private:
  std::vector<double> s_;
  std::vector<double> tau_;
};

/// Profile of a positively oriented convex Euclidean polygon starting at
/// vertex 0 along edge 0; the final sample carries the turning at vertex 0.
inline SwerveProfile swerve_profile(const PolyCurve& curve) {
  if (!curve.plane().euclidean()) throw error(errc::domain, "swerve profiles are Euclidean");
  auto turning = turning_angles(curve);
  double sum = 0.0;
  for (double t : turning) sum += t;
  if (sum < 0.0)
    for (double& t : turning) t = -t;
  const auto edges = edge_lengths(curve);
  const std::size_t n = curve.size();
  std::vector<double> s(n + 1), tau(n + 1);
  for (std::size_t j = 1; j <= n; ++j) {
    s[j] = s[j - 1] + edges[j - 1];
    tau[j] = tau[j - 1] + turning[j % n];
  }
  return SwerveProfile(std::move(s), std::move(tau));
}

struct Reconstruction {
  std::vector<Vec2> nodes;  ///< all integration nodes, first at the origin
  double endpoint_gap = 0.0;
  double length = 0.0;

  /// Closed polygon through the nodes (final node dropped, zero steps skipped).
  PolyCurve curve() const {
    std::vector<Vec2> pts;
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j)
      if (pts.empty() || (nodes[j] - pts.back()).norm() > 0.0) pts.push_back(nodes[j]);
    return PolyCurve::euclidean(pts);
  }
};

/// Integrates r'(s) = cos tau(s) e1 + sin tau(s) e2 from the origin.
inline Reconstruction reconstruct_from_swerve(const SwerveProfile& profile) {
  const auto s = profile.arclength();
  const auto tau = profile.swerve();
  Reconstruction out;
  out.nodes.reserve(s.size());
  out.nodes.push_back(Vec2::Zero());
  for (std::size_t j = 0; j + 1 < s.size(); ++j) {
    const double ds = s[j + 1] - s[j];
    out.nodes.push_back(out.nodes.back() + ds * Vec2(std::cos(tau[j]), std::sin(tau[j])));
    out.length += (out.nodes.back() - out.nodes[out.nodes.size() - 2]).norm();
  }
  out.endpoint_gap = (out.nodes.back() - out.nodes.front()).norm();
  return out;
}

}  // namespace curvebound
