#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "curvebound/generator.hpp"
#include "curvebound/support_curve.hpp"

using namespace curvebound;
using std::numbers::pi;

namespace {

template <class Fn>
SupportCurve sampled(Fn r, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = r(2 * pi * static_cast<double>(k) / static_cast<double>(n));
  return SupportCurve(std::move(v));
}

double smooth_r(double s) { return 1.0 + 0.3 * std::cos(2 * s) + 0.1 * std::sin(3 * s) - 0.05 * std::cos(5 * s); }

// h(phi) = int_0^phi R(sigma) sin(phi - sigma) d sigma by composite Simpson.
double convolution_support(double phi) {
  const int m = 4000;
  const double step = phi / m;
  double acc = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double s = i * step;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * smooth_r(s) * std::sin(phi - s);
  }
  return acc * step / 3.0;
}

}  // namespace

TEST(SupportCurve, RejectsInvalidSamples) {
  EXPECT_THROW(SupportCurve(std::vector<double>(100, 1.0)), error);
  EXPECT_THROW(SupportCurve(std::vector<double>(32, 1.0)), error);
  auto neg = std::vector<double>(64, 1.0);
  neg[3] = -0.1;
  EXPECT_THROW(SupportCurve(std::move(neg)), error);
  try {
    sampled([](double s) { return 1.0 + 0.5 * std::cos(s); }, 64);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::not_closed);
  }
}

TEST(SupportFromRadius, ConstantDensityGivesCircle) {
  for (double lambda : {1.0, 0.25, 3.0}) {
    const auto curve = sampled([&](double) { return 1.0 / lambda; }, 128);
    const SupportFunction h(curve);
    for (double v : h.values()) EXPECT_NEAR(v, 1.0 / lambda, 1e-14);
    EXPECT_NEAR(curve_length(curve), 2 * pi / lambda, 1e-12);
    EXPECT_TRUE(curve.is_lambda_convex(lambda));
    EXPECT_FALSE(curve.is_lambda_convex(lambda * 1.01));
  }
}

TEST(SupportFromRadius, SecondHarmonicSolvesByFourierDivision) {
  const auto curve = sampled([](double s) { return 1.0 + 0.3 * std::cos(2 * s); }, 256);
  const SupportFunction h(curve);
  for (std::size_t k = 0; k < curve.size(); ++k)
    EXPECT_NEAR(h.values()[k], 1.0 - 0.1 * std::cos(2 * curve.angle(k)), 1e-14);
  const Vec2 p = boundary_point(curve, 0.0);
  EXPECT_NEAR(p.x(), 0.9, 1e-14);
  EXPECT_NEAR(p.y(), 0.0, 1e-14);
  EXPECT_NEAR(curve_length(curve), 2 * pi, 1e-13);
}

TEST(SupportFromRadius, AgreesWithConvolutionModuloFirstHarmonic) {
  const std::size_t n = 128;
  const auto curve = sampled(smooth_r, n);
  const SupportFunction h(curve);
  // Least-squares fit of the difference onto {cos, sin}; residual must vanish.
  std::vector<double> diff(n);
  double a = 0.0, b = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double phi = curve.angle(k);
    diff[k] = convolution_support(phi) - h.values()[k];
    a += diff[k] * std::cos(phi) * 2.0 / n;
    b += diff[k] * std::sin(phi) * 2.0 / n;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double phi = curve.angle(k);
    EXPECT_NEAR(diff[k], a * std::cos(phi) + b * std::sin(phi), 1e-11);
  }
}

TEST(SupportFromRadius, SpectralAndSecondDifferenceResiduals) {
  double prev = 0.0;
  for (std::size_t n : {64u, 128u, 256u, 512u}) {
    const auto curve = sampled(smooth_r, n);
    const SupportFunction h(curve);
    EXPECT_LE(support_residual(curve, h), 1e-12 * curve.max_radius());
    const double d = 2 * pi / n;
    const auto v = h.values();
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double h2 = (v[(k + 1) % n] - 2 * v[k] + v[(k + n - 1) % n]) / (d * d);
      worst = std::max(worst, std::abs(h2 + v[k] - curve.radius()[k]));
    }
    if (prev > 0.0) {
      EXPECT_NEAR(std::log2(prev / worst), 2.0, 0.05);
    }
    prev = worst;
  }
}

TEST(BoundaryPoint, UnitCircleAndNormals) {
  const auto circle = sampled([](double) { return 1.0; }, 64);
  EXPECT_NEAR((boundary_point(circle, 0.0) - Vec2(1, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((boundary_point(circle, pi / 2) - Vec2(0, 1)).norm(), 0.0, 1e-15);
  // Outward normal at phi is (cos phi, sin phi): the support line touches there.
  const auto curve = sampled(smooth_r, 256);
  const SupportFunction h(curve);
  for (double phi : {0.1, 1.3, 2.9, 5.0}) {
    const Vec2 p = boundary_point(h, phi);
    const Vec2 nrm(std::cos(phi), std::sin(phi));
    for (const Vec2& q : boundary_grid(curve, h)) EXPECT_LE(q.dot(nrm), p.dot(nrm) + 1e-12);
  }
}

TEST(ToPolyline, InscribedSquareAndConvergence) {
  const auto circle = sampled([](double) { return 1.0; }, 64);
  const auto sq = to_polyline(circle, 4);
  const Vec2 expect[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR((sq.vertex(k).xy() - expect[k]).norm(), 0.0, 1e-15);

  const auto big = sampled([](double) { return 0.5; }, 64);
  EXPECT_NEAR(perimeter(to_polyline(big, 4096)), 2 * pi * 0.5, 1e-6);

  const auto curve = sampled(smooth_r, 1024);
  double prev = 0.0;
  for (std::size_t m : {64u, 128u, 256u, 512u}) {
    const auto poly = to_polyline(curve, m);
    EXPECT_TRUE(is_convex(poly));
    EXPECT_TRUE(is_simple(poly));
    const double err = std::abs(perimeter(poly) - curve_length(curve));
    if (prev > 0.0) {
      EXPECT_NEAR(std::log2(prev / err), 2.0, 0.1);
    }
    prev = err;
  }
}

TEST(Reconstruct, UnitAndScaledCircles) {
  for (double lambda : {1.0, 2.5}) {
    const auto prof = SwerveProfile::uniform([&](double s) { return lambda * s; }, 2 * pi / lambda, 4096);
    const auto rec = reconstruct_from_swerve(prof);
    EXPECT_LE(rec.endpoint_gap, 1e-8);
    EXPECT_NEAR(rec.length, 2 * pi / lambda, 1e-9 * 2 * pi / lambda);
    // Left-rule nodes form a regular polygon with step ds and turn ds, whose
    // circumcircle has radius (ds/2)/sin(ds/2) and centre (ds/2, (ds/2)cot(ds/2)).
    const double ds = (2 * pi / lambda) / 4095, half = lambda * ds / 2;
    const double rho = (ds / 2) / std::sin(half);
    const Vec2 centre(ds / 2, (ds / 2) / std::tan(half));
    EXPECT_NEAR(rho, 1 / lambda, 1e-6 / lambda);
    for (const Vec2& p : rec.nodes) EXPECT_NEAR((p - centre).norm(), rho, 1e-10 / lambda);
  }
}

TEST(Reconstruct, StaircaseGivesUnitSquare) {
  const double q = pi / 2;
  const SwerveProfile prof({0, 1, 2, 3, 4}, {0, q, 2 * q, 3 * q, 4 * q});
  const auto rec = reconstruct_from_swerve(prof);
  const Vec2 expect[] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR((rec.nodes[k] - expect[k]).norm(), 0.0, 1e-15);
  EXPECT_EQ(rec.curve().size(), 4u);
}

TEST(Reconstruct, RejectsDecreasingSwerve) {
  try {
    SwerveProfile({0, 1, 2}, {0, 0.5, 0.4});
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::non_monotone);
  }
}

TEST(Reconstruct, ProfileRoundTripUpToRigidMotion) {
  const auto curve = sampled(smooth_r, 256);
  const auto poly = to_polyline(curve, 300);
  const auto rec = reconstruct_from_swerve(swerve_profile(poly)).curve();
  ASSERT_EQ(rec.size(), poly.size());
  const Vec2 origin = poly.vertex(0).xy();
  const Vec2 e = (poly.vertex(1).xy() - origin).normalized();
  const double diam = diameter(poly);
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Vec2 d = poly.vertex(k).xy() - origin;
    const Vec2 aligned(d.dot(e), e.x() * d.y() - e.y() * d.x());
    EXPECT_LE((aligned - rec.vertex(k).xy()).norm(), 1e-8 * diam);
  }
}

TEST(GenSupportCurve, AmplitudeZeroIsExactCircle) {
  GenConfig cfg;
  cfg.amplitude = 0.0;
  cfg.lambda = 2.0;
  cfg.size = 64;
  const auto curve = gen_support_curve(cfg);
  for (double r : curve.radius()) EXPECT_EQ(r, 0.5);
}

TEST(GenSupportCurve, SeedFortyTwoFixture) {
  GenConfig cfg;
  cfg.seed = 42;
  cfg.lambda = 1.0;
  cfg.amplitude = 0.3;
  cfg.size = 512;
  const auto curve = gen_support_curve(cfg);
  EXPECT_LE(curve.max_radius(), 1.0);
  EXPECT_LT(curve_length(curve), 2 * pi);
  EXPECT_NEAR(curve_length(curve), 5.4768600887499508, 1e-12);
  const auto again = gen_support_curve(cfg);
  EXPECT_TRUE(std::equal(curve.radius().begin(), curve.radius().end(), again.radius().begin()));
  cfg.seed = 43;
  EXPECT_NE(curve_length(gen_support_curve(cfg)), curve_length(curve));
}

TEST(GenSupportCurve, RejectsNonEuclideanPlane) {
  GenConfig cfg;
  cfg.c = 1.0;
  EXPECT_THROW(gen_support_curve(cfg), error);
}
