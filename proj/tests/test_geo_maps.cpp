#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "curvebound/geo_maps.hpp"
#include "test_support.hpp"

using namespace curvebound;
using std::numbers::pi;
using testing_support::regular_polygon;

namespace {

double collinearity(const Vec2& a, const Vec2& b, const Vec2& c) {
  const Vec2 u = b - a, w = c - a;
  return std::abs(u.x() * w.y() - u.y() * w.x()) / (u.norm() * w.norm());
}

// Regular m-gon on the circle of radius r0 about the south pole of the unit sphere.
PolyCurve south_circle(std::size_t m, double r0) {
  const ModelPlane s(1.0);
  std::vector<PlanePoint> pts;
  for (std::size_t k = 0; k < m; ++k) {
    const double t = 2 * pi * static_cast<double>(k) / static_cast<double>(m);
    pts.emplace_back(Vec3(std::sin(r0) * std::cos(t), std::sin(r0) * std::sin(t), -std::cos(r0)));
  }
  return PolyCurve(s, std::move(pts));
}

}  // namespace

TEST(KleinMap, ReferencePoints) {
  const ModelPlane h(-1.0);
  EXPECT_EQ(klein_map(h, h.origin()), Vec2(0, 0));
  for (double d : {0.1, 1.0, 3.0}) {
    const Vec2 k = klein_map(h, PlanePoint(Vec3(std::sinh(d), 0, std::cosh(d))));
    EXPECT_NEAR(k.x(), std::tanh(d), 1e-15);
    EXPECT_EQ(k.y(), 0.0);
    EXPECT_LT(distance(h, klein_inverse(h, k), PlanePoint(Vec3(std::sinh(d), 0, std::cosh(d)))), 1e-12);
  }
}

TEST(KleinMap, CirclesMapToCirclesOfRadiusTanh) {
  for (double r0 : {0.5, 1.0, 2.0}) {
    const auto img = klein_image(regular_polygon(ModelPlane(-1.0), 4096, r0));
    for (const auto& v : img.vertices()) EXPECT_NEAR(v.xy().norm(), std::tanh(r0), 1e-9);
    for (double k : menger_curvature(img)) EXPECT_NEAR(k, 1 / std::tanh(r0), 1e-6);
  }
}

TEST(KleinMap, PreservesCollinearity) {
  const ModelPlane h(-1.0);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto p = h.polar_point(3 * u(rng), 2 * pi * u(rng));
    const auto q = h.polar_point(3 * u(rng), 2 * pi * u(rng));
    const double d = distance(h, p, q);
    if (d < 1e-3) continue;
    const auto r = exp_map(h, direction_to(h, p, q), d * (0.1 + 1.8 * u(rng)));
    worst = std::max(worst, collinearity(klein_map(h, p), klein_map(h, q), klein_map(h, r)));
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(KleinSupportTransform, Values) {
  EXPECT_EQ(klein_support_transform(0.0), 0.0);
  EXPECT_NEAR(klein_support_transform(2.0), 0.96402758007581690, 1e-15);
  EXPECT_NEAR(klein_support_transform(1.3), std::tanh(1.3), 0.0);
  EXPECT_THROW(klein_support_transform(-0.1), error);
}

TEST(KleinCurvatureTransform, PointValues) {
  EXPECT_EQ(klein_curvature_transform(0.7, 0.4, 0.0), 0.7);
  EXPECT_NEAR(klein_curvature_transform(1.0, 0.5, 0.5), std::pow(2.0 / 3.0, 1.5), 1e-15);
  EXPECT_EQ(klein_curvature_transform(1.0, 0.0, 1.0), 0.0);
  EXPECT_THROW(klein_curvature_transform(1.0, 0.8, 0.8), error);
  for (double g : {0.0, 0.3, 0.9})
    for (double gp : {0.0, 0.1, 0.4}) {
      const double rt = klein_curvature_transform(2.0, g, gp);
      EXPECT_GE(rt, 0.0);
      EXPECT_LE(rt, 2.0);
    }
}

// An off-centre hyperbolic circle maps to an ellipse; its Euclidean radius of
// curvature, measured by three-point circumradii, matches the transform of
// the hyperbolic radius of curvature tanh(r0).
TEST(KleinCurvatureTransform, MatchesImageOfOffCentreCircle) {
  const ModelPlane h(-1.0);
  const double r0 = 0.8;
  for (double offset : {0.0, 0.5, 1.2}) {
    const auto iso = translation_along_x(h, offset);
    double prev = 0.0;
    for (std::size_t m : {512u, 1024u, 2048u, 4096u}) {
      const auto src = regular_polygon(h, m, r0).transformed(iso);
      std::vector<Vec2> img;
      for (const auto& v : src.vertices()) img.push_back(klein_map(h, v));
      const auto kappa = menger_curvature(img);
      double worst = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const Vec2 p = img[k];
        const Vec2 t = (img[(k + 1) % m] - img[(k + m - 1) % m]).normalized();
        const Vec2 nrm(t.y(), -t.x());
        const double expect = klein_curvature_transform(std::tanh(r0), p.dot(nrm), p.dot(t));
        worst = std::max(worst, std::abs(1.0 / kappa[k] - expect) / expect);
      }
      if (offset == 0.0) {
        EXPECT_LE(worst, 1e-9);
      } else if (prev > 0.0) {
        EXPECT_NEAR(std::log2(prev / worst), 2.0, 0.2) << "offset " << offset << " m " << m;
      }
      prev = worst;
    }
    EXPECT_LE(prev, 1e-5) << "offset " << offset;
  }
}

TEST(GnomonicMap, ReferencePoints) {
  const ModelPlane s(1.0);
  EXPECT_NEAR(gnomonic_map(s, s.origin(), s.origin()).norm(), 0.0, 1e-15);
  for (double rho : {0.2, 1.0, 1.5})
    EXPECT_NEAR(gnomonic_map(s, s.polar_point(rho, 0.9), s.origin()).norm(), std::tan(rho), 1e-12 * std::tan(rho));
  EXPECT_THROW(gnomonic_map(s, s.polar_point(pi / 2, 0.0), s.origin()), error);
  EXPECT_THROW(gnomonic_map(s, s.polar_point(2.0, 0.0), s.origin()), error);
  const ModelPlane s4(4.0);  // radius 1/2: image radius r tan(rho / r)
  EXPECT_NEAR(gnomonic_map(s4, s4.polar_point(0.3, 0.0), s4.origin()).norm(), 0.5 * std::tan(0.6), 1e-14);
}

TEST(GnomonicMap, GeodesicsBecomeLinesAndTangencyIsKept) {
  const ModelPlane s(1.0);
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto pole = s.polar_point(0.3, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const auto p = s.polar_point(1.0 * u(rng), 2 * pi * u(rng));
    const auto q = s.polar_point(1.0 * u(rng), 2 * pi * u(rng));
    const double d = distance(s, p, q);
    if (d < 1e-3) continue;
    const auto r = exp_map(s, direction_to(s, p, q), d * u(rng));
    EXPECT_LE(collinearity(gnomonic_map(s, p, pole), gnomonic_map(s, q, pole), gnomonic_map(s, r, pole)), 1e-10);
  }
  // Geodesic tangent to the circle of radius rho about the pole.
  for (double rho : {0.3, 0.9}) {
    const auto touch = s.polar_point(rho, 0.4);
    const auto radial = direction_to(s, touch, s.origin());
    const TangentVec along = make_tangent(s, touch, rotate_left(s, touch, radial.dir));
    const Vec2 a = gnomonic_map(s, exp_map(s, along, 0.2), s.origin());
    const Vec2 b = gnomonic_map(s, exp_map(s, along, 0.5), s.origin());
    const Vec2 dir = (b - a).normalized();
    const double line_dist = std::abs(a.x() * dir.y() - a.y() * dir.x());
    EXPECT_NEAR(line_dist, std::tan(rho), 1e-9);
  }
}

TEST(GnomonicMap, ComplementaryCircleHasCurvatureTanR0) {
  const ModelPlane s(1.0);
  for (double r0 : {0.3, 0.7, 1.2}) {
    const auto img = gnomonic_image(regular_polygon(s, 1024, pi / 2 - r0), s.origin());
    for (double k : menger_curvature(img)) EXPECT_NEAR(k, std::tan(r0), 1e-9);
  }
}

TEST(PolarDual, ComplementaryRadiusAboutSamePole) {
  for (double r0 : {pi / 8, pi / 4, 3 * pi / 8, 1.0}) {
    for (bool south : {false, true}) {
      const auto src = south ? south_circle(512, r0) : regular_polygon(ModelPlane(1.0), 512, r0);
      const Vec3 pole = south ? Vec3(0, 0, -1) : Vec3(0, 0, 1);
      // Edge great circles pass at distance atan(tan r0 cos(pi/m)) from the pole.
      const double expect = pi / 2 - std::atan(std::tan(r0) * std::cos(pi / 512));
      const auto dual = polar_dual(src);
      for (const Vec3& v : dual.verts) {
        EXPECT_NEAR(v.norm(), 1.0, 1e-12);
        EXPECT_NEAR(std::acos(std::clamp(v.dot(pole), -1.0, 1.0)), expect, 1e-12);
      }
      // Orientation-independent.
      const auto rev = polar_dual(src.reversed());
      EXPECT_NEAR(std::acos(std::clamp(rev.verts[0].dot(pole), -1.0, 1.0)), expect, 1e-12);
    }
  }
}

TEST(PolarDual, ExchangesCurvatureCotWithTan) {
  const ModelPlane s(1.0);
  for (double rho : {pi / 8, pi / 4, 3 * pi / 8}) {
    const std::size_t m = 4096;
    const auto src = regular_polygon(s, m, rho);
    const auto dual = polar_dual(src).to_curve(s);
    EXPECT_NEAR(min_specific_curvature(src).lambda_hat, 1 / std::tan(rho), 1e-6);
    EXPECT_NEAR(min_specific_curvature(dual).lambda_hat, std::tan(rho), 1e-6);
  }
}

TEST(PolarDual, DoubleDualReturnsSourceShiftedByOne) {
  const std::size_t m = 4096;
  const auto src = regular_polygon(ModelPlane(1.0), m, 1.0, 0.1);
  const auto twice = polar_dual(polar_dual(src));
  ASSERT_EQ(twice.verts.size(), m);
  double worst = 0.0;
  for (std::size_t k = 0; k < m; ++k)
    worst = std::max(worst, (twice.verts[k] - src.vertex(k + 1).coords).norm());
  EXPECT_LE(worst, 1e-6);
}

TEST(PolarDual, RejectsEquatorAndOtherPlanes) {
  try {
    polar_dual(regular_polygon(ModelPlane(1.0), 64, pi / 2));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::hemisphere);
  }
  EXPECT_THROW(polar_dual(regular_polygon(ModelPlane(0.0), 8, 1.0)), error);
}

TEST(PolarDual, RescalesOtherPositiveCurvatures) {
  const ModelPlane s4(4.0);
  const auto src = regular_polygon(s4, 256, 0.2);  // angular radius 0.4
  const auto dual = polar_dual(src);
  for (const Vec3& v : dual.verts)
    EXPECT_NEAR(std::acos(v.z()), pi / 2 - std::atan(std::tan(0.4) * std::cos(pi / 256)), 1e-12);
}
