#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "curvebound/plane.hpp"

using namespace curvebound;
using std::numbers::pi;

namespace {

const double kPlanes[] = {0.0, 1.0, -1.0, 4.0, -0.25};

double oracle_curvature(double c, double r0) {
  if (c == 0.0) return 1.0 / r0;
  const double k = std::sqrt(std::abs(c));
  return c > 0 ? k / std::tan(k * r0) : k / std::tanh(k * r0);
}

double oracle_circumference(double c, double r0) {
  if (c == 0.0) return 2 * pi * r0;
  const double k = std::sqrt(std::abs(c));
  return c > 0 ? 2 * pi * std::sin(k * r0) / k : 2 * pi * std::sinh(k * r0) / k;
}

}  // namespace

TEST(LengthBound, ReferenceValues) {
  EXPECT_NEAR(length_bound(0.0, 1.0), 2 * pi, 1e-15);
  EXPECT_NEAR(length_bound(1.0, 1.0), pi * std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(length_bound(-1.0, std::sqrt(2.0)), 2 * pi, 1e-14);
}

TEST(LengthBound, RejectsNonPositiveDiscriminant) {
  EXPECT_THROW(length_bound(-1.0, 1.0), error);
  EXPECT_THROW(length_bound(-1.0, 0.5), error);
  try {
    length_bound(-4.0, 1.0);
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::hypothesis);
  }
}

TEST(LengthBound, EqualsCircumferenceOfCircleWithThatCurvature) {
  for (double c : kPlanes)
    for (double r0 : {0.1, 0.5, 1.0}) {
      if (c > 0 && r0 * std::sqrt(c) >= pi / 2) continue;
      const double lambda = oracle_curvature(c, r0);
      EXPECT_NEAR(circle_curvature(c, r0), lambda, 1e-12 * lambda);
      EXPECT_NEAR(circle_radius_from_curvature(c, lambda), r0, 1e-12);
      EXPECT_NEAR(circle_circumference(c, r0), oracle_circumference(c, r0), 1e-12);
      EXPECT_NEAR(length_bound(c, lambda), oracle_circumference(c, r0), 1e-11);
    }
}

TEST(ModelPlane, PolarPointsLieOnQuadricAtGivenDistance) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double c : kPlanes) {
    const ModelPlane plane(c);
    for (int i = 0; i < 200; ++i) {
      double rho = 2.0 * u(rng);
      if (c > 0) rho = std::min(rho, 0.9 * pi * plane.scale());
      const auto p = plane.polar_point(rho, 2 * pi * u(rng));
      EXPECT_TRUE(plane.contains(p));
      EXPECT_NEAR(distance(plane, plane.origin(), p), rho, 1e-12 * std::max(1.0, rho));
    }
  }
}

TEST(ModelPlane, RejectsOffQuadricPoints) {
  const ModelPlane sphere(1.0);
  EXPECT_THROW(sphere.require(PlanePoint(Vec3(0, 0, 1.1))), error);
  const ModelPlane hyp(-1.0);
  EXPECT_THROW(hyp.require(PlanePoint(Vec3(0, 0, -1))), error);
  EXPECT_THROW(ModelPlane(std::nan("")), error);
}

TEST(ExpMap, WalksGeodesicsAtUnitSpeed) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double c : kPlanes) {
    const ModelPlane plane(c);
    for (int i = 0; i < 100; ++i) {
      const auto p = plane.polar_point(u(rng), 2 * pi * u(rng));
      const auto q = plane.polar_point(u(rng), 2 * pi * u(rng));
      const double d = distance(plane, p, q);
      if (d < 1e-6) continue;
      const auto q2 = exp_map(plane, direction_to(plane, p, q), d);
      EXPECT_LT(distance(plane, q, q2), 1e-10);
      const auto mid = exp_map(plane, direction_to(plane, p, q), d / 2);
      EXPECT_NEAR(distance(plane, p, mid), d / 2, 1e-11);
      EXPECT_NEAR(distance(plane, mid, q), d / 2, 1e-11);
    }
  }
}

TEST(Tangent, RotateLeftIsQuarterTurnCounterclockwise) {
  for (double c : kPlanes) {
    const ModelPlane plane(c);
    const auto p = plane.polar_point(0.4, 1.1);
    const auto v = direction_to(plane, p, plane.polar_point(0.7, -0.3));
    const TangentVec jv = make_tangent(plane, p, rotate_left(plane, p, v.dir));
    EXPECT_NEAR(angle_between(plane, v, jv), pi / 2, 1e-12);
    EXPECT_NEAR(signed_angle(plane, v, jv), pi / 2, 1e-12);
    EXPECT_NEAR(signed_angle(plane, jv, v), -pi / 2, 1e-12);
  }
  // At the origin the chart orientation is the xy orientation.
  const ModelPlane hyp(-1.0);
  const Vec3 j = rotate_left(hyp, hyp.origin(), Vec3::UnitX());
  EXPECT_NEAR((j - Vec3::UnitY()).norm(), 0.0, 1e-15);
}

TEST(Tangent, MismatchedBasesAreRejected) {
  const ModelPlane plane(1.0);
  const auto a = direction_to(plane, plane.origin(), plane.polar_point(0.5, 0.0));
  const auto p = plane.polar_point(0.2, 0.0);
  const auto b = direction_to(plane, p, plane.polar_point(0.5, 1.0));
  try {
    angle_between(plane, a, b);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::mismatched_base);
  }
}

TEST(Isometry, PreservesDistancesAndMovesPointToOrigin) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double c : kPlanes) {
    const ModelPlane plane(c);
    for (int i = 0; i < 50; ++i) {
      const auto p = plane.polar_point(u(rng), 2 * pi * u(rng));
      const auto q = plane.polar_point(u(rng), 2 * pi * u(rng));
      const auto iso = isometry_to_origin(plane, p);
      const auto p2 = iso.apply(plane, p);
      EXPECT_LT(distance(plane, p2, plane.origin()), 1e-12);
      EXPECT_NEAR(distance(plane, p2, iso.apply(plane, q)), distance(plane, p, q), 1e-12);
    }
  }
}

TEST(Distance, SphericalAntipodesAndHyperbolicClosedForm) {
  const ModelPlane sphere(1.0);
  EXPECT_NEAR(distance(sphere, PlanePoint(Vec3(0, 0, 1)), PlanePoint(Vec3(0, 0, -1))), pi, 1e-15);
  const ModelPlane hyp(-1.0);
  // cosh d = -<p, q> for unit hyperboloid points.
  const auto p = hyp.polar_point(1.3, 0.2);
  const auto q = hyp.polar_point(0.9, 2.4);
  EXPECT_NEAR(std::cosh(distance(hyp, p, q)), -hyp.inner(p.coords, q.coords), 1e-12);
}
