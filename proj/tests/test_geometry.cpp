#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "geodeform/geometry.hpp"
#include "oracles.hpp"

using namespace geodeform;

namespace {

void expect_near(Point p, Point q, double tol) {
  EXPECT_NEAR(p.x, q.x, tol);
  EXPECT_NEAR(p.y, q.y, tol);
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const GeometryError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no GeometryError thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(LineThrough, AxisCases) {
  const Line h = line_through({0, 0}, {2, 0});
  EXPECT_DOUBLE_EQ(h.a, 0.0);
  EXPECT_DOUBLE_EQ(h.b, 1.0);
  EXPECT_DOUBLE_EQ(h.c, 0.0);
  const Line v = line_through({1, 1}, {1, 5});
  EXPECT_DOUBLE_EQ(v.a, 1.0);
  EXPECT_DOUBLE_EQ(v.b, 0.0);
  EXPECT_DOUBLE_EQ(v.c, -1.0);
}

TEST(LineThrough, CoincidentPointsRejected) {
  EXPECT_EQ(code_of([] { line_through({0, 0}, {0, 0}); }), ErrorCode::CoincidentPoints);
  EXPECT_EQ(code_of([] { line_through({0, 0}, {NAN, 0}); }), ErrorCode::NonFinite);
}

TEST(LineThrough, NormalizedAndIncidentOnRandomPairs) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Point p = oracle::random_point(rng, -100, 100), q = oracle::random_point(rng, -100, 100);
    const Line l = line_through(p, q);
    EXPECT_LE(std::abs(l.a * l.a + l.b * l.b - 1.0), 1e-12);
    EXPECT_TRUE(l.a > 0.0 || (l.a == 0.0 && l.b > 0.0));
    const double bound = 1e-12 * (1.0 + norm(p) + norm(q));
    EXPECT_LE(std::abs(l.signed_distance(p)), bound);
    EXPECT_LE(std::abs(l.signed_distance(q)), bound);
  }
}

TEST(Circumcircle, RightTriangle) {
  const Circle c = circumcircle({0, 0}, {2, 0}, {0, 2});
  expect_near(c.center, {1, 1}, 1e-15);
  EXPECT_NEAR(c.radius, std::numbers::sqrt2, 1e-15);
}

TEST(Circumcircle, CollinearRejected) {
  EXPECT_EQ(code_of([] { circumcircle({0, 0}, {1, 0}, {2, 0}); }), ErrorCode::CollinearPoints);
}

TEST(Circumcircle, MatchesLeastSquaresFitOracle) {
  const Point a{0, 0}, b{4, 0}, c{1, 3};
  const Circle got = circumcircle(a, b, c);
  const auto fit = oracle::ls_circle({a, b, c});
  expect_near(got.center, fit.center, 1e-12);
  EXPECT_NEAR(got.radius, fit.radius, 1e-12);
}

TEST(Circumcircle, RandomTrianglesAgainstOracle) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const Point a = oracle::random_point(rng), b = oracle::random_point(rng), c = oracle::random_point(rng);
    const double diam = diameter({a, b, c});
    if (std::abs(signed_area(a, b, c)) < 1e-3 * diam * diam) continue;
    const Circle got = circumcircle(a, b, c);
    for (Point p : {a, b, c}) EXPECT_LE(std::abs(distance(p, got.center) - got.radius), 1e-12 * diam);
    const auto fit = oracle::ls_circle({a, b, c});
    EXPECT_LE(distance(got.center, fit.center), 1e-8 * std::max(diam, got.radius));
  }
}

TEST(Transform, SpecExamples) {
  expect_near(transform({3, 1}, ReflectPoint{{1, 1}}), {-1, 1}, 0.0);
  expect_near(transform({0, 2}, ReflectLine{Line::from_coefficients(0, 1, 0)}), {0, -2}, 1e-15);
  expect_near(transform({1, 0}, Rotate{{0, 0}, std::numbers::pi / 2}), {0, 1}, 1e-15);
  expect_near(transform({1, 2}, Translate{3, -1}), {4, 1}, 0.0);
  expect_near(transform({2, 2}, Scale{{1, 1}, 3}), {4, 4}, 0.0);
}

TEST(Transform, UnnormalizedLineRejected) {
  EXPECT_EQ(code_of([] { reflect({0, 0}, Line{2.0, 0.0, 1.0}); }), ErrorCode::NotNormalized);
}

TEST(Transform, IsometriesPreserveDistances) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const Point p = oracle::random_point(rng), q = oracle::random_point(rng);
    const Point c = oracle::random_point(rng), r = oracle::random_point(rng);
    const double angle = std::uniform_real_distribution<double>(-7, 7)(rng);
    const double d = distance(p, q);
    for (const Transform& t : {Transform{Rotate{c, angle}}, Transform{ReflectLine{line_through(c, r)}},
                               Transform{ReflectPoint{c}}, Transform{Translate{c.x, c.y}}}) {
      EXPECT_NEAR(distance(transform(p, t), transform(q, t)), d, 1e-12 * std::max(1.0, d) * 10);
    }
    EXPECT_EQ(reflect(p, c), 2.0 * c - p);
  }
}

TEST(Intersect, LineCircleExamples) {
  const Circle unit{{0, 0}, 1};
  const auto two = intersect(Line::from_coefficients(0, 1, 0), unit);
  ASSERT_EQ(two.points.size(), 2u);
  expect_near(two.points[0], {-1, 0}, 1e-15);
  expect_near(two.points[1], {1, 0}, 1e-15);
  const auto none = intersect(Line::from_coefficients(1, 0, -2), unit);
  EXPECT_TRUE(none.points.empty());
  EXPECT_EQ(none.kind, IntersectionKind::Disjoint);
  const auto tangent = intersect(Line::from_coefficients(1, 0, -1), unit);
  ASSERT_EQ(tangent.points.size(), 1u);
  EXPECT_EQ(tangent.kind, IntersectionKind::Tangent);
  expect_near(tangent.points[0], {1, 0}, 1e-15);
}

TEST(Intersect, CircleCircleLens) {
  const auto r = intersect(Circle{{0, 0}, std::numbers::sqrt2}, Circle{{2, 0}, std::numbers::sqrt2});
  ASSERT_EQ(r.points.size(), 2u);
  expect_near(r.points[0], {1, -1}, 1e-15);
  expect_near(r.points[1], {1, 1}, 1e-15);
}

TEST(Intersect, ConcentricAndParallel) {
  const auto r = intersect(Circle{{0, 0}, 1}, Circle{{0, 0}, 2});
  EXPECT_EQ(r.kind, IntersectionKind::Concentric);
  EXPECT_TRUE(r.points.empty());
  EXPECT_EQ(intersect(Circle{{1, 1}, 2}, Circle{{1, 1}, 2}).kind, IntersectionKind::Identical);
  EXPECT_EQ(code_of([] { intersect(Line::from_coefficients(1, 0, 0), Line::from_coefficients(1, 0, -1)); }),
            ErrorCode::Parallel);
}

TEST(Intersect, ChordEndpointsRecovered) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), rad(0.1, 20);
  for (int i = 0; i < 1000; ++i) {
    const Circle c{oracle::random_point(rng), rad(rng)};
    const double t1 = ang(rng), t2 = ang(rng);
    const Point p = c.center + c.radius * Point{std::cos(t1), std::sin(t1)};
    const Point q = c.center + c.radius * Point{std::cos(t2), std::sin(t2)};
    if (distance(p, q) < 1e-3 * c.radius) continue;
    const auto r = intersect(line_through(p, q), c);
    ASSERT_EQ(r.points.size(), 2u);
    const double scale = std::max(c.radius, norm(c.center));
    const bool direct = distance(r.points[0], p) <= 1e-10 * scale && distance(r.points[1], q) <= 1e-10 * scale;
    const bool swapped = distance(r.points[0], q) <= 1e-10 * scale && distance(r.points[1], p) <= 1e-10 * scale;
    EXPECT_TRUE(direct || swapped);
  }
}

TEST(SignedArea, OrientationAndAntisymmetry) {
  EXPECT_DOUBLE_EQ(signed_area({0, 0}, {1, 0}, {0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(signed_area({0, 0}, {0, 1}, {1, 0}), -0.5);
  EXPECT_DOUBLE_EQ(signed_area({0, 0}, {1, 1}, {2, 2}), 0.0);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const Point a = oracle::random_point(rng), b = oracle::random_point(rng), c = oracle::random_point(rng);
    EXPECT_NEAR(signed_area(a, b, c), -signed_area(b, a, c), 1e-12);
    EXPECT_NEAR(signed_area(a, b, c), -signed_area(a, c, b), 1e-12);
  }
}

TEST(AngleBisector, Examples) {
  const Bisector right = angle_bisector({0, 0}, {1, 0}, {0, 1});
  EXPECT_FALSE(right.straight_angle);
  const Point dir = right.line.direction();
  EXPECT_NEAR(std::abs(dir.x), std::numbers::sqrt2 / 2, 1e-15);
  EXPECT_NEAR(dir.x, dir.y, 1e-15);
  EXPECT_NEAR(right.line.signed_distance({0, 0}), 0.0, 1e-15);

  const Bisector zero = angle_bisector({0, 0}, {1, 0}, {1, 0});
  EXPECT_NEAR(zero.line.signed_distance({5, 0}), 0.0, 1e-15);

  const Bisector straight = angle_bisector({0, 0}, {1, 0}, {-1, 0});
  EXPECT_TRUE(straight.straight_angle);
  EXPECT_NEAR(straight.line.signed_distance({0, 3}), 0.0, 1e-15);

  EXPECT_EQ(code_of([] { angle_bisector({0, 0}, {0, 0}, {1, 0}); }), ErrorCode::CoincidentPoints);
}

TEST(AngleBisector, EquidistantFromBothRays) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 500; ++i) {
    const Point v = oracle::random_point(rng), p = oracle::random_point(rng), q = oracle::random_point(rng);
    if (std::abs(signed_area(v, p, q)) < 1e-2) continue;
    const Line l = angle_bisector(v, p, q).line;
    // A point on the bisector inside the angle is equidistant from both sides.
    const Point inside = v + (p - v) / distance(p, v) + (q - v) / distance(q, v);
    EXPECT_NEAR(l.signed_distance(inside), 0.0, 1e-12 * 10);
    EXPECT_NEAR(std::abs(oracle::line_distance(inside, v, p)), std::abs(oracle::line_distance(inside, v, q)), 1e-12);
  }
}

TEST(RadicalAxis, Examples) {
  const Line equal = radical_axis({{0, 0}, 1}, {{4, 0}, 1});
  EXPECT_NEAR(-equal.c / equal.a, 2.0, 1e-15);
  EXPECT_NEAR(equal.b, 0.0, 1e-15);
  const Line unequal = radical_axis({{0, 0}, 2}, {{4, 0}, 1});
  EXPECT_NEAR(-unequal.c / unequal.a, 2.375, 1e-15);
  EXPECT_EQ(code_of([] { radical_axis({{0, 0}, 1}, {{0, 0}, 2}); }), ErrorCode::ConcentricCircles);
}

TEST(RadicalAxis, EqualPowerAndPerpendicular) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> rad(0.1, 5), t(-10, 10);
  for (int i = 0; i < 1000; ++i) {
    const Circle c1{oracle::random_point(rng), rad(rng)}, c2{oracle::random_point(rng), rad(rng)};
    const Line l = radical_axis(c1, c2);
    const Point d = c2.center - c1.center;
    EXPECT_NEAR(dot(l.direction(), d) / norm(d), 0.0, 1e-12);
    const double scale = std::max({c1.radius, c2.radius, norm(d), norm(c1.center), norm(c2.center)});
    const Point p = l.foot({0, 0}) + t(rng) * l.direction();
    EXPECT_NEAR(c1.power(p), c2.power(p), 1e-10 * scale * scale);
  }
}

TEST(Tolerance, Validation) {
  EXPECT_NO_THROW(ToleranceBudget{}.validate());
  EXPECT_THROW((ToleranceBudget{1e-12, 1e-9}.validate()), GeometryError);
  EXPECT_THROW((ToleranceBudget{0.0, 1e-12}.validate()), GeometryError);
}

TEST(Isometry, OperationsCommuteWithRigidMotion) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    const auto g = oracle::random_isometry(rng);
    const Point a = oracle::random_point(rng), b = oracle::random_point(rng), c = oracle::random_point(rng);
    const double scale = std::max({diameter({a, b, c}), norm(a), norm(b), norm(c), 10.0});
    if (std::abs(signed_area(a, b, c)) < 1e-2) continue;
    const Circle k = circumcircle(a, b, c), kg = circumcircle(g(a), g(b), g(c));
    EXPECT_LE(distance(g(k.center), kg.center), 1e-10 * scale);
    EXPECT_NEAR(k.radius, kg.radius, 1e-10 * scale);
    const Point m = intersect(line_through(a, b), line_through(b, c)).points.front();
    const Point mg = intersect(line_through(g(a), g(b)), line_through(g(b), g(c))).points.front();
    EXPECT_LE(distance(g(m), mg), 1e-10 * scale);
    const Point r = reflect(c, line_through(a, b)), rg = reflect(g(c), line_through(g(a), g(b)));
    EXPECT_LE(distance(g(r), rg), 1e-10 * scale);
  }
}

TEST(Determinism, BitIdenticalRepeats) {
  const Circle c1 = circumcircle({0.1, 0.2}, {3.3, 0.7}, {1.9, 4.4});
  const Circle c2 = circumcircle({0.1, 0.2}, {3.3, 0.7}, {1.9, 4.4});
  EXPECT_EQ(c1, c2);
}
