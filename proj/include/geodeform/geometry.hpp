#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "geodeform/error.hpp"

namespace geodeform {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point p, Point q) { return {p.x + q.x, p.y + q.y}; }
  friend constexpr Point operator-(Point p, Point q) { return {p.x - q.x, p.y - q.y}; }
  friend constexpr Point operator-(Point p) { return {-p.x, -p.y}; }
  friend constexpr Point operator*(double k, Point p) { return {k * p.x, k * p.y}; }
  friend constexpr Point operator*(Point p, double k) { return {k * p.x, k * p.y}; }
  friend constexpr Point operator/(Point p, double k) { return {p.x / k, p.y / k}; }
  friend constexpr bool operator==(Point, Point) = default;
};

constexpr double dot(Point p, Point q) { return p.x * q.x + p.y * q.y; }
constexpr double cross(Point p, Point q) { return p.x * q.y - p.y * q.x; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double distance(Point p, Point q) { return norm(q - p); }
constexpr Point perp(Point p) { return {-p.y, p.x}; }
constexpr Point midpoint(Point p, Point q) { return {0.5 * (p.x + q.x), 0.5 * (p.y + q.y)}; }

inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline void require_finite(Point p, const char* what) {
  if (!is_finite(p)) throw GeometryError(ErrorCode::NonFinite, what);
}

/// Normalized implicit line a*x + b*y + c = 0 with a^2 + b^2 = 1.
/// Sign is canonical: a > 0, or a == 0 and b > 0.
struct Line {
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;

  static Line from_coefficients(double a, double b, double c) {
    const double n = std::hypot(a, b);
    if (!(n > 0.0) || !std::isfinite(n) || !std::isfinite(c))
      throw GeometryError(ErrorCode::InvalidArgument, "line normal must be finite and nonzero");
    a /= n;
    b /= n;
    c /= n;
    if (a < 0.0 || (a == 0.0 && b < 0.0)) {
      a = -a;
      b = -b;
      c = -c;
    }
    return Line{a, b, c};
  }

  /// Line through `p` with direction `dir` (any nonzero length).
  static Line through_point(Point p, Point dir) {
    const Point n = perp(dir);
    return from_coefficients(n.x, n.y, -dot(n, p));
  }

  Point normal() const { return {a, b}; }
  Point direction() const { return {-b, a}; }
  double signed_distance(Point p) const { return a * p.x + b * p.y + c; }
  Point foot(Point p) const { return p - signed_distance(p) * normal(); }
  bool is_normalized(double eps = 1e-12) const { return std::abs(a * a + b * b - 1.0) <= eps; }

  friend bool operator==(const Line&, const Line&) = default;
};

struct Circle {
  Point center;
  double radius = 0.0;

  double power(Point p) const {
    const Point d = p - center;
    return dot(d, d) - radius * radius;
  }

  friend bool operator==(const Circle&, const Circle&) = default;
};

/// Numeric acceptance thresholds. Residuals are compared against rel_tol; abs_floor
/// separates "degenerate" from "merely small".
struct ToleranceBudget {
  double rel_tol = 1e-9;
  double abs_floor = 1e-12;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_floor > 0.0) || abs_floor > rel_tol)
      throw GeometryError(ErrorCode::InvalidArgument,
                          "tolerance requires rel_tol > 0, abs_floor > 0, abs_floor <= rel_tol");
  }
};

/// Max pairwise distance.
inline double diameter(std::span<const Point> pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, distance(pts[i], pts[j]));
  return d;
}

inline double diameter(std::initializer_list<Point> pts) {
  return diameter(std::span<const Point>(pts.begin(), pts.size()));
}

/// max(1, |p|) over the arguments; used for absolute-floor comparisons.
inline double magnitude_scale(std::initializer_list<Point> pts) {
  double m = 1.0;
  for (Point p : pts) m = std::max(m, norm(p));
  return m;
}

inline double signed_area(Point p, Point q, Point r) { return 0.5 * cross(q - p, r - p); }

inline Line line_through(Point p, Point q, const ToleranceBudget& tol = {}) {
  require_finite(p, "line_through");
  require_finite(q, "line_through");
  if (!(distance(p, q) > tol.abs_floor * magnitude_scale({p, q})))
    throw GeometryError(ErrorCode::CoincidentPoints, "line_through needs two distinct points");
  const Point n = perp(q - p);
  return Line::from_coefficients(n.x, n.y, -dot(n, midpoint(p, q)));
}

inline Circle circumcircle(Point p, Point q, Point r, const ToleranceBudget& tol = {}) {
  require_finite(p, "circumcircle");
  require_finite(q, "circumcircle");
  require_finite(r, "circumcircle");
  const double diam = diameter({p, q, r});
  if (!(std::abs(signed_area(p, q, r)) > tol.abs_floor * diam * diam))
    throw GeometryError(ErrorCode::CollinearPoints, "circumcircle of collinear points");
  // Solve relative to p for accuracy.
  const Point b = q - p;
  const Point c = r - p;
  const double d = 2.0 * cross(b, c);
  const double bb = dot(b, b);
  const double cc = dot(c, c);
  const Point u{(c.y * bb - b.y * cc) / d, (b.x * cc - c.x * bb) / d};
  return Circle{p + u, norm(u)};
}

// ---------------------------------------------------------------------------
// Transforms

struct Rotate {
  Point center;
  double angle;  // radians, counter-clockwise
};
struct ReflectLine {
  Line line;
};
struct ReflectPoint {
  Point center;
};
struct Translate {
  double dx;
  double dy;
};
struct Scale {
  Point center;
  double factor;
};

using Transform = std::variant<Rotate, ReflectLine, ReflectPoint, Translate, Scale>;

inline Point rotate(Point p, Point center, double angle) {
  const double cs = std::cos(angle);
  const double sn = std::sin(angle);
  const Point d = p - center;
  return center + Point{cs * d.x - sn * d.y, sn * d.x + cs * d.y};
}

inline Point reflect(Point p, const Line& l) {
  if (!l.is_normalized()) throw GeometryError(ErrorCode::NotNormalized, "reflect about unnormalized line");
  return p - 2.0 * l.signed_distance(p) * l.normal();
}

inline Point reflect(Point p, Point center) { return 2.0 * center - p; }

inline Point transform(Point p, const Transform& t) {
  require_finite(p, "transform");
  const Point out = std::visit(
      [p](const auto& op) -> Point {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, Rotate>) {
          return rotate(p, op.center, op.angle);
        } else if constexpr (std::is_same_v<T, ReflectLine>) {
          return reflect(p, op.line);
        } else if constexpr (std::is_same_v<T, ReflectPoint>) {
          return reflect(p, op.center);
        } else if constexpr (std::is_same_v<T, Translate>) {
          return {p.x + op.dx, p.y + op.dy};
        } else {
          return op.center + op.factor * (p - op.center);
        }
      },
      t);
  require_finite(out, "transform parameters");
  return out;
}

// ---------------------------------------------------------------------------
// Intersections

enum class IntersectionKind { Crossing, Tangent, Disjoint, Concentric, Identical };

struct Intersection {
  IntersectionKind kind = IntersectionKind::Disjoint;
  std::vector<Point> points;  // sorted lexicographically by (x, y)
};

using Curve = std::variant<Line, Circle>;

namespace detail {

inline bool lex_less(Point p, Point q) { return p.x < q.x || (p.x == q.x && p.y < q.y); }

inline Intersection two_points(Point base, Point offset) {
  Point p = base - offset;
  Point q = base + offset;
  if (lex_less(q, p)) std::swap(p, q);
  return {IntersectionKind::Crossing, {p, q}};
}

inline Intersection intersect_lines(const Line& l1, const Line& l2, const ToleranceBudget& tol) {
  const double det = l1.a * l2.b - l2.a * l1.b;
  if (!(std::abs(det) > tol.abs_floor))
    throw GeometryError(ErrorCode::Parallel, "intersect of parallel lines");
  const Point p{(l1.b * l2.c - l2.b * l1.c) / det, (l2.a * l1.c - l1.a * l2.c) / det};
  return {IntersectionKind::Crossing, {p}};
}

inline Intersection intersect_line_circle(const Line& l, const Circle& c, const ToleranceBudget& tol) {
  const double s = l.signed_distance(c.center);
  const Point foot = c.center - s * l.normal();
  const double scale = std::max(c.radius, std::abs(s));
  const double band = tol.abs_floor * scale * scale;
  const double disc = (c.radius - s) * (c.radius + s);
  if (disc < -band) return {IntersectionKind::Disjoint, {}};
  if (disc <= band) return {IntersectionKind::Tangent, {foot}};
  return two_points(foot, std::sqrt(disc) * l.direction());
}

inline Intersection intersect_circles(const Circle& c1, const Circle& c2, const ToleranceBudget& tol) {
  const Point delta = c2.center - c1.center;
  const double d = norm(delta);
  const double scale = std::max({c1.radius, c2.radius, d});
  if (!(d > tol.abs_floor * scale)) {
    const bool same = std::abs(c1.radius - c2.radius) <= tol.abs_floor * scale;
    return {same ? IntersectionKind::Identical : IntersectionKind::Concentric, {}};
  }
  const Point u = delta / d;
  const double along = (d * d + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * d);
  const double h2 = (c1.radius - along) * (c1.radius + along);
  const double band = tol.abs_floor * scale * scale;
  const Point base = c1.center + along * u;
  if (h2 < -band) return {IntersectionKind::Disjoint, {}};
  if (h2 <= band) return {IntersectionKind::Tangent, {base}};
  return two_points(base, std::sqrt(h2) * perp(u));
}

}  // namespace detail

/// Intersection of two lines/circles. Throws Parallel for parallel lines; concentric
/// circles return an empty, flagged result.
inline Intersection intersect(const Curve& first, const Curve& second, const ToleranceBudget& tol = {}) {
  return std::visit(
      [&tol](const auto& u, const auto& v) -> Intersection {
        using U = std::decay_t<decltype(u)>;
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<U, Line> && std::is_same_v<V, Line>) {
          return detail::intersect_lines(u, v, tol);
        } else if constexpr (std::is_same_v<U, Line>) {
          return detail::intersect_line_circle(u, v, tol);
        } else if constexpr (std::is_same_v<V, Line>) {
          return detail::intersect_line_circle(v, u, tol);
        } else {
          return detail::intersect_circles(u, v, tol);
        }
      },
      first, second);
}

/// Point minimizing the summed squared distances to the lines.
inline Point least_squares_point(std::span<const Line> lines, const ToleranceBudget& tol = {}) {
  double m00 = 0.0, m01 = 0.0, m11 = 0.0, r0 = 0.0, r1 = 0.0;
  for (const Line& l : lines) {
    m00 += l.a * l.a;
    m01 += l.a * l.b;
    m11 += l.b * l.b;
    r0 -= l.a * l.c;
    r1 -= l.b * l.c;
  }
  const double det = m00 * m11 - m01 * m01;
  if (!(std::abs(det) > tol.abs_floor))
    throw GeometryError(ErrorCode::Parallel, "least-squares point of parallel lines");
  return {(r0 * m11 - r1 * m01) / det, (m00 * r1 - m01 * r0) / det};
}

// ---------------------------------------------------------------------------

struct Bisector {
  Line line;
  bool straight_angle = false;  // toward-vectors opposite; direction taken perpendicular
};

/// Internal bisector of the angle at `vertex` spanned by the two target points.
inline Bisector angle_bisector(Point vertex, Point toward1, Point toward2, const ToleranceBudget& tol = {}) {
  const double scale = magnitude_scale({vertex, toward1, toward2});
  const Point d1 = toward1 - vertex;
  const Point d2 = toward2 - vertex;
  if (!(norm(d1) > tol.abs_floor * scale) || !(norm(d2) > tol.abs_floor * scale))
    throw GeometryError(ErrorCode::CoincidentPoints, "angle_bisector vertex coincides with a target");
  const Point u1 = d1 / norm(d1);
  const Point u2 = d2 / norm(d2);
  const Point sum = u1 + u2;
  if (!(norm(sum) > tol.abs_floor)) return {Line::through_point(vertex, perp(u1)), true};
  return {Line::through_point(vertex, sum), false};
}

inline Line radical_axis(const Circle& c1, const Circle& c2, const ToleranceBudget& tol = {}) {
  const Point delta = c2.center - c1.center;
  const double d = norm(delta);
  const double scale = std::max({c1.radius, c2.radius, d});
  if (!(d > tol.abs_floor * scale))
    throw GeometryError(ErrorCode::ConcentricCircles, "radical axis of concentric circles");
  const Point u = delta / d;
  const double along = (d * d + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * d);
  return Line::through_point(c1.center + along * u, perp(u));
}

}  // namespace geodeform
