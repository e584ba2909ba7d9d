#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string_view>

#include "geodeform/geometry.hpp"

namespace geodeform {

/// The supported subset of Kimberling triangle centers.
enum class CenterKind { X1, X2, X3, X4, X5, X13, X14 };

constexpr std::array<CenterKind, 7> kAllCenters = {CenterKind::X1,  CenterKind::X2,  CenterKind::X3, CenterKind::X4,
                                                   CenterKind::X5, CenterKind::X13, CenterKind::X14};

constexpr std::string_view to_string(CenterKind k) {
  switch (k) {
    case CenterKind::X1: return "X1";
    case CenterKind::X2: return "X2";
    case CenterKind::X3: return "X3";
    case CenterKind::X4: return "X4";
    case CenterKind::X5: return "X5";
    case CenterKind::X13: return "X13";
    case CenterKind::X14: return "X14";
  }
  return "?";
}

/// Which side of a base segment an erected apex goes on, relative to a reference point.
enum class Orientation { Toward, Away };

namespace detail {

// +1 if `ref` is left of b->c, -1 if right; throws when ref is on the line.
inline double reference_side(Point b, Point c, Point ref, const ToleranceBudget& tol) {
  const double diam = diameter({b, c, ref});
  const double area = signed_area(b, c, ref);
  if (!(std::abs(area) > tol.abs_floor * diam * diam))
    throw GeometryError(ErrorCode::AmbiguousOrientation, "reference point lies on the base line");
  return area > 0.0 ? 1.0 : -1.0;
}

inline double apex_sign(Point b, Point c, Orientation o, Point ref, const ToleranceBudget& tol) {
  const double side = reference_side(b, c, ref, tol);
  return o == Orientation::Toward ? side : -side;
}

inline void require_distinct(Point b, Point c, const ToleranceBudget& tol, const char* what) {
  require_finite(b, what);
  require_finite(c, what);
  if (!(distance(b, c) > tol.abs_floor * magnitude_scale({b, c})))
    throw GeometryError(ErrorCode::CoincidentPoints, what);
}

inline void require_triangle(Point a, Point b, Point c, const ToleranceBudget& tol) {
  require_finite(a, "triangle");
  require_finite(b, "triangle");
  require_finite(c, "triangle");
  const double diam = diameter({a, b, c});
  if (!(std::abs(signed_area(a, b, c)) > tol.abs_floor * diam * diam))
    throw GeometryError(ErrorCode::CollinearPoints, "triangle vertices are collinear");
}

}  // namespace detail

/// Apex of the equilateral triangle erected on segment bc.
inline Point equilateral_apex(Point b, Point c, Orientation orientation, Point reference,
                              const ToleranceBudget& tol = {}) {
  detail::require_distinct(b, c, tol, "equilateral_apex base");
  const double s = detail::apex_sign(b, c, orientation, reference, tol);
  return midpoint(b, c) + (s * std::numbers::sqrt3 / 2.0) * perp(c - b);
}

/// Apex o of the isosceles right triangle on segment ab (right angle at o).
inline Point right_isosceles_apex(Point a, Point b, Orientation orientation, Point reference,
                                  const ToleranceBudget& tol = {}) {
  detail::require_distinct(a, b, tol, "right_isosceles_apex base");
  const double s = detail::apex_sign(a, b, orientation, reference, tol);
  return midpoint(a, b) + (0.5 * s) * perp(b - a);
}

namespace detail {

// Common point of the lines joining each vertex to the equilateral apex erected on the
// opposite side. Outward apexes give X13, inward apexes give X14.
inline Point isogonic_center(Point a, Point b, Point c, Orientation apex_side, const ToleranceBudget& tol) {
  const std::array<Point, 3> v{a, b, c};
  std::array<Line, 3> lines;
  for (int i = 0; i < 3; ++i) {
    const Point vertex = v[i];
    const Point apex = equilateral_apex(v[(i + 1) % 3], v[(i + 2) % 3], apex_side, vertex, tol);
    try {
      lines[i] = line_through(vertex, apex, tol);
    } catch (const GeometryError&) {
      throw GeometryError(ErrorCode::IllConditioned, "isogonic apex coincides with its vertex");
    }
  }
  std::array<Point, 3> meets;
  try {
    for (int i = 0; i < 3; ++i)
      meets[i] = intersect(lines[i], lines[(i + 1) % 3], tol).points.front();
  } catch (const GeometryError&) {
    throw GeometryError(ErrorCode::IllConditioned, "isogonic lines are parallel");
  }
  const Point x = least_squares_point(lines, tol);
  const Point centroid = (a + b + c) / 3.0;
  const double scale = std::max(diameter({a, b, c}), distance(x, centroid));
  const double spread = diameter(meets);
  if (spread > tol.rel_tol * scale)
    throw GeometryError(ErrorCode::IllConditioned, "isogonic lines do not meet cleanly");
  return x;
}

}  // namespace detail

inline Point triangle_center(CenterKind kind, Point a, Point b, Point c, const ToleranceBudget& tol = {}) {
  detail::require_triangle(a, b, c, tol);
  switch (kind) {
    case CenterKind::X1: {
      const double la = distance(b, c);
      const double lb = distance(c, a);
      const double lc = distance(a, b);
      return (la * a + lb * b + lc * c) / (la + lb + lc);
    }
    case CenterKind::X2:
      return (a + b + c) / 3.0;
    case CenterKind::X3:
      return circumcircle(a, b, c, tol).center;
    case CenterKind::X4:
      // Euler: H = A + B + C - 2O
      return a + b + c - 2.0 * circumcircle(a, b, c, tol).center;
    case CenterKind::X5: {
      const Point o = circumcircle(a, b, c, tol).center;
      return midpoint(o, a + b + c - 2.0 * o);
    }
    case CenterKind::X13:
      return detail::isogonic_center(a, b, c, Orientation::Away, tol);
    case CenterKind::X14:
      return detail::isogonic_center(a, b, c, Orientation::Toward, tol);
  }
  throw GeometryError(ErrorCode::InvalidArgument, "unknown center kind");
}

struct FermatOracleResult {
  Point point;
  bool obtuse = false;  // some angle >= 120 degrees; point is that vertex
  int iterations = 0;
};

/// Minimizer of |PA| + |PB| + |PC| by Weiszfeld iteration from the centroid.
/// Independent of the constructive X13 path.
inline FermatOracleResult fermat_oracle(Point a, Point b, Point c, const ToleranceBudget& tol = {}) {
  detail::require_triangle(a, b, c, tol);
  const std::array<Point, 3> v{a, b, c};
  for (int i = 0; i < 3; ++i) {
    const Point u = v[(i + 1) % 3] - v[i];
    const Point w = v[(i + 2) % 3] - v[i];
    if (dot(u, w) <= -0.5 * norm(u) * norm(w)) return {v[i], true, 0};
  }
  const double scale = diameter(v);
  Point x = (a + b + c) / 3.0;
  int it = 0;
  for (; it < 100000; ++it) {
    Point num{};
    double den = 0.0;
    for (Point p : v) {
      const double d = distance(x, p);
      if (d == 0.0) return {p, false, it};
      num = num + p / d;
      den += 1.0 / d;
    }
    const Point next = num / den;
    const double step = distance(next, x);
    x = next;
    if (step < 1e-12 * scale) break;
  }
  return {x, false, it};
}

}  // namespace geodeform
