#pragma once

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "geodeform/centers.hpp"
#include "geodeform/geometry.hpp"

namespace geodeform {

using Object = std::variant<Point, Line, Circle>;

struct Provenance {
  std::string builder;
  std::vector<double> parameters;
};

/// Labelled points, lines and circles produced by a builder or a script. Insertion order
/// is preserved; `segments` only affect rendering.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(Provenance provenance) : provenance_(std::move(provenance)) {}

  void add(const std::string& label, const Object& object) {
    if (label.empty()) throw GeometryError(ErrorCode::InvalidArgument, "empty label");
    if (index_.contains(label)) throw GeometryError(ErrorCode::InvalidArgument, "duplicate label " + label);
    std::visit([&label](const auto& o) { check_finite(o, label); }, object);
    index_.emplace(label, entries_.size());
    entries_.emplace_back(label, object);
  }

  void add_defining(const std::string& label, Point p) {
    add(label, p);
    defining_.push_back(label);
  }

  void add_segment(const std::string& from, const std::string& to) {
    point(from);
    point(to);
    segments_.emplace_back(from, to);
  }

  bool contains(std::string_view label) const { return index_.contains(std::string(label)); }

  const Object& at(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) throw GeometryError(ErrorCode::UnknownLabel, "no object labelled " + std::string(label));
    return entries_[it->second].second;
  }

  Point point(std::string_view label) const {
    const Object& o = at(label);
    if (const auto* p = std::get_if<Point>(&o)) return *p;
    throw GeometryError(ErrorCode::WrongObjectType, std::string(label) + " is not a point");
  }

  std::vector<Point> points(const std::vector<std::string>& labels) const {
    std::vector<Point> out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.push_back(point(l));
    return out;
  }

  const std::vector<std::pair<std::string, Object>>& entries() const { return entries_; }
  const std::vector<std::pair<std::string, std::string>>& segments() const { return segments_; }
  const std::vector<std::string>& defining() const { return defining_; }
  const Provenance& provenance() const { return provenance_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::vector<Point> all_points() const {
    std::vector<Point> out;
    for (const auto& [label, o] : entries_)
      if (const auto* p = std::get_if<Point>(&o)) out.push_back(*p);
    return out;
  }

  /// Diameter of the defining (input) points; all claim residuals are normalized by it.
  double defining_diameter() const {
    if (defining_.empty()) return diameter(all_points());
    return diameter(points(defining_));
  }

  /// Applies a similarity transform to every object.
  Configuration transformed(const Transform& t) const {
    Configuration out(provenance_);
    const Point origin = transform(Point{0.0, 0.0}, t);
    const double stretch = distance(transform(Point{1.0, 0.0}, t), origin);
    for (const auto& [label, o] : entries_) {
      Object mapped = std::visit(
          [&](const auto& v) -> Object {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Point>) {
              return transform(v, t);
            } else if constexpr (std::is_same_v<T, Circle>) {
              return Circle{transform(v.center, t), v.radius * stretch};
            } else {
              const Point p = v.foot({0.0, 0.0});
              return line_through(transform(p, t), transform(p + v.direction(), t));
            }
          },
          o);
      out.index_.emplace(label, out.entries_.size());
      out.entries_.emplace_back(label, mapped);
    }
    out.segments_ = segments_;
    out.defining_ = defining_;
    return out;
  }

 private:
  static void check_finite(Point p, const std::string& label) {
    if (!is_finite(p)) throw GeometryError(ErrorCode::NonFinite, label);
  }
  static void check_finite(const Line& l, const std::string& label) {
    if (!std::isfinite(l.a) || !std::isfinite(l.b) || !std::isfinite(l.c))
      throw GeometryError(ErrorCode::NonFinite, label);
  }
  static void check_finite(const Circle& c, const std::string& label) {
    if (!is_finite(c.center) || !std::isfinite(c.radius) || c.radius < 0.0)
      throw GeometryError(ErrorCode::NonFinite, label);
  }

  Provenance provenance_;
  std::vector<std::pair<std::string, Object>> entries_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::pair<std::string, std::string>> segments_;
  std::vector<std::string> defining_;
};

// ---------------------------------------------------------------------------
// Builders

namespace detail {

inline void require_convex(const std::array<Point, 4>& q, const ToleranceBudget& tol) {
  const double diam = diameter(q);
  int positive = 0, negative = 0;
  for (int i = 0; i < 4; ++i) {
    const double area = signed_area(q[i], q[(i + 1) % 4], q[(i + 2) % 4]);
    if (area > tol.abs_floor * diam * diam)
      ++positive;
    else if (area < -tol.abs_floor * diam * diam)
      ++negative;
  }
  if (positive != 4 && negative != 4)
    throw GeometryError(ErrorCode::NonConvexQuadrilateral, "quadrilateral is not strictly convex");
}

inline std::vector<double> flatten(std::initializer_list<Point> pts) {
  std::vector<double> out;
  for (Point p : pts) {
    out.push_back(p.x);
    out.push_back(p.y);
  }
  return out;
}

}  // namespace detail

/// Quadrilateral ABCD with isosceles right triangles erected inward on every side.
inline Configuration build_theorem1(Point a, Point b, Point c, Point d, const ToleranceBudget& tol = {}) {
  detail::require_convex({a, b, c, d}, tol);
  const Point inside = (a + b + c + d) / 4.0;
  Configuration cfg({"theorem1", detail::flatten({a, b, c, d})});
  cfg.add_defining("A", a);
  cfg.add_defining("B", b);
  cfg.add_defining("C", c);
  cfg.add_defining("D", d);
  cfg.add("O_ab", right_isosceles_apex(a, b, Orientation::Toward, inside, tol));
  cfg.add("O_bc", right_isosceles_apex(b, c, Orientation::Toward, inside, tol));
  cfg.add("O_cd", right_isosceles_apex(c, d, Orientation::Toward, inside, tol));
  cfg.add("O_da", right_isosceles_apex(d, a, Orientation::Toward, inside, tol));
  for (auto [u, v] : {std::pair{"A", "B"}, {"B", "C"}, {"C", "D"}, {"D", "A"}}) cfg.add_segment(u, v);
  for (auto [u, v] : {std::pair{"O_ab", "A"}, {"O_ab", "B"}, {"O_bc", "B"}, {"O_bc", "C"}, {"O_cd", "C"},
                      {"O_cd", "D"}, {"O_da", "D"}, {"O_da", "A"}, {"O_ab", "O_cd"}, {"O_bc", "O_da"}})
    cfg.add_segment(u, v);
  return cfg;
}

/// Quadrilateral ABCD with O_1..O_4 at the meets of internal bisectors of adjacent
/// corners (AB, BC, CD, DA).
inline Configuration build_bisector_variant(Point a, Point b, Point c, Point d, const ToleranceBudget& tol = {}) {
  const std::array<Point, 4> q{a, b, c, d};
  detail::require_convex(q, tol);
  std::array<Line, 4> bisectors;
  for (int i = 0; i < 4; ++i) bisectors[i] = angle_bisector(q[i], q[(i + 3) % 4], q[(i + 1) % 4], tol).line;
  Configuration cfg({"bisector_variant", detail::flatten({a, b, c, d})});
  cfg.add_defining("A", a);
  cfg.add_defining("B", b);
  cfg.add_defining("C", c);
  cfg.add_defining("D", d);
  const std::array<const char*, 4> names{"O_1", "O_2", "O_3", "O_4"};
  for (int i = 0; i < 4; ++i) cfg.add(names[i], intersect(bisectors[i], bisectors[(i + 1) % 4], tol).points.front());
  for (auto [u, v] : {std::pair{"A", "B"}, {"B", "C"}, {"C", "D"}, {"D", "A"}}) cfg.add_segment(u, v);
  for (auto [u, v] : {std::pair{"A", "O_1"}, {"B", "O_1"}, {"B", "O_2"}, {"C", "O_2"}, {"C", "O_3"},
                      {"D", "O_3"}, {"D", "O_4"}, {"A", "O_4"}})
    cfg.add_segment(u, v);
  return cfg;
}

/// Equilateral triangles A'BC, B'CA, C'AB erected toward the opposite vertex, their
/// centers O_a, O_b, O_c, and the Fermat points F1 (X13) and, when well conditioned, F2 (X14).
inline Configuration build_example1(Point a, Point b, Point c, const ToleranceBudget& tol = {}) {
  detail::require_triangle(a, b, c, tol);
  const Point ap = equilateral_apex(b, c, Orientation::Toward, a, tol);
  const Point bp = equilateral_apex(c, a, Orientation::Toward, b, tol);
  const Point cp = equilateral_apex(a, b, Orientation::Toward, c, tol);
  Configuration cfg({"example1", detail::flatten({a, b, c})});
  cfg.add_defining("A", a);
  cfg.add_defining("B", b);
  cfg.add_defining("C", c);
  cfg.add("A'", ap);
  cfg.add("B'", bp);
  cfg.add("C'", cp);
  cfg.add("O_a", (ap + b + c) / 3.0);
  cfg.add("O_b", (bp + c + a) / 3.0);
  cfg.add("O_c", (cp + a + b) / 3.0);
  cfg.add("F1", triangle_center(CenterKind::X13, a, b, c, tol));
  try {
    cfg.add("F2", triangle_center(CenterKind::X14, a, b, c, tol));
  } catch (const GeometryError& e) {
    if (e.code() != ErrorCode::IllConditioned) throw;
  }
  for (auto [u, v] : {std::pair{"A", "B"}, {"B", "C"}, {"C", "A"}, {"A'", "B"}, {"A'", "C"}, {"B'", "C"},
                      {"B'", "A"}, {"C'", "A"}, {"C'", "B"}, {"O_a", "O_b"}, {"O_b", "O_c"}, {"O_c", "O_a"}})
    cfg.add_segment(u, v);
  return cfg;
}

/// Relative side-length spread; zero exactly for an equilateral triangle.
inline double equilateral_defect(Point a, Point b, Point c) {
  const double s1 = distance(b, c), s2 = distance(c, a), s3 = distance(a, b);
  const double hi = std::max({s1, s2, s3});
  return (hi - std::min({s1, s2, s3})) / hi;
}

/// Minimum distance from equilateral accepted by build_example2.
constexpr double kExample2EquilateralFloor = 1e-6;

/// Fermat points F1, F2 of ABC and second Fermat points F_a, F_b, F_c of F1BC, F1AC, F1AB.
inline Configuration build_example2(Point a, Point b, Point c, const ToleranceBudget& tol = {}) {
  detail::require_triangle(a, b, c, tol);
  if (equilateral_defect(a, b, c) < kExample2EquilateralFloor)
    throw GeometryError(ErrorCode::IllConditioned, "triangle too close to equilateral for X14");
  const Point f1 = triangle_center(CenterKind::X13, a, b, c, tol);
  Configuration cfg({"example2", detail::flatten({a, b, c})});
  cfg.add_defining("A", a);
  cfg.add_defining("B", b);
  cfg.add_defining("C", c);
  cfg.add("F1", f1);
  cfg.add("F2", triangle_center(CenterKind::X14, a, b, c, tol));
  cfg.add("F_a", triangle_center(CenterKind::X14, f1, b, c, tol));
  cfg.add("F_b", triangle_center(CenterKind::X14, f1, a, c, tol));
  cfg.add("F_c", triangle_center(CenterKind::X14, f1, a, b, tol));
  for (auto [u, v] : {std::pair{"A", "B"}, {"B", "C"}, {"C", "A"}, {"F1", "A"}, {"F1", "B"}, {"F1", "C"}})
    cfg.add_segment(u, v);
  return cfg;
}

/// Second intersection of line (from, through) with `circle`: the meet farther from `from`,
/// never one within rel_tol * scale of it.
inline Point second_intersection(Point from, Point through, const Circle& circle, const ToleranceBudget& tol = {}) {
  const Intersection meet = intersect(line_through(from, through, tol), circle, tol);
  const double exclude = tol.rel_tol * std::max(circle.radius, 1e-300);
  std::optional<Point> best;
  for (Point p : meet.points) {
    if (distance(p, from) <= exclude) continue;
    if (!best || distance(p, from) > distance(*best, from)) best = p;
  }
  if (!best) throw GeometryError(ErrorCode::DegeneratePosition, "line does not meet the circle a second time");
  return *best;
}

/// Circumcevian triangle A'B'C' of P, nine-point centers N, N_a, N_b, N_c and their
/// reflections in the sides (primes) and in the side midpoints (double primes).
inline Configuration build_example3(Point a, Point b, Point c, Point p, const ToleranceBudget& tol = {}) {
  detail::require_triangle(a, b, c, tol);
  require_finite(p, "example3 point P");
  const Circle circ = circumcircle(a, b, c, tol);
  const double scale = diameter({a, b, c});
  for (Point v : {a, b, c})
    if (distance(p, v) <= tol.rel_tol * scale) throw GeometryError(ErrorCode::PointOnVertex, "P coincides with a vertex");
  if (!(distance(p, circ.center) < circ.radius - tol.rel_tol * scale))
    throw GeometryError(ErrorCode::PointOutsideCircumcircle, "P must lie strictly inside the circumcircle");

  const Point ap = second_intersection(a, p, circ, tol);
  const Point bp = second_intersection(b, p, circ, tol);
  const Point cp = second_intersection(c, p, circ, tol);
  const Point na = triangle_center(CenterKind::X5, ap, b, c, tol);
  const Point nb = triangle_center(CenterKind::X5, bp, a, c, tol);
  const Point nc = triangle_center(CenterKind::X5, cp, a, b, tol);

  Configuration cfg({"example3", detail::flatten({a, b, c, p})});
  cfg.add_defining("A", a);
  cfg.add_defining("B", b);
  cfg.add_defining("C", c);
  cfg.add_defining("P", p);
  cfg.add("A'", ap);
  cfg.add("B'", bp);
  cfg.add("C'", cp);
  cfg.add("N", triangle_center(CenterKind::X5, a, b, c, tol));
  cfg.add("N_a", na);
  cfg.add("N_b", nb);
  cfg.add("N_c", nc);
  cfg.add("N_a'", reflect(na, line_through(b, c, tol)));
  cfg.add("N_b'", reflect(nb, line_through(a, c, tol)));
  cfg.add("N_c'", reflect(nc, line_through(a, b, tol)));
  cfg.add("N_a''", reflect(na, midpoint(b, c)));
  cfg.add("N_b''", reflect(nb, midpoint(a, c)));
  cfg.add("N_c''", reflect(nc, midpoint(a, b)));
  cfg.add("circumcircle", circ);
  for (auto [u, v] : {std::pair{"A", "B"}, {"B", "C"}, {"C", "A"}, {"A", "A'"}, {"B", "B'"}, {"C", "C'"}})
    cfg.add_segment(u, v);
  return cfg;
}

// ---------------------------------------------------------------------------
// Base-shape catalog: near-equilateral shapes at unit side.

enum class ShapeKind {
  TriangleWithCenter,
  TriangleWithCenter2,
  TriangleWithCevians,
  TriangleWithMidpointTriangle,
  TriangulatedTriangle,
  TriangleWithIncircle,
  RegularHexagon,
  RegularHexagon2,
  HexagonalStar,
  Crown,
};

constexpr std::array<ShapeKind, 10> kAllShapes = {
    ShapeKind::TriangleWithCenter,   ShapeKind::TriangleWithCenter2, ShapeKind::TriangleWithCevians,
    ShapeKind::TriangleWithMidpointTriangle, ShapeKind::TriangulatedTriangle, ShapeKind::TriangleWithIncircle,
    ShapeKind::RegularHexagon,       ShapeKind::RegularHexagon2,     ShapeKind::HexagonalStar,
    ShapeKind::Crown};

constexpr std::string_view to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::TriangleWithCenter: return "triangle_with_center";
    case ShapeKind::TriangleWithCenter2: return "triangle_with_center_2";
    case ShapeKind::TriangleWithCevians: return "triangle_with_cevians";
    case ShapeKind::TriangleWithMidpointTriangle: return "triangle_with_midpoint_triangle";
    case ShapeKind::TriangulatedTriangle: return "triangulated_triangle";
    case ShapeKind::TriangleWithIncircle: return "triangle_with_incircle";
    case ShapeKind::RegularHexagon: return "regular_hexagon";
    case ShapeKind::RegularHexagon2: return "regular_hexagon_2";
    case ShapeKind::HexagonalStar: return "hexagonal_star";
    case ShapeKind::Crown: return "crown";
  }
  return "?";
}

inline std::optional<ShapeKind> shape_from_string(std::string_view s) {
  for (ShapeKind k : kAllShapes)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

/// Unit equilateral triangle: A=(0,0), B=(1,0), C=(1/2, sqrt(3)/2).
inline std::array<Point, 3> unit_equilateral() {
  return {Point{0.0, 0.0}, Point{1.0, 0.0}, Point{0.5, std::numbers::sqrt3 / 2.0}};
}

inline Configuration base_shape(ShapeKind kind) {
  const auto [a, b, c] = unit_equilateral();
  const Point o = (a + b + c) / 3.0;
  Configuration cfg({"base_shape:" + std::string(to_string(kind)), {}});
  const auto seg = [&cfg](std::initializer_list<std::pair<const char*, const char*>> list) {
    for (auto [u, v] : list) cfg.add_segment(u, v);
  };
  const auto triangle = [&] {
    cfg.add_defining("A", a);
    cfg.add_defining("B", b);
    cfg.add_defining("C", c);
  };
  // Hexagon vertices between the triangle vertices are the reflections of the center.
  const auto hexagon = [&] {
    cfg.add("H_ab", reflect(o, midpoint(a, b)));
    cfg.add("H_bc", reflect(o, midpoint(b, c)));
    cfg.add("H_ca", reflect(o, midpoint(c, a)));
  };
  const auto thirds = [&] {
    cfg.add("T_ab1", a + (b - a) / 3.0);
    cfg.add("T_ab2", a + 2.0 * (b - a) / 3.0);
    cfg.add("T_bc1", b + (c - b) / 3.0);
    cfg.add("T_bc2", b + 2.0 * (c - b) / 3.0);
    cfg.add("T_ca1", c + (a - c) / 3.0);
    cfg.add("T_ca2", c + 2.0 * (a - c) / 3.0);
  };
  const auto midpoints = [&] {
    cfg.add("M_a", midpoint(b, c));
    cfg.add("M_b", midpoint(c, a));
    cfg.add("M_c", midpoint(a, b));
  };

  switch (kind) {
    case ShapeKind::TriangleWithCenter:
      triangle();
      cfg.add("O", o);
      seg({{"A", "B"}, {"B", "C"}, {"C", "A"}});
      break;
    case ShapeKind::TriangleWithCenter2:
      triangle();
      cfg.add("O", o);
      seg({{"A", "B"}, {"B", "C"}, {"C", "A"}, {"O", "A"}, {"O", "B"}, {"O", "C"}});
      break;
    case ShapeKind::TriangleWithCevians:
      triangle();
      cfg.add("O", o);
      midpoints();
      seg({{"A", "B"}, {"B", "C"}, {"C", "A"}, {"A", "M_a"}, {"B", "M_b"}, {"C", "M_c"}});
      break;
    case ShapeKind::TriangleWithMidpointTriangle:
      triangle();
      cfg.add("O", o);
      midpoints();
      seg({{"A", "B"}, {"B", "C"}, {"C", "A"}, {"A", "M_a"}, {"B", "M_b"}, {"C", "M_c"}, {"M_a", "M_b"},
           {"M_b", "M_c"}, {"M_c", "M_a"}});
      break;
    case ShapeKind::TriangulatedTriangle:
      triangle();
      cfg.add("O", o);
      thirds();
      seg({{"A", "B"}, {"B", "C"}, {"C", "A"}, {"T_ab1", "T_ca2"}, {"T_ca2", "T_bc1"}, {"T_bc1", "T_ab2"},
           {"T_ab2", "T_ca1"}, {"T_ca1", "T_bc2"}, {"T_ab1", "T_bc2"}});
      break;
    case ShapeKind::TriangleWithIncircle:
      triangle();
      cfg.add("O", o);
      midpoints();
      cfg.add("incircle", Circle{o, std::numbers::sqrt3 / 6.0});
      seg({{"A", "B"}, {"B", "C"}, {"C", "A"}});
      break;
    case ShapeKind::RegularHexagon:
      triangle();
      hexagon();
      cfg.add("O", o);
      seg({{"A", "B"}, {"B", "C"}, {"C", "A"}, {"O", "A"}, {"O", "B"}, {"O", "C"}, {"A", "H_ab"}, {"H_ab", "B"},
           {"B", "H_bc"}, {"H_bc", "C"}, {"C", "H_ca"}, {"H_ca", "A"}});
      break;
    case ShapeKind::RegularHexagon2:
      triangle();
      hexagon();
      cfg.add("O", o);
      seg({{"A", "H_ab"}, {"H_ab", "B"}, {"B", "H_bc"}, {"H_bc", "C"}, {"C", "H_ca"}, {"H_ca", "A"},
           {"A", "H_bc"}, {"B", "H_ca"}, {"C", "H_ab"}});
      break;
    case ShapeKind::HexagonalStar:
      triangle();
      hexagon();
      thirds();
      seg({{"A", "B"}, {"B", "C"}, {"C", "A"}, {"H_ab", "H_bc"}, {"H_bc", "H_ca"}, {"H_ca", "H_ab"},
           {"A", "H_ab"}, {"H_ab", "B"}, {"B", "H_bc"}, {"H_bc", "C"}, {"C", "H_ca"}, {"H_ca", "A"}});
      break;
    case ShapeKind::Crown:
      triangle();
      cfg.add("H_bc", reflect(o, midpoint(b, c)));
      cfg.add("H_ca", reflect(o, midpoint(c, a)));
      cfg.add("O", o);
      seg({{"A", "B"}, {"B", "C"}, {"C", "A"}, {"A", "H_ca"}, {"B", "H_bc"}, {"H_ca", "B"}, {"A", "H_bc"}});
      break;
  }
  return cfg;
}

}  // namespace geodeform
