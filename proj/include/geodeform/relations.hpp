#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "geodeform/geometry.hpp"

// Relation detectors. Every residual is dimensionless: lengths are divided by a reference
// scale, which defaults to the diameter of the inputs and can be overridden by the caller
// (the deformation engine passes the diameter of the configuration's defining points).

namespace geodeform {

enum class RelationKind {
  Collinear,
  Concyclic,
  ConcurrentLines,
  ConcurrentCircles,
  Coaxial,
  Perspective,
  OnConic,
  Perpendicular,
  EqualLength,
  CommonMidpoint,
};

constexpr std::string_view to_string(RelationKind k) {
  switch (k) {
    case RelationKind::Collinear: return "collinear";
    case RelationKind::Concyclic: return "concyclic";
    case RelationKind::ConcurrentLines: return "concurrent";
    case RelationKind::ConcurrentCircles: return "concurrent_circles";
    case RelationKind::Coaxial: return "coaxial";
    case RelationKind::Perspective: return "perspective";
    case RelationKind::OnConic: return "on_conic";
    case RelationKind::Perpendicular: return "perpendicular";
    case RelationKind::EqualLength: return "equal_length";
    case RelationKind::CommonMidpoint: return "common_midpoint";
  }
  return "?";
}

inline std::optional<RelationKind> relation_from_string(std::string_view s) {
  for (auto k : {RelationKind::Collinear, RelationKind::Concyclic, RelationKind::ConcurrentLines,
                 RelationKind::ConcurrentCircles, RelationKind::Coaxial, RelationKind::Perspective,
                 RelationKind::OnConic, RelationKind::Perpendicular, RelationKind::EqualLength,
                 RelationKind::CommonMidpoint})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

/// A*x^2 + B*xy + C*y^2 + D*x + E*y + F = 0, coefficient vector of unit norm.
struct Conic {
  std::array<double, 6> coef{};

  double operator()(Point p) const {
    const auto& [a, b, c, d, e, f] = coef;
    return a * p.x * p.x + b * p.x * p.y + c * p.y * p.y + d * p.x + e * p.y + f;
  }
  Point gradient(Point p) const {
    const auto& [a, b, c, d, e, f] = coef;
    return {2.0 * a * p.x + b * p.y + d, b * p.x + 2.0 * c * p.y + e};
  }
  friend bool operator==(const Conic&, const Conic&) = default;
};

enum class VerdictFlag {
  Coincident,            // all inputs coincide; relation holds trivially
  CollinearWitness,      // concyclic check degenerated to a line
  AtInfinity,            // perspective connectors parallel: perspector at infinity
  IdenticalVertices,     // perspective with coincident corresponding vertices
  ParallelLines,         // concurrency impossible: a pair of lines is parallel
  NoPairwiseIntersection,
  EvaluationError,       // the configuration could not be built
};

constexpr std::string_view to_string(VerdictFlag f) {
  switch (f) {
    case VerdictFlag::Coincident: return "coincident";
    case VerdictFlag::CollinearWitness: return "collinear_witness";
    case VerdictFlag::AtInfinity: return "at_infinity";
    case VerdictFlag::IdenticalVertices: return "identical_vertices";
    case VerdictFlag::ParallelLines: return "parallel_lines";
    case VerdictFlag::NoPairwiseIntersection: return "no_pairwise_intersection";
    case VerdictFlag::EvaluationError: return "evaluation_error";
  }
  return "?";
}

using Witness = std::variant<std::monostate, Point, Line, Circle, Conic>;

struct RelationVerdict {
  RelationKind kind = RelationKind::Collinear;
  double residual = 0.0;
  bool pass = false;
  Witness witness;
  std::vector<VerdictFlag> flags;
  std::string error;

  bool has(VerdictFlag f) const {
    for (auto g : flags)
      if (g == f) return true;
    return false;
  }
};

constexpr double kInfiniteResidual = std::numeric_limits<double>::infinity();

namespace detail {

inline RelationVerdict verdict(RelationKind kind, double residual, const ToleranceBudget& tol, Witness w = {},
                               std::vector<VerdictFlag> flags = {}) {
  RelationVerdict v{kind, residual, residual <= tol.rel_tol, std::move(w), std::move(flags), {}};
  return v;
}

inline RelationVerdict failed(RelationKind kind, VerdictFlag flag) {
  return RelationVerdict{kind, kInfiniteResidual, false, {}, {flag}, {}};
}

inline double max_magnitude(std::span<const Point> pts) {
  double m = 1.0;
  for (Point p : pts) m = std::max(m, norm(p));
  return m;
}

// Inputs closer together than this count as one point.
inline double coincidence_floor(std::span<const Point> pts, double scale, const ToleranceBudget& tol) {
  return tol.abs_floor * (scale > 0.0 ? scale : max_magnitude(pts));
}

inline double circle_scale(std::span<const Circle> circles) {
  std::vector<Point> centers;
  double r = 0.0;
  for (const auto& c : circles) {
    centers.push_back(c.center);
    r = std::max(r, c.radius);
  }
  return std::max(diameter(centers), 2.0 * r);
}

inline Line total_least_squares_line(std::span<const Point> pts) {
  Point m{};
  for (Point p : pts) m = m + p;
  m = m / static_cast<double>(pts.size());
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (Point p : pts) {
    const Point d = p - m;
    sxx += d.x * d.x;
    sxy += d.x * d.y;
    syy += d.y * d.y;
  }
  const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  return Line::through_point(m, {std::cos(theta), std::sin(theta)});
}

}  // namespace detail

inline RelationVerdict check_collinear(std::span<const Point> pts, const ToleranceBudget& tol = {},
                                       double scale = 0.0) {
  if (pts.size() < 3) throw GeometryError(ErrorCode::TooFewPoints, "collinear needs at least 3 points");
  const double diam = diameter(pts);
  if (diam <= detail::coincidence_floor(pts, scale, tol))
    return detail::verdict(RelationKind::Collinear, 0.0, tol, {}, {VerdictFlag::Coincident});
  const Line line = detail::total_least_squares_line(pts);
  double worst = 0.0;
  for (Point p : pts) worst = std::max(worst, std::abs(line.signed_distance(p)));
  return detail::verdict(RelationKind::Collinear, worst / (scale > 0.0 ? scale : diam), tol, line);
}

/// Concyclicity against the circumcircle of the triple with the largest |signed area|.
inline RelationVerdict check_concyclic(std::span<const Point> pts, const ToleranceBudget& tol = {},
                                       double scale = 0.0) {
  if (pts.size() < 4) throw GeometryError(ErrorCode::TooFewPoints, "concyclic needs at least 4 points");
  const double diam = diameter(pts);
  if (diam <= detail::coincidence_floor(pts, scale, tol))
    return detail::verdict(RelationKind::Concyclic, 0.0, tol, {}, {VerdictFlag::Coincident});

  std::array<std::size_t, 3> best{0, 1, 2};
  double best_area = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        const double area = std::abs(signed_area(pts[i], pts[j], pts[k]));
        if (area > best_area) {
          best_area = area;
          best = {i, j, k};
        }
      }
  if (!(best_area > tol.abs_floor * diam * diam)) {
    RelationVerdict v = check_collinear(pts, tol, scale);
    v.kind = RelationKind::Concyclic;
    v.flags.push_back(VerdictFlag::CollinearWitness);
    return v;
  }
  const Circle circle = circumcircle(pts[best[0]], pts[best[1]], pts[best[2]], tol);
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i == best[0] || i == best[1] || i == best[2]) continue;
    worst = std::max(worst, std::abs(distance(pts[i], circle.center) - circle.radius));
  }
  return detail::verdict(RelationKind::Concyclic, worst / (scale > 0.0 ? scale : diam), tol, circle);
}

inline RelationVerdict check_concurrent_lines(std::span<const Line> lines, const ToleranceBudget& tol = {},
                                              double scale = 0.0) {
  if (lines.size() < 3) throw GeometryError(ErrorCode::TooFewLines, "concurrency needs at least 3 lines");
  std::vector<Point> cloud;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (!(std::abs(cross(lines[i].normal(), lines[j].normal())) > tol.abs_floor))
        return detail::failed(RelationKind::ConcurrentLines, VerdictFlag::ParallelLines);
      cloud.push_back(intersect(lines[i], lines[j], tol).points.front());
    }
  const Point w = least_squares_point(lines, tol);
  double worst = 0.0;
  for (const Line& l : lines) worst = std::max(worst, std::abs(l.signed_distance(w)));
  const double ref = scale > 0.0 ? scale : std::max(1.0, diameter(cloud));
  return detail::verdict(RelationKind::ConcurrentLines, worst / ref, tol, w);
}

inline RelationVerdict check_concurrent_circles(std::span<const Circle> circles, const ToleranceBudget& tol = {},
                                                double scale = 0.0) {
  if (circles.size() < 2) throw GeometryError(ErrorCode::TooFewCircles, "concurrency needs at least 2 circles");
  const Intersection meet = intersect(circles[0], circles[1], tol);
  if (meet.points.empty()) return detail::failed(RelationKind::ConcurrentCircles, VerdictFlag::NoPairwiseIntersection);
  const double ref = scale > 0.0 ? scale : detail::circle_scale(circles);
  double best = kInfiniteResidual;
  Point witness{};
  for (Point p : meet.points) {
    double worst = 0.0;
    for (const Circle& c : circles) worst = std::max(worst, std::abs(c.power(p)));
    if (worst < best) {
      best = worst;
      witness = p;
    }
  }
  return detail::verdict(RelationKind::ConcurrentCircles, best / (ref * ref), tol, witness);
}

/// Coaxiality: every pairwise radical axis coincides with the axis of the first pair.
inline RelationVerdict check_coaxial(std::span<const Circle> circles, const ToleranceBudget& tol = {},
                                     double scale = 0.0) {
  if (circles.size() < 3) throw GeometryError(ErrorCode::TooFewCircles, "coaxial needs at least 3 circles");
  const Line axis = radical_axis(circles[0], circles[1], tol);
  const double ref = scale > 0.0 ? scale : detail::circle_scale(circles);
  Point anchor{};
  for (const auto& c : circles) anchor = anchor + c.center;
  anchor = anchor / static_cast<double>(circles.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < circles.size(); ++i)
    for (std::size_t j = i + 1; j < circles.size(); ++j) {
      const Line l = radical_axis(circles[i], circles[j], tol);
      const double angle = std::abs(cross(l.normal(), axis.normal()));
      const double offset = std::abs(axis.signed_distance(l.foot(anchor))) / ref;
      worst = std::max(worst, angle + offset);
    }
  return detail::verdict(RelationKind::Coaxial, worst, tol, axis);
}

using Triangle = std::array<Point, 3>;

inline RelationVerdict check_perspective(const Triangle& t1, const Triangle& t2, const ToleranceBudget& tol = {},
                                         double scale = 0.0) {
  const std::array<Point, 6> all{t1[0], t1[1], t1[2], t2[0], t2[1], t2[2]};
  const double ref = scale > 0.0 ? scale : diameter(all);
  const double floor = detail::coincidence_floor(all, scale, tol);

  std::vector<Line> connectors;
  std::vector<Point> shared;
  for (int i = 0; i < 3; ++i) {
    if (distance(t1[i], t2[i]) <= floor)
      shared.push_back(t1[i]);
    else
      connectors.push_back(line_through(t1[i], t2[i], tol));
  }
  if (!shared.empty()) {
    Witness w = shared.front();
    if (connectors.size() == 2 && std::abs(cross(connectors[0].normal(), connectors[1].normal())) > tol.abs_floor)
      w = intersect(connectors[0], connectors[1], tol).points.front();
    return detail::verdict(RelationKind::Perspective, 0.0, tol, w, {VerdictFlag::IdenticalVertices});
  }
  const auto parallel = [&tol](const Line& l, const Line& m) {
    return !(std::abs(cross(l.normal(), m.normal())) > tol.abs_floor);
  };
  if (parallel(connectors[0], connectors[1]) && parallel(connectors[1], connectors[2]) &&
      parallel(connectors[0], connectors[2]))
    return detail::verdict(RelationKind::Perspective, 0.0, tol, {}, {VerdictFlag::AtInfinity});
  RelationVerdict v = check_concurrent_lines(connectors, tol, ref);
  v.kind = RelationKind::Perspective;
  return v;
}

/// Conic through five points via the null space of the 5x6 design matrix.
inline Conic fit_conic(std::span<const Point> pts, const ToleranceBudget& tol = {}) {
  if (pts.size() != 5) throw GeometryError(ErrorCode::InvalidArgument, "fit_conic needs exactly 5 points");
  Point m{};
  for (Point p : pts) m = m + p;
  m = m / 5.0;
  const double s = 0.5 * diameter(pts);
  if (!(s > 0.0)) throw GeometryError(ErrorCode::DegeneratePosition, "conic points coincide");

  Eigen::Matrix<double, 5, 6> design;
  for (int i = 0; i < 5; ++i) {
    const Point q = (pts[i] - m) / s;
    design.row(i) << q.x * q.x, q.x * q.y, q.y * q.y, q.x, q.y, 1.0;
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 5, 6>> svd(design, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(4) > tol.rel_tol * sv(0)))
    throw GeometryError(ErrorCode::DegeneratePosition, "five points do not determine a unique conic");
  const Eigen::Matrix<double, 6, 1> n = svd.matrixV().col(5);

  // Undo the normalization x' = (x - m) / s, scaled through by s^2.
  const double a = n(0), b = n(1), c = n(2), d = n(3) * s, e = n(4) * s, f = n(5) * s * s;
  std::array<double, 6> k{a,
                          b,
                          c,
                          -2.0 * a * m.x - b * m.y + d,
                          -b * m.x - 2.0 * c * m.y + e,
                          a * m.x * m.x + b * m.x * m.y + c * m.y * m.y - d * m.x - e * m.y + f};
  double len = 0.0;
  for (double v : k) len += v * v;
  len = std::sqrt(len);
  double sign = 1.0;
  for (double v : k)
    if (std::abs(v) > 1e-12 * len) {
      sign = v > 0.0 ? 1.0 : -1.0;
      break;
    }
  for (double& v : k) v *= sign / len;
  return Conic{k};
}

/// First-order geometric distance of p from the conic, divided by `scale`.
inline RelationVerdict check_on_conic(const Conic& conic, Point p, const ToleranceBudget& tol = {},
                                      double scale = 1.0) {
  const double value = std::abs(conic(p));
  const double grad = norm(conic.gradient(p));
  double residual;
  if (grad > tol.abs_floor)
    residual = value / (grad * scale);
  else
    residual = value <= tol.abs_floor ? 0.0 : kInfiniteResidual;
  return detail::verdict(RelationKind::OnConic, residual, tol, conic);
}

/// Fits the first five points and checks every remaining point.
inline RelationVerdict check_conic(std::span<const Point> pts, const ToleranceBudget& tol = {},
                                   double scale = 0.0) {
  if (pts.size() < 6) throw GeometryError(ErrorCode::TooFewPoints, "on_conic needs at least 6 points");
  const double ref = scale > 0.0 ? scale : diameter(pts);
  if (diameter(pts) <= detail::coincidence_floor(pts, scale, tol))
    return detail::verdict(RelationKind::OnConic, 0.0, tol, {}, {VerdictFlag::Coincident});
  const Conic conic = fit_conic(pts.first(5), tol);
  double worst = 0.0;
  for (Point p : pts.subspan(5)) worst = std::max(worst, check_on_conic(conic, p, tol, ref).residual);
  return detail::verdict(RelationKind::OnConic, worst, tol, conic);
}

namespace detail {

struct SegmentPair {
  Point u, v;
  double lu, lv, ref;
  bool coincident;
};

inline SegmentPair segment_pair(Point p1, Point p2, Point q1, Point q2, double scale, const ToleranceBudget& tol) {
  const std::array<Point, 4> all{p1, p2, q1, q2};
  const double floor = coincidence_floor(all, scale, tol);
  SegmentPair s{p2 - p1, q2 - q1, distance(p1, p2), distance(q1, q2), scale > 0.0 ? scale : diameter(all), false};
  const bool zu = s.lu <= floor;
  const bool zv = s.lv <= floor;
  if (zu && zv)
    s.coincident = true;
  else if (zu || zv)
    throw GeometryError(ErrorCode::CoincidentPoints, "segment endpoints coincide");
  return s;
}

}  // namespace detail

inline RelationVerdict check_perpendicular(Point p1, Point p2, Point q1, Point q2, const ToleranceBudget& tol = {},
                                           double scale = 0.0) {
  const auto s = detail::segment_pair(p1, p2, q1, q2, scale, tol);
  if (s.coincident) return detail::verdict(RelationKind::Perpendicular, 0.0, tol, {}, {VerdictFlag::Coincident});
  return detail::verdict(RelationKind::Perpendicular, std::abs(dot(s.u, s.v)) / (s.lu * s.lv), tol);
}

inline RelationVerdict check_equal_length(Point p1, Point p2, Point q1, Point q2, const ToleranceBudget& tol = {},
                                          double scale = 0.0) {
  const auto s = detail::segment_pair(p1, p2, q1, q2, scale, tol);
  if (s.coincident) return detail::verdict(RelationKind::EqualLength, 0.0, tol, {}, {VerdictFlag::Coincident});
  return detail::verdict(RelationKind::EqualLength, std::abs(s.lu - s.lv) / s.ref, tol);
}

/// Perpendicularity and length equality of segments p1p2 and q1q2.
inline std::pair<RelationVerdict, RelationVerdict> check_perp_and_equal(Point p1, Point p2, Point q1, Point q2,
                                                                        const ToleranceBudget& tol = {},
                                                                        double scale = 0.0) {
  return {check_perpendicular(p1, p2, q1, q2, tol, scale), check_equal_length(p1, p2, q1, q2, tol, scale)};
}

/// Segments p1p2 and q1q2 share their midpoint.
inline RelationVerdict check_common_midpoint(Point p1, Point p2, Point q1, Point q2, const ToleranceBudget& tol = {},
                                             double scale = 0.0) {
  const std::array<Point, 4> all{p1, p2, q1, q2};
  const double diam = diameter(all);
  if (diam <= detail::coincidence_floor(all, scale, tol))
    return detail::verdict(RelationKind::CommonMidpoint, 0.0, tol, {}, {VerdictFlag::Coincident});
  const double gap = distance(midpoint(p1, p2), midpoint(q1, q2));
  return detail::verdict(RelationKind::CommonMidpoint, gap / (scale > 0.0 ? scale : diam), tol,
                         midpoint(p1, p2));
}

struct Arity {
  std::size_t min;
  std::size_t group;  // labels must come in multiples of this
  std::size_t max;    // 0 = unbounded
};

/// Label-count contract when a relation is expressed over a flat list of points.
constexpr Arity arity(RelationKind k) {
  switch (k) {
    case RelationKind::Collinear: return {3, 1, 0};
    case RelationKind::Concyclic: return {4, 1, 0};
    case RelationKind::ConcurrentLines: return {6, 2, 0};
    case RelationKind::ConcurrentCircles: return {6, 3, 0};
    case RelationKind::Coaxial: return {9, 3, 0};
    case RelationKind::Perspective: return {6, 6, 6};
    case RelationKind::OnConic: return {6, 1, 0};
    case RelationKind::Perpendicular:
    case RelationKind::EqualLength:
    case RelationKind::CommonMidpoint: return {4, 4, 4};
  }
  return {0, 1, 0};
}

inline bool arity_ok(RelationKind k, std::size_t n) {
  const Arity a = arity(k);
  return n >= a.min && n % a.group == 0 && (a.max == 0 || n <= a.max);
}

/// Evaluates a relation over points: consecutive pairs define lines, consecutive triples
/// define circles (through the three points), perspective takes two point triples.
inline RelationVerdict check_relation(RelationKind kind, std::span<const Point> pts, const ToleranceBudget& tol = {},
                                      double scale = 0.0) {
  if (!arity_ok(kind, pts.size()))
    throw GeometryError(ErrorCode::InvalidArgument, std::string("wrong number of points for ") +
                                                        std::string(to_string(kind)));
  switch (kind) {
    case RelationKind::Collinear: return check_collinear(pts, tol, scale);
    case RelationKind::Concyclic: return check_concyclic(pts, tol, scale);
    case RelationKind::ConcurrentLines: {
      std::vector<Line> lines;
      for (std::size_t i = 0; i < pts.size(); i += 2) lines.push_back(line_through(pts[i], pts[i + 1], tol));
      return check_concurrent_lines(lines, tol, scale);
    }
    case RelationKind::ConcurrentCircles:
    case RelationKind::Coaxial: {
      std::vector<Circle> circles;
      for (std::size_t i = 0; i < pts.size(); i += 3)
        circles.push_back(circumcircle(pts[i], pts[i + 1], pts[i + 2], tol));
      return kind == RelationKind::Coaxial ? check_coaxial(circles, tol, scale)
                                           : check_concurrent_circles(circles, tol, scale);
    }
    case RelationKind::Perspective:
      return check_perspective({pts[0], pts[1], pts[2]}, {pts[3], pts[4], pts[5]}, tol, scale);
    case RelationKind::OnConic: return check_conic(pts, tol, scale);
    case RelationKind::Perpendicular: return check_perpendicular(pts[0], pts[1], pts[2], pts[3], tol, scale);
    case RelationKind::EqualLength: return check_equal_length(pts[0], pts[1], pts[2], pts[3], tol, scale);
    case RelationKind::CommonMidpoint: return check_common_midpoint(pts[0], pts[1], pts[2], pts[3], tol, scale);
  }
  throw GeometryError(ErrorCode::InvalidArgument, "unknown relation");
}

}  // namespace geodeform
