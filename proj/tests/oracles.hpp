#pragma once

// Independent reference computations. Nothing here calls into the library's
// construction code; only the Point type is shared.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "geodeform/geometry.hpp"

namespace oracle {

using geodeform::Point;

// Gaussian elimination with partial pivoting; returns the determinant.
template <std::size_t N>
double determinant(std::array<std::array<double, N>, N> m) {
  double det = 1.0;
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (m[piv][col] == 0.0) return 0.0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < N; ++r) {
      const double f = m[r][col] / m[col][col];
      for (std::size_t k = col; k < N; ++k) m[r][k] -= f * m[col][k];
    }
  }
  return det;
}

template <std::size_t N>
std::array<double, N> solve(std::array<std::array<double, N>, N> m, std::array<double, N> rhs) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = col + 1; r < N; ++r) {
      const double f = m[r][col] / m[col][col];
      for (std::size_t k = col; k < N; ++k) m[r][k] -= f * m[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  std::array<double, N> x{};
  for (std::size_t i = N; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t k = i + 1; k < N; ++k) s -= m[i][k] * x[k];
    x[i] = s / m[i][i];
  }
  return x;
}

struct FitCircle {
  Point center;
  double radius;
};

// Algebraic (Kasa) least-squares circle: minimize sum (x^2+y^2 + D x + E y + F)^2.
inline FitCircle ls_circle(const std::vector<Point>& pts) {
  std::array<std::array<double, 3>, 3> m{};
  std::array<double, 3> rhs{};
  for (Point p : pts) {
    const std::array<double, 3> row{p.x, p.y, 1.0};
    const double z = -(p.x * p.x + p.y * p.y);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m[i][j] += row[i] * row[j];
      rhs[i] += row[i] * z;
    }
  }
  const auto s = solve(m, rhs);
  const Point c{-s[0] / 2.0, -s[1] / 2.0};
  return {c, std::sqrt(c.x * c.x + c.y * c.y - s[2])};
}

// Sign-sensitive incircle determinant; zero for concyclic points.
inline double incircle(Point a, Point b, Point c, Point d) {
  std::array<std::array<double, 4>, 4> m{};
  for (int i = 0; const Point p : {a, b, c, d}) {
    m[i] = {p.x, p.y, p.x * p.x + p.y * p.y, 1.0};
    ++i;
  }
  return determinant(m);
}

// 6x6 conic-membership determinant of rows [x^2, xy, y^2, x, y, 1].
inline double conic_det(const std::array<Point, 6>& pts) {
  std::array<std::array<double, 6>, 6> m{};
  for (int i = 0; i < 6; ++i) {
    const Point p = pts[i];
    m[i] = {p.x * p.x, p.x * p.y, p.y * p.y, p.x, p.y, 1.0};
  }
  return determinant(m);
}

inline double dist(Point p, Point q) { return std::hypot(p.x - q.x, p.y - q.y); }

// Fermat point by Weiszfeld iteration from the vertex average weighted by 1/3 each,
// with a fixed large iteration count and no early exit.
inline Point weiszfeld(Point a, Point b, Point c, int iterations = 20000) {
  Point x{(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
  for (int it = 0; it < iterations; ++it) {
    double wx = 0, wy = 0, w = 0;
    for (Point p : {a, b, c}) {
      const double d = dist(x, p);
      if (d < 1e-300) return p;
      wx += p.x / d;
      wy += p.y / d;
      w += 1.0 / d;
    }
    x = {wx / w, wy / w};
  }
  return x;
}

// Barycentric formulas for the isogonic centers (X13 with +, X14 with -).
inline Point isogonic_barycentric(Point A, Point B, Point C, double sign) {
  const double a2 = std::pow(dist(B, C), 2), b2 = std::pow(dist(C, A), 2), c2 = std::pow(dist(A, B), 2);
  const double area = std::abs((B.x - A.x) * (C.y - A.y) - (C.x - A.x) * (B.y - A.y)) / 2.0;
  const double k = sign * 4.0 * std::numbers::sqrt3 * area;
  const double wa = a2 * a2 - 2.0 * (b2 - c2) * (b2 - c2) + a2 * (b2 + c2 + k);
  const double wb = b2 * b2 - 2.0 * (c2 - a2) * (c2 - a2) + b2 * (c2 + a2 + k);
  const double wc = c2 * c2 - 2.0 * (a2 - b2) * (a2 - b2) + c2 * (a2 + b2 + k);
  const double s = wa + wb + wc;
  return {(wa * A.x + wb * B.x + wc * C.x) / s, (wa * A.y + wb * B.y + wc * C.y) / s};
}

// Orthocenter from two altitude equations solved directly.
inline Point orthocenter(Point a, Point b, Point c) {
  // (p - a) . (c - b) = 0 ; (p - b) . (c - a) = 0
  const std::array<std::array<double, 2>, 2> m{{{c.x - b.x, c.y - b.y}, {c.x - a.x, c.y - a.y}}};
  const std::array<double, 2> rhs{a.x * (c.x - b.x) + a.y * (c.y - b.y), b.x * (c.x - a.x) + b.y * (c.y - a.y)};
  const auto s = solve(m, rhs);
  return {s[0], s[1]};
}

// Signed distance to the line through p, q.
inline double line_distance(Point x, Point p, Point q) {
  return ((q.x - p.x) * (x.y - p.y) - (q.y - p.y) * (x.x - p.x)) / dist(p, q);
}

struct Similarity {
  double angle, k, tx, ty;
  Point operator()(Point p) const {
    const double c = std::cos(angle), s = std::sin(angle);
    return {k * (c * p.x - s * p.y) + tx, k * (s * p.x + c * p.y) + ty};
  }
};

inline Similarity random_isometry(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi), off(-10.0, 10.0);
  return {ang(rng), 1.0, off(rng), off(rng)};
}

inline Point random_point(std::mt19937_64& rng, double lo = -5.0, double hi = 5.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(rng), u(rng)};
}

inline double max_angle_deg(Point a, Point b, Point c) {
  const std::array<Point, 3> v{a, b, c};
  double best = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Point p = v[i], q = v[(i + 1) % 3], r = v[(i + 2) % 3];
    const double ux = q.x - p.x, uy = q.y - p.y, wx = r.x - p.x, wy = r.y - p.y;
    const double cosv = (ux * wx + uy * wy) / (std::hypot(ux, uy) * std::hypot(wx, wy));
    best = std::max(best, std::acos(std::clamp(cosv, -1.0, 1.0)) * 180.0 / std::numbers::pi);
  }
  return best;
}

}  // namespace oracle
