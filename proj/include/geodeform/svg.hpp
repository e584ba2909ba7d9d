#pragma once

// SVG 1.1 rendering of a Configuration at a fixed 100 px per model unit.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <utility>

#include "geodeform/configuration.hpp"

namespace geodeform {

constexpr double kPixelsPerUnit = 100.0;
constexpr double kPointRadiusPx = 2.0;
constexpr double kMinExtent = 1.0;  // model units, for degenerate bounding boxes

struct Box {
  double xmin, ymin, xmax, ymax;
};

namespace detail {

inline std::string fmt_px(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

// Clips an infinite line to the box (Liang-Barsky on a parametric form).
inline std::optional<std::pair<Point, Point>> clip(const Line& l, const Box& b) {
  const Point d = l.direction();
  const double n2 = dot(d, d);
  const Point p0 = (-l.c / n2) * l.normal();
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  const auto edge = [&](double p, double q) {
    if (p == 0.0) return q >= 0.0;
    const double t = q / p;
    if (p < 0.0)
      lo = std::max(lo, t);
    else
      hi = std::min(hi, t);
    return true;
  };
  if (!edge(-d.x, p0.x - b.xmin) || !edge(d.x, b.xmax - p0.x) || !edge(-d.y, p0.y - b.ymin) ||
      !edge(d.y, b.ymax - p0.y) || !(lo < hi))
    return std::nullopt;
  return std::pair{p0 + lo * d, p0 + hi * d};
}

}  // namespace detail

/// Bounding box of points and circles, padded by 5% of the extent on each side.
inline Box view_box(const Configuration& cfg) {
  Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
        -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  const auto grow = [&b](Point lo, Point hi) {
    b.xmin = std::min(b.xmin, lo.x);
    b.ymin = std::min(b.ymin, lo.y);
    b.xmax = std::max(b.xmax, hi.x);
    b.ymax = std::max(b.ymax, hi.y);
  };
  for (const auto& [label, obj] : cfg.entries()) {
    if (const auto* p = std::get_if<Point>(&obj)) grow(*p, *p);
    if (const auto* c = std::get_if<Circle>(&obj))
      grow(c->center - Point{c->radius, c->radius}, c->center + Point{c->radius, c->radius});
  }
  if (!(b.xmin <= b.xmax)) b = {-0.5 * kMinExtent, -0.5 * kMinExtent, 0.5 * kMinExtent, 0.5 * kMinExtent};
  for (double* lo : {&b.xmin, &b.ymin}) {
    double* hi = lo == &b.xmin ? &b.xmax : &b.ymax;
    if (*hi - *lo < 1e-12 * std::max(1.0, std::abs(*lo))) {
      const double mid = 0.5 * (*lo + *hi);
      *lo = mid - 0.5 * kMinExtent;
      *hi = mid + 0.5 * kMinExtent;
    }
    const double pad = 0.05 * (*hi - *lo);
    *lo -= pad;
    *hi += pad;
  }
  return b;
}

/// Byte-deterministic SVG text; throws InvalidArgument on an empty configuration.
inline std::string render_svg(const Configuration& cfg) {
  if (cfg.empty()) throw GeometryError(ErrorCode::InvalidArgument, "cannot render an empty configuration");
  const Box b = view_box(cfg);
  const auto X = [](double x) { return detail::fmt_px(kPixelsPerUnit * x); };
  const auto Y = [](double y) { return detail::fmt_px(-kPixelsPerUnit * y); };
  const double w = kPixelsPerUnit * (b.xmax - b.xmin);
  const double h = kPixelsPerUnit * (b.ymax - b.ymin);

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + detail::fmt_px(w) + "\" height=\"" +
       detail::fmt_px(h) + "\" viewBox=\"" + X(b.xmin) + " " + Y(b.ymax) + " " + detail::fmt_px(w) + " " +
       detail::fmt_px(h) + "\">\n";
  s += "<g fill=\"none\" stroke=\"black\" stroke-width=\"1\">\n";
  for (const auto& [from, to] : cfg.segments()) {
    const Point p = cfg.point(from), q = cfg.point(to);
    s += "<line class=\"segment\" x1=\"" + X(p.x) + "\" y1=\"" + Y(p.y) + "\" x2=\"" + X(q.x) + "\" y2=\"" + Y(q.y) +
         "\"/>\n";
  }
  for (const auto& [label, obj] : cfg.entries()) {
    if (const auto* c = std::get_if<Circle>(&obj)) {
      s += "<circle class=\"circle\" id=\"" + detail::xml_escape(label) + "\" cx=\"" + X(c->center.x) + "\" cy=\"" +
           Y(c->center.y) + "\" r=\"" + detail::fmt_px(kPixelsPerUnit * c->radius) + "\"/>\n";
    } else if (const auto* l = std::get_if<Line>(&obj)) {
      if (auto seg = detail::clip(*l, b))
        s += "<line class=\"line\" id=\"" + detail::xml_escape(label) + "\" x1=\"" + X(seg->first.x) + "\" y1=\"" +
             Y(seg->first.y) + "\" x2=\"" + X(seg->second.x) + "\" y2=\"" + Y(seg->second.y) + "\"/>\n";
    }
  }
  s += "</g>\n<g fill=\"black\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (const auto& [label, obj] : cfg.entries()) {
    const auto* p = std::get_if<Point>(&obj);
    if (!p) continue;
    s += "<circle class=\"point\" cx=\"" + X(p->x) + "\" cy=\"" + Y(p->y) + "\" r=\"" + detail::fmt_px(kPointRadiusPx) +
         "\"/>\n";
    s += "<text x=\"" + detail::fmt_px(kPixelsPerUnit * p->x + 3.0) + "\" y=\"" +
         detail::fmt_px(-kPixelsPerUnit * p->y - 3.0) + "\">" + detail::xml_escape(label) + "</text>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

inline void write_svg(const Configuration& cfg, const std::string& path) {
  const std::string text = render_svg(cfg);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace geodeform
