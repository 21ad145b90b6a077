#include "skeltree/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace skeltree {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void SvgCanvas::add_polygon(const Polygon& p, const SvgStyle& style) {
  shapes_.push_back({Shape::Kind::Path, p.pts, 0, true, style});
}

void SvgCanvas::add_polyline(const std::vector<Vec2>& pts, const SvgStyle& style) {
  shapes_.push_back({Shape::Kind::Path, pts, 0, false, style});
}

void SvgCanvas::add_segment(Vec2 a, Vec2 b, const SvgStyle& style) {
  shapes_.push_back({Shape::Kind::Path, {a, b}, 0, false, style});
}

void SvgCanvas::add_circle(Vec2 center, double radius, const SvgStyle& style) {
  shapes_.push_back({Shape::Kind::Circle, {center}, radius, false, style});
}

void SvgCanvas::add_dot(Vec2 at, double radius, const std::string& color) {
  SvgStyle s;
  s.stroke = "none";
  s.fill = color;
  shapes_.push_back({Shape::Kind::Circle, {at}, radius, false, s});
}

std::string SvgCanvas::render(double pixel_width) const {
  double lox = std::numeric_limits<double>::infinity(), loy = lox;
  double hix = -lox, hiy = -lox;
  for (const Shape& s : shapes_) {
    for (const Vec2& v : s.pts) {
      const double r = s.kind == Shape::Kind::Circle ? s.radius : 0.0;
      lox = std::min(lox, v.x - r);
      loy = std::min(loy, v.y - r);
      hix = std::max(hix, v.x + r);
      hiy = std::max(hiy, v.y + r);
    }
  }
  if (shapes_.empty()) {
    lox = loy = 0;
    hix = hiy = 1;
  }
  const double w = std::max(hix - lox, 1e-9), h = std::max(hiy - loy, 1e-9);
  const double pad = 0.05 * std::max(w, h);
  const double scale = pixel_width / (w + 2 * pad);
  // Model y points up; SVG y points down.
  auto px = [&](double x) { return (x - lox + pad) * scale; };
  auto py = [&](double y) { return (hiy + pad - y) * scale; };

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    num(pixel_width) + "\" height=\"" + num((h + 2 * pad) * scale) +
                    "\">\n";
  for (const Shape& s : shapes_) {
    std::string attrs = " stroke=\"" + s.style.stroke + "\" stroke-width=\"" +
                        num(s.style.width) + "\" fill=\"" + s.style.fill + "\"";
    if (s.style.dashed) attrs += " stroke-dasharray=\"4 3\"";
    if (s.kind == Shape::Kind::Circle) {
      out += "  <circle cx=\"" + num(px(s.pts[0].x)) + "\" cy=\"" + num(py(s.pts[0].y)) +
             "\" r=\"" + num(s.radius * scale) + "\"" + attrs + "/>\n";
      continue;
    }
    std::string d;
    for (std::size_t i = 0; i < s.pts.size(); ++i) {
      d += (i == 0 ? "M" : "L");
      d += num(px(s.pts[i].x)) + " " + num(py(s.pts[i].y));
    }
    if (s.closed) d += "Z";
    out += "  <path d=\"" + d + "\"" + attrs + "/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace skeltree
