#pragma once

#include <string>
#include <vector>

#include "skeltree/geometry.hpp"

namespace skeltree {

struct SvgStyle {
  std::string stroke = "#1a1a1a";
  double width = 1.0;
  std::string fill = "none";
  bool dashed = false;
};

/* Collects shapes in model coordinates (y up) and renders a standalone
 * SVG document; the viewBox is fitted to the content with a margin and
 * the y axis flipped once at render time.  Output is deterministic. */
class SvgCanvas {
 public:
  void add_polygon(const Polygon& p, const SvgStyle& style = {});
  void add_polyline(const std::vector<Vec2>& pts, const SvgStyle& style = {});
  void add_segment(Vec2 a, Vec2 b, const SvgStyle& style = {});
  void add_circle(Vec2 center, double radius, const SvgStyle& style = {});
  void add_dot(Vec2 at, double radius, const std::string& color);

  bool empty() const { return shapes_.empty(); }
  std::string render(double pixel_width = 640.0) const;

 private:
  struct Shape {
    enum class Kind { Path, Circle } kind;
    std::vector<Vec2> pts;  // path points, or {center} for circles
    double radius = 0;      // circles only
    bool closed = false;
    SvgStyle style;
  };
  std::vector<Shape> shapes_;
};

}  // namespace skeltree
