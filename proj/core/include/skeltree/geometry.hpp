#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "skeltree/tree.hpp"

namespace skeltree {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2 operator-() const { return {-x, -y}; }
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }
inline Vec2 normalized(Vec2 a) { return a / norm(a); }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }  // rotate +90 degrees
inline Vec2 dir_of(double angle) { return {std::cos(angle), std::sin(angle)}; }
inline double angle_of(Vec2 a) { return std::atan2(a.y, a.x); }
inline Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/* Comparison tolerance: relative with an absolute floor.  `scale` is the
 * magnitude the compared quantities live at (coordinate span, typically
 * the polygon diameter). */
struct Tolerance {
  double rel = 1e-9;
  double abs_floor = 1e-12;

  double eps(double scale) const {
    return std::max(abs_floor, rel * std::fabs(scale));
  }
  bool zero(double v, double scale) const { return std::fabs(v) <= eps(scale); }
  bool close(double a, double b, double scale) const { return zero(a - b, scale); }
};

/* Angles normalized into [0, 2pi). */
double norm_angle(double a);

/* Oriented line as unit normal and offset: points x with dot(n,x) = c;
 * signed_dist > 0 on the side n points into. */
struct Line {
  Vec2 n;       // unit normal
  double c = 0;

  double signed_dist(Vec2 p) const { return dot(n, p) - c; }
  /* Travel direction that keeps the positive side on the left. */
  Vec2 dir() const { return {n.y, -n.x}; }
};

Line line_through(Vec2 a, Vec2 b);  // normal points left of a->b
std::optional<Vec2> intersect(const Line& a, const Line& b, const Tolerance& tol);

struct Polygon {
  std::vector<Vec2> pts;  // counterclockwise, no repeats

  std::size_t size() const { return pts.size(); }
  Vec2 at(std::size_t i) const { return pts[i % pts.size()]; }
  Vec2 edge_vec(std::size_t i) const { return at(i + 1) - at(i); }  // edge i: pts[i] -> pts[i+1]
};

double signed_area(const Polygon& p);
bool is_ccw(const Polygon& p);
double diameter(const Polygon& p);
double min_edge_length(const Polygon& p);
/* Smallest distance from a vertex to a non-incident edge; the critical
 * clearance for offset operations. */
double min_vertex_edge_gap(const Polygon& p);
bool contains(const Polygon& p, Vec2 q);  // strict interior, crossing test

/* Interior angle at vertex i, in (0, 2pi); > pi means reflex. */
double interior_angle(const Polygon& p, std::size_t i);

bool is_simple(const Polygon& p, const Tolerance& tol);
bool has_parallel_edges(const Polygon& p, const Tolerance& tol);

/* Empty when the polygon is valid input for the skeleton: >= 3 vertices,
 * finite coordinates, no zero-length edges, no collinear consecutive
 * triple, counterclockwise, simple.  Otherwise a description. */
std::optional<std::string> polygon_flaw(const Polygon& p, const Tolerance& tol);

/* No four edge supporting lines tangent to a common circle.  Exhaustive
 * over quadruples for size <= exhaustive_n, randomly sampled (fixed seed)
 * beyond that. */
bool in_general_position(const Polygon& p, const Tolerance& tol,
                         std::size_t exhaustive_n = 12, std::size_t samples = 2000);

/* Each edge moved outward by d, corners re-mitered; vertex count kept.
 * Throws std::invalid_argument when d is so large that corners cross. */
Polygon exterior_offset(const Polygon& p, double d);

/* Uniform scale + translate into [0,1]^2 (touching both axes). */
Polygon normalized_to_unit(const Polygon& p);

/* Polygon text format: one "v <x> <y>" line per vertex, counterclockwise. */
std::string serialize_polygon(const Polygon& p);
struct PolygonParseResult {
  std::optional<Polygon> polygon;
  std::string error;  // empty on success
  bool ok() const { return polygon.has_value(); }
};
PolygonParseResult parse_polygon(const std::string& text);

/* The pre-event wavefront of a multi-sector event is built from edges
 * tangent to a common circle around the event locus: radius = lookback
 * time delta, so every edge reaches the center exactly delta later. */
struct SupportCircle {
  Vec2 center;
  double radius = 0;
};

/* An edge tangent at angle phi touches center + radius*dir(phi) and runs
 * in direction perp(dir(phi)); the polygon interior (the side still to be
 * swept) contains the center. */
inline Vec2 tangency_point(const SupportCircle& c, double phi) {
  return c.center + c.radius * dir_of(phi);
}
inline Vec2 tangent_dir(double phi) { return perp(dir_of(phi)); }
Line tangent_line(const SupportCircle& c, double phi);

/* Wavefront chain with every edge tangent to the circle.  Open chains
 * have tangents.size() == points.size() + 1 (points are the interior
 * vertices); closed chains have equal counts and wrap around.  Vertex i
 * sits between the edges tangent at tangents[i] and tangents[i+1] (mod
 * size when closed), on their bisector at distance radius/cos(step/2). */
struct TangentChain {
  SupportCircle circle;
  std::vector<double> tangents;  // tangency angle per edge, in chain order
  std::vector<Vec2> points;      // vertex positions
  bool closed = false;

  /* Interior angle at vertex i is pi - step(i); negative steps are
   * reflex vertices. */
  double step(std::size_t i) const;
};

TangentChain chain_from_tangents(const SupportCircle& c, std::vector<double> tangents,
                                 bool closed);

/* Builds the wavefront chain of one wedge: the swept sector is the
 * counterclockwise angular interval [sector_lo, sector_hi] as seen from
 * the circle center, and the slice lists the chain's vertex types in
 * order (unhatted symbols only).  The sector angle must equal pi plus
 * the reachable total turn of the slice: a reflex wedge ends below pi, a
 * convex one above, an empty slice at exactly pi.  A full wedge (closed
 * chain over the whole disk) is requested with sector_hi - sector_lo =
 * 2*pi.  Throws std::invalid_argument on infeasible combinations. */
TangentChain tangent_edge_chain(const SupportCircle& c, double sector_lo,
                                double sector_hi, const NodeSignature& slice);

/* Turn magnitudes for a slice whose signed turns must add up to `total`:
 * convex symbols get +step, reflex -step, each step in (margin, pi -
 * margin); margin <= 0 picks the widest affordable margin (capped at
 * 0.15).  Empty when infeasible.  Exposed for construction planning. */
std::optional<std::vector<double>> allocate_steps(const NodeSignature& slice,
                                                  double total, double margin);

}  // namespace skeltree
