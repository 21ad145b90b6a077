#include "skeltree/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

namespace skeltree {

namespace {

constexpr double kPi = 3.14159265358979323846;

/* Area-scale epsilon: cross products of difference vectors grow with the
 * square of the coordinate span. */
double area_eps(const Tolerance& tol, double scale) {
  return tol.eps(scale) * std::max(1.0, scale);
}

int side_of(Vec2 a, Vec2 b, Vec2 p, double aeps) {
  const double cr = cross(b - a, p - a);
  if (std::fabs(cr) <= aeps) return 0;
  return cr > 0 ? 1 : -1;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p, double aeps) {
  if (side_of(a, b, p, aeps) != 0) return false;
  const double t = dot(p - a, b - a);
  return t >= -aeps && t <= norm2(b - a) + aeps;
}

bool segments_conflict(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double aeps) {
  const int s1 = side_of(a, b, c, aeps);
  const int s2 = side_of(a, b, d, aeps);
  const int s3 = side_of(c, d, a, aeps);
  const int s4 = side_of(c, d, b, aeps);
  if (s1 * s2 < 0 && s3 * s4 < 0) return true;
  if (s1 == 0 && on_segment(a, b, c, aeps)) return true;
  if (s2 == 0 && on_segment(a, b, d, aeps)) return true;
  if (s3 == 0 && on_segment(c, d, a, aeps)) return true;
  if (s4 == 0 && on_segment(c, d, b, aeps)) return true;
  return false;
}

double point_segment_dist(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = norm2(ab);
  if (len2 == 0) return norm(p - a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

}  // namespace

double norm_angle(double a) {
  a = std::fmod(a, 2 * kPi);
  if (a < 0) a += 2 * kPi;
  return a;
}

Line line_through(Vec2 a, Vec2 b) {
  const Vec2 n = normalized(perp(b - a));
  return {n, dot(n, a)};
}

std::optional<Vec2> intersect(const Line& a, const Line& b, const Tolerance& tol) {
  const double det = cross(a.n, b.n);
  if (tol.zero(det, 1.0)) return std::nullopt;
  return Vec2{(a.c * b.n.y - a.n.y * b.c) / det, (a.n.x * b.c - a.c * b.n.x) / det};
}

double signed_area(const Polygon& p) {
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += cross(p.at(i), p.at(i + 1));
  return s / 2;
}

bool is_ccw(const Polygon& p) { return signed_area(p) > 0; }

double diameter(const Polygon& p) {
  double best = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      best = std::max(best, norm(p.pts[i] - p.pts[j]));
  return best;
}

double min_edge_length(const Polygon& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) best = std::min(best, norm(p.edge_vec(i)));
  return best;
}

double min_vertex_edge_gap(const Polygon& p) {
  const std::size_t n = p.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t e = 0; e < n; ++e) {
      if (e == v || (e + 1) % n == v) continue;  // incident edges
      best = std::min(best, point_segment_dist(p.pts[v], p.at(e), p.at(e + 1)));
    }
  }
  return best;
}

bool contains(const Polygon& p, Vec2 q) {
  bool inside = false;
  const std::size_t n = p.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = p.pts[j], b = p.pts[i];
    if ((b.y > q.y) != (a.y > q.y)) {
      const double x = b.x + (q.y - b.y) * (a.x - b.x) / (a.y - b.y);
      if (q.x < x) inside = !inside;
    }
  }
  return inside;
}

double interior_angle(const Polygon& p, std::size_t i) {
  const std::size_t n = p.size();
  const Vec2 e_in = p.pts[i] - p.at(i + n - 1);
  const Vec2 e_out = p.at(i + 1) - p.pts[i];
  const double turn = std::atan2(cross(e_in, e_out), dot(e_in, e_out));
  return kPi - turn;
}

bool is_simple(const Polygon& p, const Tolerance& tol) {
  const std::size_t n = p.size();
  if (n < 3) return false;
  const double aeps = area_eps(tol, diameter(p));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Shared endpoint is fine; a fold-back over the common vertex is not.
        const Vec2 d1 = p.edge_vec(i), d2 = p.edge_vec(j);
        if (std::fabs(cross(d1, d2)) <= aeps && dot(d1, d2) < 0) return false;
        continue;
      }
      if (segments_conflict(p.at(i), p.at(i + 1), p.at(j), p.at(j + 1), aeps))
        return false;
    }
  }
  return true;
}

bool has_parallel_edges(const Polygon& p, const Tolerance& tol) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 di = normalized(p.edge_vec(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2 dj = normalized(p.edge_vec(j));
      if (tol.zero(cross(di, dj), 1.0)) return true;
    }
  }
  return false;
}

std::optional<std::string> polygon_flaw(const Polygon& p, const Tolerance& tol) {
  if (p.size() < 3) return "fewer than 3 vertices";
  for (const Vec2& v : p.pts)
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) return "non-finite coordinate";
  const double scale = diameter(p);
  if (scale <= tol.abs_floor) return "degenerate extent";
  const double leps = tol.eps(scale);
  const double aeps = area_eps(tol, scale);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (norm(p.edge_vec(i)) <= leps)
      return "zero-length edge at vertex " + std::to_string(i);
    const std::size_t n = p.size();
    if (std::fabs(cross(p.edge_vec((i + n - 1) % n), p.edge_vec(i))) <= aeps)
      return "three collinear consecutive vertices at vertex " + std::to_string(i);
  }
  if (!is_ccw(p)) return "vertices are not counterclockwise";
  if (!is_simple(p, tol)) return "polygon is not simple";
  return std::nullopt;
}

bool in_general_position(const Polygon& p, const Tolerance& tol,
                         std::size_t exhaustive_n, std::size_t samples) {
  const std::size_t n = p.size();
  if (n < 4) return true;
  const double scale = std::max(1.0, diameter(p));
  const double eps = tol.eps(scale);

  std::vector<Line> lines;
  lines.reserve(n);
  for (std::size_t i = 0; i < n; ++i) lines.push_back(line_through(p.at(i), p.at(i + 1)));

  // A common tangent circle of three lines is an equidistant point; pick
  // relative orientations (global sign quotiented out), solve the 2x2
  // system, then test the fourth line against the shared radius.
  auto quad_tangent = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    for (const double sb : {1.0, -1.0}) {
      for (const double sc : {1.0, -1.0}) {
        const Vec2 r1 = lines[a].n - sb * lines[b].n;
        const Vec2 r2 = lines[a].n - sc * lines[c].n;
        const double det = cross(r1, r2);
        if (std::fabs(det) <= 1e-12) continue;
        const double k1 = lines[a].c - sb * lines[b].c;
        const double k2 = lines[a].c - sc * lines[c].c;
        const Vec2 x{(k1 * r2.y - r1.y * k2) / det, (r1.x * k2 - k1 * r2.x) / det};
        const double rho = std::fabs(lines[a].signed_dist(x));
        if (std::fabs(std::fabs(lines[d].signed_dist(x)) - rho) <= eps) return true;
      }
    }
    return false;
  };

  if (n <= exhaustive_n) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        for (std::size_t c = b + 1; c < n; ++c)
          for (std::size_t d = c + 1; d < n; ++d)
            if (quad_tangent(a, b, c, d)) return false;
    return true;
  }

  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    std::size_t idx[4];
    for (int k = 0; k < 4;) {
      const std::size_t v = pick(rng);
      bool dup = false;
      for (int t = 0; t < k; ++t) dup |= (idx[t] == v);
      if (!dup) idx[k++] = v;
    }
    std::sort(idx, idx + 4);
    if (quad_tangent(idx[0], idx[1], idx[2], idx[3])) return false;
  }
  return true;
}

Polygon exterior_offset(const Polygon& p, double d) {
  if (d < 0) throw std::invalid_argument("exterior_offset: negative distance");
  const std::size_t n = p.size();
  if (n < 3) throw std::invalid_argument("exterior_offset: not a polygon");
  const Tolerance tol;

  // Interior lies on the positive side of each edge line; pushing the
  // boundary outward lowers the offset term.
  std::vector<Line> moved;
  moved.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Line l = line_through(p.at(i), p.at(i + 1));
    l.c -= d;
    moved.push_back(l);
  }

  Polygon out;
  out.pts.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = intersect(moved[(i + n - 1) % n], moved[i], tol);
    if (!x) throw std::invalid_argument("exterior_offset: adjacent edges parallel");
    out.pts[i] = *x;
  }

  for (std::size_t i = 0; i < n; ++i)
    if (dot(out.edge_vec(i), p.edge_vec(i)) <= 0)
      throw std::invalid_argument("exterior_offset: offset collapses an edge");
  if (!is_simple(out, tol))
    throw std::invalid_argument("exterior_offset: mitered corners cross");
  return out;
}

Polygon normalized_to_unit(const Polygon& p) {
  double lox = std::numeric_limits<double>::infinity(), loy = lox;
  double hix = -lox, hiy = -lox;
  for (const Vec2& v : p.pts) {
    lox = std::min(lox, v.x);
    loy = std::min(loy, v.y);
    hix = std::max(hix, v.x);
    hiy = std::max(hiy, v.y);
  }
  const double span = std::max(hix - lox, hiy - loy);
  if (span <= 0) throw std::invalid_argument("normalized_to_unit: degenerate polygon");
  Polygon out;
  out.pts.reserve(p.size());
  for (const Vec2& v : p.pts) out.pts.push_back({(v.x - lox) / span, (v.y - loy) / span});
  return out;
}

std::string serialize_polygon(const Polygon& p) {
  std::string out;
  char buf[80];
  for (const Vec2& v : p.pts) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g\n", v.x, v.y);
    out += buf;
  }
  return out;
}

PolygonParseResult parse_polygon(const std::string& text) {
  PolygonParseResult res;
  Polygon poly;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag != "v") {
      res.error = "line " + std::to_string(lineno) + ": expected 'v <x> <y>'";
      return res;
    }
    double x, y;
    if (!(ls >> x >> y)) {
      res.error = "line " + std::to_string(lineno) + ": malformed coordinates";
      return res;
    }
    std::string extra;
    if (ls >> extra) {
      res.error = "line " + std::to_string(lineno) + ": trailing tokens";
      return res;
    }
    poly.pts.push_back({x, y});
  }
  if (poly.pts.size() < 3) {
    res.error = "polygon needs at least 3 vertices";
    return res;
  }
  res.polygon = std::move(poly);
  return res;
}

Line tangent_line(const SupportCircle& c, double phi) {
  // Normal points from the tangency point back through the center: the
  // interior (still unswept) side.
  const Vec2 n = -dir_of(phi);
  return {n, dot(n, tangency_point(c, phi))};
}

double TangentChain::step(std::size_t i) const {
  if (!closed) return tangents[i + 1] - tangents[i];
  if (i + 1 < tangents.size()) return tangents[i + 1] - tangents[i];
  return tangents[0] + 2 * kPi - tangents[i];
}

TangentChain chain_from_tangents(const SupportCircle& c, std::vector<double> tangents,
                                 bool closed) {
  if (c.radius <= 0) throw std::invalid_argument("tangent chain: radius must be positive");
  const std::size_t m = tangents.size();
  if (m == 0 || (closed && m < 3))
    throw std::invalid_argument("tangent chain: too few edges");
  TangentChain chain{c, std::move(tangents), {}, closed};
  const std::size_t verts = closed ? m : m - 1;
  chain.points.reserve(verts);
  for (std::size_t i = 0; i < verts; ++i) {
    const double step = chain.step(i);
    if (std::fabs(step) >= kPi - 1e-9 || std::fabs(step) <= 1e-9)
      throw std::invalid_argument("tangent chain: vertex turn out of range");
    const double mid = chain.tangents[i] + step / 2;
    chain.points.push_back(c.center + (c.radius / std::cos(step / 2)) * dir_of(mid));
  }
  return chain;
}

std::optional<std::vector<double>> allocate_steps(const NodeSignature& slice,
                                                  double total, double margin) {
  std::size_t conv = 0, refl = 0;
  for (WedgeSymbol s : slice) {
    if (is_outgoing(s)) return std::nullopt;
    (is_reflex(s) ? refl : conv)++;
  }
  const std::size_t m = conv + refl;
  if (m == 0) {
    if (std::fabs(total) > 1e-9) return std::nullopt;
    return std::vector<double>{};
  }
  if (margin <= 0) {
    // Widest margin the slice can afford for this total, halved for slack.
    const double cap =
        std::min((total + double(refl) * kPi) / double(m),
                 (double(conv) * kPi - total) / double(m));
    if (cap <= 1e-9) return std::nullopt;
    margin = std::min(0.15, cap / 2);
  }
  const double width = kPi - 2 * margin;
  const double lo = double(conv) * margin - double(refl) * (kPi - margin);
  const double lambda = (total - lo) / (width * double(m));
  if (lambda < -1e-12 || lambda > 1 + 1e-12) return std::nullopt;
  const double a = margin + lambda * width;        // convex turn
  const double b = (kPi - margin) - lambda * width;  // reflex turn magnitude
  std::vector<double> steps;
  steps.reserve(m);
  for (WedgeSymbol s : slice) steps.push_back(is_reflex(s) ? -b : a);
  return steps;
}

TangentChain tangent_edge_chain(const SupportCircle& c, double sector_lo,
                                double sector_hi, const NodeSignature& slice) {
  if (c.radius <= 0) throw std::invalid_argument("tangent_edge_chain: radius must be positive");
  const double beta = sector_hi - sector_lo;
  if (beta <= 0 || beta > 2 * kPi + 1e-9)
    throw std::invalid_argument("tangent_edge_chain: sector angle out of range");
  for (WedgeSymbol s : slice)
    if (is_outgoing(s))
      throw std::invalid_argument("tangent_edge_chain: slice must list incoming arcs only");

  const bool closed = beta >= 2 * kPi - 1e-12;
  // The first edge's free end points along sector_lo, the last edge's
  // along sector_hi, so the tangency angles sit half a turn inside.
  const double phi0 = sector_lo + kPi / 2;
  const double total = closed ? 2 * kPi : beta - kPi;
  const auto steps = allocate_steps(slice, total, 0);
  if (!steps)
    throw std::invalid_argument("tangent_edge_chain: slice cannot fill the sector");
  if (closed && slice.empty())
    throw std::invalid_argument("tangent_edge_chain: full sector needs a nonempty slice");

  std::vector<double> tangents;
  tangents.reserve(slice.size() + (closed ? 0 : 1));
  double phi = phi0;
  tangents.push_back(phi);
  const std::size_t count = closed ? steps->size() - 1 : steps->size();
  for (std::size_t i = 0; i < count; ++i) tangents.push_back(phi += (*steps)[i]);
  return chain_from_tangents(c, std::move(tangents), closed);
}

}  // namespace skeltree
