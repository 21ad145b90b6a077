#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "skeltree/geometry.hpp"
#include "skeltree/svg.hpp"
#include "test_util.hpp"

using namespace skeltree;

namespace {

constexpr double kPi = 3.14159265358979323846;

Polygon unit_square() { return {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}; }

Polygon equilateral(double s) {
  return {{{0, 0}, {s, 0}, {s / 2, s * std::sqrt(3.0) / 2}}};
}

Vec2 centroid(const Polygon& p) {
  Vec2 c{0, 0};
  for (const Vec2& v : p.pts) c = c + v;
  return c / double(p.size());
}

double dist_to_line(const Line& l, Vec2 p) { return std::fabs(l.signed_dist(p)); }

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("polygon basics") {
  const Polygon sq = unit_square();
  CHECK(signed_area(sq) == doctest::Approx(1.0));
  CHECK(is_ccw(sq));
  CHECK(diameter(sq) == doctest::Approx(std::sqrt(2.0)));
  CHECK(min_edge_length(sq) == doctest::Approx(1.0));
  CHECK(min_vertex_edge_gap(sq) == doctest::Approx(1.0));
  CHECK(contains(sq, {0.5, 0.5}));
  CHECK_FALSE(contains(sq, {1.5, 0.5}));
}

TEST_CASE("interior angles") {
  const Polygon tri = equilateral(2.0);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(interior_angle(tri, i) == doctest::Approx(kPi / 3));

  // An arrowhead: the dent at (1, 0.5) is reflex.
  const Polygon arrow{{{0, 0}, {2, 0}, {1, 0.5}, {1.5, 1.5}, {0, 1}}};
  CHECK(is_ccw(arrow));
  CHECK(interior_angle(arrow, 2) > kPi);

  double turn_sum = 0;
  for (std::size_t i = 0; i < arrow.size(); ++i) turn_sum += kPi - interior_angle(arrow, i);
  CHECK(turn_sum == doctest::Approx(2 * kPi));
}

TEST_CASE("simplicity") {
  const Tolerance tol;
  CHECK(is_simple(unit_square(), tol));
  const Polygon bowtie{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}};
  CHECK_FALSE(is_simple(bowtie, tol));
  // Vertex 3 touches the interior of edge 0-1.
  const Polygon touching{{{0, 0}, {2, 0}, {2, 1}, {1, 0}, {0, 1}}};
  CHECK_FALSE(is_simple(touching, tol));
}

TEST_CASE("parallel edge detection") {
  const Tolerance tol;
  CHECK(has_parallel_edges(unit_square(), tol));  // opposite sides
  CHECK_FALSE(has_parallel_edges(equilateral(1.0), tol));
  const Polygon quad{{{0, 0}, {3, 0}, {2.6, 2.1}, {0.2, 1.7}}};
  CHECK_FALSE(has_parallel_edges(quad, tol));
}

TEST_CASE("polygon flaws") {
  const Tolerance tol;
  CHECK_FALSE(polygon_flaw(unit_square(), tol).has_value());

  Polygon cw = unit_square();
  std::reverse(cw.pts.begin(), cw.pts.end());
  REQUIRE(polygon_flaw(cw, tol).has_value());
  CHECK(polygon_flaw(cw, tol)->find("counterclockwise") != std::string::npos);

  const Polygon collinear{{{0, 0}, {1, 0}, {2, 0}, {1, 1}}};
  REQUIRE(polygon_flaw(collinear, tol).has_value());
  CHECK(polygon_flaw(collinear, tol)->find("collinear") != std::string::npos);

  const Polygon dup{{{0, 0}, {1, 0}, {1, 0}, {0, 1}}};
  CHECK(polygon_flaw(dup, tol).has_value());

  const Polygon two{{{0, 0}, {1, 0}}};
  CHECK(polygon_flaw(two, tol).has_value());
}

TEST_CASE("general position predicate") {
  const Tolerance tol;
  // All four square edge lines touch the inscribed circle.
  CHECK_FALSE(in_general_position(unit_square(), tol));
  CHECK(in_general_position(equilateral(1.0), tol));  // fewer than 4 lines
  const Polygon quad{{{0, 0}, {3, 0}, {2.7, 2.2}, {0.3, 1.9}}};
  CHECK(in_general_position(quad, tol));
}

TEST_CASE("exterior offset of the unit square") {
  const Polygon out = exterior_offset(unit_square(), 1.0);
  REQUIRE(out.size() == 4);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(norm(out.edge_vec(i)) == doctest::Approx(3.0));
  const Vec2 c0 = centroid(unit_square()), c1 = centroid(out);
  CHECK(c1.x == doctest::Approx(c0.x));
  CHECK(c1.y == doctest::Approx(c0.y));
}

TEST_CASE("exterior offset of an equilateral triangle") {
  const double s = 2.0, d = 0.25;
  const Polygon out = exterior_offset(equilateral(s), d);
  REQUIRE(out.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(norm(out.edge_vec(i)) == doctest::Approx(s + 2 * std::sqrt(3.0) * d));
}

TEST_CASE("offset composes additively") {
  const Polygon base = equilateral(2.0);
  const Polygon one = exterior_offset(exterior_offset(base, 0.3), 0.45);
  const Polygon two = exterior_offset(base, 0.75);
  REQUIRE(one.size() == two.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one.pts[i].x == doctest::Approx(two.pts[i].x));
    CHECK(one.pts[i].y == doctest::Approx(two.pts[i].y));
  }
}

TEST_CASE("offset rejects corner crossings") {
  // Outward offset shrinks the notch edge at the two reflex corners; a
  // large distance collapses it.
  const Polygon notched{{{0, 0}, {4, 0}, {4, 3}, {2.2, 3}, {2.2, 2.8}, {1.8, 2.8},
                         {1.8, 3}, {0, 3}}};
  const Tolerance tol;
  REQUIRE_FALSE(polygon_flaw(notched, tol).has_value());
  CHECK_NOTHROW(exterior_offset(notched, 0.01));
  CHECK_THROWS_AS(exterior_offset(notched, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(exterior_offset(notched, -0.1), std::invalid_argument);
}

TEST_CASE("polygon text round trip") {
  const Polygon quad{{{0, 0}, {3, 0}, {2.7, 2.2}, {0.3, 1.9}}};
  const auto parsed = parse_polygon(serialize_polygon(quad));
  REQUIRE(parsed.ok());
  REQUIRE(parsed.polygon->size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(parsed.polygon->pts[i].x == quad.pts[i].x);
    CHECK(parsed.polygon->pts[i].y == quad.pts[i].y);
  }
  CHECK(serialize_polygon(*parsed.polygon) == serialize_polygon(quad));
}

TEST_CASE("polygon parse errors") {
  CHECK(parse_polygon("x 1 2\n").error.find("line 1") != std::string::npos);
  CHECK(parse_polygon("v 1 2\nv 3\n").error.find("line 2") != std::string::npos);
  CHECK(parse_polygon("v 1 2 3\n").error.find("trailing") != std::string::npos);
  CHECK(parse_polygon("v 0 0\nv 1 0\n").error.find("at least 3") != std::string::npos);
  // Comments and blank lines are fine.
  const auto ok = parse_polygon("# tri\nv 0 0\n\nv 1 0\nv 0 1 # last\n");
  CHECK(ok.ok());
}

TEST_CASE("normalize to unit square") {
  const Polygon rect{{{2, 1}, {6, 1}, {6, 3}, {2, 3}}};
  const Polygon out = normalized_to_unit(rect);
  CHECK(out.pts[0] == Vec2{0, 0});
  CHECK(out.pts[1] == Vec2{1, 0});
  CHECK(out.pts[2] == Vec2{1, 0.5});
  CHECK(out.pts[3] == Vec2{0, 0.5});
}

TEST_CASE("tangent chain for a lone reflex vertex") {
  const SupportCircle circle{{2, 1}, 0.5};
  const double lo = 0.3, beta = kPi - 0.8;
  const auto chain = tangent_edge_chain(circle, lo, lo + beta, testutil::sig_of("r"));
  REQUIRE(chain.tangents.size() == 2);
  REQUIRE(chain.points.size() == 1);
  CHECK_FALSE(chain.closed);
  CHECK(chain.step(0) == doctest::Approx(-0.8));
  for (double phi : chain.tangents)
    CHECK(dist_to_line(tangent_line(circle, phi), circle.center) ==
          doctest::Approx(circle.radius));
  // The vertex rides both edge lines, at the collapse distance.
  for (double phi : chain.tangents)
    CHECK(dist_to_line(tangent_line(circle, phi), chain.points[0]) ==
          doctest::Approx(0.0));
  CHECK(norm(chain.points[0] - circle.center) ==
        doctest::Approx(circle.radius / std::cos(0.4)));
}

TEST_CASE("tangent chain for slice r c r") {
  const SupportCircle circle{{0, 0}, 1.0};
  const double lo = -0.2, beta = kPi - 0.5;
  const auto chain = tangent_edge_chain(circle, lo, lo + beta, testutil::sig_of("r c r"));
  REQUIRE(chain.tangents.size() == 4);
  REQUIRE(chain.points.size() == 3);
  CHECK(chain.step(0) < 0);
  CHECK(chain.step(1) > 0);
  CHECK(chain.step(2) < 0);
  CHECK(chain.step(0) + chain.step(1) + chain.step(2) == doctest::Approx(-0.5));
  for (double phi : chain.tangents)
    CHECK(dist_to_line(tangent_line(circle, phi), circle.center) ==
          doctest::Approx(circle.radius));
  // Turn direction at each vertex matches the slice.
  for (std::size_t i = 0; i < 3; ++i) {
    const Vec2 din = tangent_dir(chain.tangents[i]);
    const Vec2 dout = tangent_dir(chain.tangents[i + 1]);
    CHECK((cross(din, dout) > 0) == (chain.step(i) > 0));
  }
}

TEST_CASE("tangent chain for a convex wedge") {
  const SupportCircle circle{{0, 0}, 0.25};
  const auto chain = tangent_edge_chain(circle, 0.1, 0.1 + kPi + 0.9, testutil::sig_of("c"));
  REQUIRE(chain.points.size() == 1);
  CHECK(chain.step(0) == doctest::Approx(0.9));
}

TEST_CASE("pi wedge is a single tangent edge") {
  const SupportCircle circle{{1, 1}, 0.3};
  const auto chain = tangent_edge_chain(circle, 0.4, 0.4 + kPi, {});
  CHECK(chain.tangents.size() == 1);
  CHECK(chain.points.empty());
  CHECK(dist_to_line(tangent_line(circle, chain.tangents[0]), circle.center) ==
        doctest::Approx(circle.radius));
}

TEST_CASE("full sector with slice c c c closes into a circumscribing triangle") {
  const SupportCircle circle{{0.5, -0.5}, 2.0};
  const auto chain = tangent_edge_chain(circle, 0, 2 * kPi, testutil::sig_of("c c c"));
  CHECK(chain.closed);
  REQUIRE(chain.tangents.size() == 3);
  REQUIRE(chain.points.size() == 3);
  double total = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(chain.step(i) == doctest::Approx(2 * kPi / 3));
    total += chain.step(i);
    CHECK(dist_to_line(tangent_line(circle, chain.tangents[i]), circle.center) ==
          doctest::Approx(circle.radius));
    CHECK(norm(chain.points[i] - circle.center) ==
          doctest::Approx(circle.radius / std::cos(kPi / 3)));
  }
  CHECK(total == doctest::Approx(2 * kPi));
  // The triangle contains the circle: every edge at exactly radius, every
  // vertex outside it.
  Polygon tri{chain.points};
  CHECK(is_ccw(tri));
  CHECK(contains(tri, circle.center));
}

TEST_CASE("infeasible sector and slice combinations") {
  const SupportCircle circle{{0, 0}, 1.0};
  // A convex vertex cannot fit a sector below pi.
  CHECK_THROWS_AS(tangent_edge_chain(circle, 0, 0.5 * kPi, testutil::sig_of("c")),
                  std::invalid_argument);
  // A reflex vertex cannot fit a sector above pi.
  CHECK_THROWS_AS(tangent_edge_chain(circle, 0, 1.5 * kPi, testutil::sig_of("r")),
                  std::invalid_argument);
  // An empty slice needs exactly pi.
  CHECK_THROWS_AS(tangent_edge_chain(circle, 0, 0.9 * kPi, {}), std::invalid_argument);
  // A full sector needs at least three convex turns.
  CHECK_THROWS_AS(tangent_edge_chain(circle, 0, 2 * kPi, testutil::sig_of("c c")),
                  std::invalid_argument);
  // Geometric feasibility is all the chain builder checks; a closed chain
  // with a reflex dent is fine here even though no event produces one.
  CHECK_NOTHROW(tangent_edge_chain(circle, 0, 2 * kPi, testutil::sig_of("r c c c")));
}

TEST_CASE("step allocation is exact") {
  for (const char* txt : {"r", "c", "r c r", "c r c c", "r r c"}) {
    const auto slice = testutil::sig_of(txt);
    for (double total : {-0.4, 0.0, 0.7}) {
      const auto steps = allocate_steps(slice, total, 0);
      if (!steps) continue;
      double sum = 0;
      for (double s : *steps) sum += s;
      CHECK(sum == doctest::Approx(total).epsilon(1e-12));
      REQUIRE(steps->size() == slice.size());
      for (std::size_t i = 0; i < slice.size(); ++i)
        CHECK((steps->at(i) < 0) == is_reflex(slice[i]));
    }
  }
  // Feasibility boundaries.
  CHECK_FALSE(allocate_steps(testutil::sig_of("c"), -0.1, 0).has_value());
  CHECK_FALSE(allocate_steps(testutil::sig_of("r"), 0.1, 0).has_value());
  CHECK_FALSE(allocate_steps(testutil::sig_of("c"), kPi, 0).has_value());
  CHECK(allocate_steps({}, 0.0, 0).has_value());
  CHECK_FALSE(allocate_steps({}, 0.5, 0).has_value());
}

TEST_CASE("svg renders deterministically") {
  SvgCanvas svg;
  svg.add_polygon(unit_square());
  SvgStyle dashed;
  dashed.dashed = true;
  svg.add_segment({0, 0}, {1, 1}, dashed);
  svg.add_circle({0.5, 0.5}, 0.25);
  svg.add_dot({0.5, 0.5}, 0.02, "#c00");
  const std::string a = svg.render();
  CHECK(a.find("<svg") == 0);
  CHECK(a.find("stroke-dasharray") != std::string::npos);
  CHECK(a.find("<circle") != std::string::npos);
  CHECK(a == svg.render());
}

}  // TEST_SUITE
