#include "skeltree/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace skeltree {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint32_t kNone = 0xffffffffu;

/* Wavefront edges never leave their supporting lines: every piece of the
 * front lies on some input edge line pushed inward at unit speed, so the
 * moving line n.x = c0 + t is all the geometry an edge needs. */
struct MovingLine {
  Vec2 n;  // unit normal, interior on the positive side
  double c0 = 0;

  double dist_at(Vec2 p, double t) const { return dot(n, p) - (c0 + t); }
  Vec2 travel() const { return {n.y, -n.x}; }  // interior on the left
};

struct KineticVertex {
  Vec2 pos0;         // position at birth
  double t0 = 0;     // birth time
  Vec2 vel;          // constant until death
  std::uint32_t left = 0, right = 0;  // moving line ids
  std::uint32_t prev = kNone, next = kNone;
  std::uint32_t node = kNone;  // skeleton node it emanates from
  bool alive = true;
  bool reflex = false;
};

struct Candidate {
  double t = 0;
  Vec2 locus;
};

struct Stub {
  std::uint32_t vertex;  // surviving neighbour
  std::uint32_t line;
  bool incoming;  // chain arrives at the event along this line
  double angle;   // direction of the wall ray from the locus to the survivor
};

struct Simulator {
  const Polygon& input;
  Tolerance tol;
  double scale = 1;
  double dx = 0;    // spatial clustering window
  double dt = 0;    // temporal clustering window
  double now = 0;
  std::vector<Candidate> recent;  // executed events still in the echo window
  std::vector<MovingLine> lines;
  std::vector<KineticVertex> verts;
  SkeletonGraph graph;
  std::string error;

  explicit Simulator(const Polygon& p, const Tolerance& t) : input(p), tol(t) {}

  bool fail(const std::string& msg) {
    if (error.empty()) error = msg;
    return false;
  }

  Vec2 pos_at(const KineticVertex& v, double t) const {
    return v.pos0 + (t - v.t0) * v.vel;
  }

  /* An executed event leaves fresh vertices exactly at its locus; any
   * candidate still pointing there at essentially the same time is the
   * same event echoing, not a new one. */
  bool is_echo(double t, Vec2 locus) const {
    for (const Candidate& r : recent)
      if (t <= r.t + dt && norm(locus - r.locus) <= 2 * dx) return true;
    return false;
  }

  std::optional<Vec2> velocity_between(std::uint32_t la, std::uint32_t lb) const {
    const Vec2 na = lines[la].n, nb = lines[lb].n;
    const double det = cross(na, nb);
    if (std::fabs(det) < 1e-12) return std::nullopt;
    return Vec2{(nb.y - na.y) / det, (na.x - nb.x) / det};
  }

  bool init() {
    if (const auto flaw = polygon_flaw(input, tol))
      return fail("invalid polygon: " + *flaw);
    if (has_parallel_edges(input, tol))
      return fail("input polygon has parallel edges");
    const std::size_t n = input.size();
    scale = diameter(input);
    dx = 1e3 * tol.eps(scale);
    dt = dx;
    lines.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Line l = line_through(input.at(i), input.at(i + 1));
      lines.push_back({l.n, l.c});
    }
    verts.reserve(4 * n);
    graph.nodes.reserve(2 * n);
    graph.leaf_count = n;
    for (std::size_t i = 0; i < n; ++i) {
      graph.nodes.push_back({input.pts[i], 0.0});
      const std::uint32_t left = std::uint32_t((i + n - 1) % n);
      const auto vel = velocity_between(left, std::uint32_t(i));
      if (!vel) return fail("adjacent edges parallel at vertex " + std::to_string(i));
      KineticVertex v;
      v.pos0 = input.pts[i];
      v.t0 = 0;
      v.vel = *vel;
      v.left = left;
      v.right = std::uint32_t(i);
      v.prev = std::uint32_t((i + n - 1) % n);
      v.next = std::uint32_t((i + 1) % n);
      v.node = std::uint32_t(i);
      v.reflex = cross(input.edge_vec((i + n - 1) % n), input.edge_vec(i)) < 0;
      verts.push_back(v);
    }
    return true;
  }

  /* Earliest meeting of a consecutive vertex pair, as the least-squares
   * closest approach of the two trajectories; exact when they truly meet. */
  void edge_candidates(std::vector<Candidate>& out) const {
    for (std::uint32_t ui = 0; ui < verts.size(); ++ui) {
      const KineticVertex& u = verts[ui];
      if (!u.alive) continue;
      const KineticVertex& v = verts[u.next];
      const Vec2 dvel = u.vel - v.vel;
      const double dv2 = norm2(dvel);
      if (dv2 < 1e-18) continue;
      const Vec2 dpos = pos_at(u, now) - pos_at(v, now);
      double t = now - dot(dpos, dvel) / dv2;
      if (t < now - dt) continue;
      t = std::max(t, now);
      const Vec2 residual = dpos + (t - now) * dvel;
      if (norm(residual) > dx) continue;
      const Vec2 locus = (pos_at(u, t) + pos_at(v, t)) * 0.5;
      if (!is_echo(t, locus)) out.push_back({t, locus});
    }
  }

  /* A reflex vertex catching up with a moving edge line; only kept when
   * the hit point lies inside a current piece of that line. */
  void split_candidates(std::vector<Candidate>& out) const {
    for (std::uint32_t ui = 0; ui < verts.size(); ++ui) {
      const KineticVertex& u = verts[ui];
      if (!u.alive || !u.reflex) continue;
      for (std::uint32_t e = 0; e < lines.size(); ++e) {
        if (e == u.left || e == u.right) continue;
        const double speed_towards = dot(lines[e].n, u.vel) - 1;
        if (speed_towards >= -1e-12) continue;  // not approaching
        const double gap = lines[e].dist_at(pos_at(u, now), now);
        if (gap < -dx) continue;  // already behind the line
        double t = now + gap / (-speed_towards);
        if (t < now - dt) continue;
        t = std::max(t, now);
        const Vec2 hit = pos_at(u, t);
        if (is_echo(t, hit)) continue;
        if (piece_contains(e, ui, hit, t)) out.push_back({t, hit});
      }
    }
  }

  bool piece_contains(std::uint32_t line, std::uint32_t skip_vertex, Vec2 point,
                      double t) const {
    for (std::uint32_t wi = 0; wi < verts.size(); ++wi) {
      const KineticVertex& w = verts[wi];
      if (!w.alive || w.right != line) continue;
      if (wi == skip_vertex || w.next == skip_vertex) continue;
      const Vec2 a = pos_at(w, t), b = pos_at(verts[w.next], t);
      const Vec2 ab = b - a;
      const double len = norm(ab);
      if (len <= dx) {
        if (norm(point - a) <= dx) return true;
        continue;
      }
      const double s = dot(point - a, ab / len);
      if (s >= -dx && s <= len + dx) return true;
    }
    return false;
  }

  std::size_t alive_count() const {
    std::size_t k = 0;
    for (const auto& v : verts) k += v.alive;
    return k;
  }

  /* Executes the earliest event cluster.  Returns false when there is
   * nothing left to do before t_limit, or on error (error set). */
  bool step(double t_limit) {
    std::vector<Candidate> cands;
    edge_candidates(cands);
    split_candidates(cands);
    if (std::getenv("SKELTREE_TRACE")) {
      std::fprintf(stderr, "step now=%.12g alive=%zu cands=%zu\n", now,
                   alive_count(), cands.size());
      for (std::uint32_t vi = 0; vi < verts.size(); ++vi) {
        const KineticVertex& v = verts[vi];
        if (!v.alive) continue;
        const Vec2 p = pos_at(v, now);
        std::fprintf(stderr,
                     "  v%u pos=(%.9g,%.9g) vel=(%.6g,%.6g) L%u R%u prev=%u "
                     "next=%u%s\n",
                     vi, p.x, p.y, v.vel.x, v.vel.y, v.left, v.right, v.prev,
                     v.next, v.reflex ? " reflex" : "");
      }
      for (const Candidate& c : cands)
        std::fprintf(stderr, "  cand t=%.12g locus=(%.9g,%.9g)\n", c.t,
                     c.locus.x, c.locus.y);
    }
    if (cands.empty()) {
      if (alive_count() > 0) return fail("wavefront stalled with no next event");
      return false;
    }
    const auto best = std::min_element(
        cands.begin(), cands.end(),
        [](const Candidate& a, const Candidate& b) { return a.t < b.t; });
    const double tstar = best->t;
    if (tstar > t_limit) return false;
    if (tstar <= dt) return fail("event at time zero; input too degenerate");
    const Vec2 locus = best->locus;

    // Participants: everything that is at the locus at event time.
    std::vector<std::uint32_t> part;
    for (std::uint32_t vi = 0; vi < verts.size(); ++vi)
      if (verts[vi].alive && norm(pos_at(verts[vi], tstar) - locus) <= dx)
        part.push_back(vi);
    if (part.empty()) return fail("event with no participants");

    const std::uint32_t node = std::uint32_t(graph.nodes.size());
    graph.nodes.push_back({locus, tstar});

    for (std::uint32_t pi : part) {
      KineticVertex& p = verts[pi];
      p.alive = false;
      graph.arcs.push_back(
          {p.node, node, p.reflex ? ArcLabel::Reflex : ArcLabel::Convex});
    }

    // Dangling chain ends around the event, plus surviving edge pieces the
    // locus cuts through (the far side of a split).
    std::vector<Stub> stubs;
    auto add_stub = [&](std::uint32_t w, std::uint32_t line, bool incoming) {
      const double ray =
          norm_angle(angle_of(lines[line].n) + (incoming ? kPi / 2 : -kPi / 2));
      stubs.push_back({w, line, incoming, ray});
    };
    for (std::uint32_t pi : part) {
      const KineticVertex& p = verts[pi];
      if (verts[p.prev].alive) add_stub(p.prev, p.left, true);
      if (verts[p.next].alive) add_stub(p.next, p.right, false);
    }
    for (std::uint32_t wi = 0; wi < verts.size(); ++wi) {
      const KineticVertex& w = verts[wi];
      if (!w.alive || !verts[w.next].alive) continue;
      if (std::fabs(lines[w.right].dist_at(locus, tstar)) > dx) continue;
      const Vec2 a = pos_at(w, tstar), b = pos_at(verts[w.next], tstar);
      const Vec2 ab = b - a;
      const double len = norm(ab);
      if (len <= dx) continue;
      const double s = dot(locus - a, ab / len);
      if (s < -dx || s > len + dx) continue;
      add_stub(wi, w.right, true);
      add_stub(w.next, w.right, false);
    }

    std::size_t n_in = 0;
    for (const Stub& s : stubs) n_in += s.incoming;
    if (2 * n_in != stubs.size())
      return fail("event severs the wavefront asymmetrically");

    // At event time every surviving wall is a ray out of the locus: an
    // incoming chain's wall points back at its survivor along the reverse
    // of the line's travel, an outgoing chain's wall along the travel
    // itself.  The interior lies left of outgoing rays and right of
    // incoming ones, so going counterclockwise the rays alternate out, in,
    // out, in, and each interior sector runs from an outgoing ray to the
    // next incoming ray.  Pairing those two walls per sector rebuilds the
    // front whether the event merely relinks it or severs it into loops.
    std::sort(stubs.begin(), stubs.end(), [](const Stub& a, const Stub& b) {
      if (a.angle != b.angle) return a.angle < b.angle;
      return a.incoming < b.incoming;
    });
    for (std::size_t i = 0; i + 1 < stubs.size(); ++i)
      if (stubs[i].incoming == stubs[i + 1].incoming)
        return fail("event stubs do not alternate around the locus");
    for (std::size_t i = 0; i < stubs.size(); ++i) {
      const Stub& out = stubs[i];
      if (out.incoming) continue;
      const Stub& in = stubs[(i + 1) % stubs.size()];
      if (in.line == out.line)
        return fail("event would leave a straight wavefront joint");
      const auto vel = velocity_between(in.line, out.line);
      if (!vel) return fail("emerging wavefront walls are parallel");
      KineticVertex q;
      q.pos0 = locus;
      q.t0 = tstar;
      q.vel = *vel;
      q.left = in.line;
      q.right = out.line;
      q.node = node;
      q.reflex = cross(lines[in.line].n, lines[out.line].n) < 0;
      const std::uint32_t qi = std::uint32_t(verts.size());
      verts.push_back(q);
      verts[in.vertex].next = qi;
      verts[qi].prev = in.vertex;
      verts[qi].next = out.vertex;
      verts[out.vertex].prev = qi;
    }

    // Every surviving loop must still be a closed chain of length >= 3.
    for (std::uint32_t vi = 0; vi < verts.size(); ++vi) {
      if (!verts[vi].alive) continue;
      std::size_t len = 0;
      std::uint32_t w = vi;
      do {
        if (!verts[w].alive || verts[verts[w].next].prev != w)
          return fail("wavefront links corrupted after event");
        w = verts[w].next;
        if (++len > verts.size()) return fail("wavefront links corrupted after event");
      } while (w != vi);
      if (len < 3) return fail("event left a degenerate two-wall front");
    }

    now = tstar;
    std::erase_if(recent, [&](const Candidate& r) { return r.t < tstar - dt; });
    recent.push_back({tstar, locus});
    return true;
  }

  bool run(double t_limit) {
    const std::size_t round_cap = 6 * input.size() + 16;
    for (std::size_t round = 0; round < round_cap; ++round) {
      if (!step(t_limit)) return error.empty();
    }
    return fail("event cascade exceeded its bound");
  }
};

}  // namespace

std::size_t SkeletonGraph::in_degree(std::uint32_t node) const {
  std::size_t k = 0;
  for (const Arc& a : arcs) k += (a.head == node);
  return k;
}

std::size_t SkeletonGraph::out_degree(std::uint32_t node) const {
  std::size_t k = 0;
  for (const Arc& a : arcs) k += (a.tail == node);
  return k;
}

EventKind node_event_kind(const SkeletonGraph& g, std::uint32_t node) {
  const std::size_t in = g.in_degree(node), out = g.out_degree(node);
  if (in == 2 && out == 1) return EventKind::Edge;
  if (in == 1 && out == 2) return EventKind::Split;
  return EventKind::Multi;
}

SkeletonResult compute_skeleton(const Polygon& p, const Tolerance& tol) {
  Simulator sim(p, tol);
  if (!sim.init() || !sim.run(std::numeric_limits<double>::infinity()))
    return {std::nullopt, sim.error};
  if (sim.alive_count() != 0)
    return {std::nullopt, "wavefront never fully collapsed"};

  SkeletonGraph g = std::move(sim.graph);
  if (g.arcs.size() + 1 != g.nodes.size())
    return {std::nullopt, "skeleton is not a tree"};

  g.rotation.assign(g.nodes.size(), {});
  for (std::uint32_t a = 0; a < g.arcs.size(); ++a) {
    g.rotation[g.arcs[a].tail].push_back(a);
    g.rotation[g.arcs[a].head].push_back(a);
  }
  const double diam = diameter(p);
  for (std::uint32_t v = 0; v < g.nodes.size(); ++v) {
    auto& rot = g.rotation[v];
    std::vector<double> angle(rot.size());
    for (std::size_t k = 0; k < rot.size(); ++k) {
      const SkeletonGraph::Arc& arc = g.arcs[rot[k]];
      const std::uint32_t other = arc.tail == v ? arc.head : arc.tail;
      const Vec2 d = g.nodes[other].pos - g.nodes[v].pos;
      if (norm(d) <= tol.eps(diam))
        return {std::nullopt, "skeleton arc with no planar extent"};
      angle[k] = norm_angle(angle_of(d));
    }
    std::vector<std::size_t> idx(rot.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return angle[a] < angle[b]; });
    std::vector<std::uint32_t> sorted(rot.size());
    for (std::size_t k = 0; k < idx.size(); ++k) sorted[k] = rot[idx[k]];
    rot = std::move(sorted);
  }
  return {std::move(g), ""};
}

WavefrontResult simulate_wavefront(const Polygon& p, double t, const Tolerance& tol) {
  if (t < 0) return {std::nullopt, "negative time"};
  Simulator sim(p, tol);
  if (!sim.init() || !sim.run(t)) return {std::nullopt, sim.error};

  std::vector<Polygon> fronts;
  std::vector<bool> seen(sim.verts.size(), false);
  for (std::uint32_t vi = 0; vi < sim.verts.size(); ++vi) {
    if (!sim.verts[vi].alive || seen[vi]) continue;
    // Start each loop at its lowest vertex id for a deterministic listing.
    std::uint32_t start = vi, w = vi;
    do {
      start = std::min(start, w);
      w = sim.verts[w].next;
    } while (w != vi);
    Polygon front;
    w = start;
    do {
      seen[w] = true;
      front.pts.push_back(sim.pos_at(sim.verts[w], t));
      w = sim.verts[w].next;
    } while (w != start);
    fronts.push_back(std::move(front));
  }
  return {std::move(fronts), ""};
}

DirectedOrderedTree directed_labeled_view(const SkeletonGraph& g) {
  DirectedOrderedTree t;
  t.names.reserve(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    t.names.push_back(i < g.leaf_count ? "v" + std::to_string(i)
                                       : "n" + std::to_string(i - g.leaf_count));
  t.arcs.reserve(g.arcs.size());
  for (const SkeletonGraph::Arc& a : g.arcs)
    t.arcs.push_back({a.tail, a.head, a.label});
  t.rotation = g.rotation;
  return t;
}

}  // namespace skeltree
