#include "skeltree/construct.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skeltree/skeleton.hpp"
#include "skeltree/verify.hpp"

namespace skeltree {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

/* All randomness is hashed from (style, node, salt): a build is a pure
 * function of the tree and the style index, so retries are reproducible. */
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double unit_jitter(std::uint32_t style, std::uint64_t node, std::uint64_t salt) {
  const std::uint64_t h =
      mix64((std::uint64_t(style) << 40) ^ (node << 8) ^ mix64(salt));
  return double(h >> 11) * 0x1.0p-53;
}

/* Wavefront edge line at time t: dot(n, x) = c0 + t with the un-swept
 * interior on the positive side.  Relative to any event the line passes
 * through, its position is determined by one angle: the direction of the
 * tangency point on the shrinking clearance circle, which is angle_of(-n). */
struct MovingLine {
  Vec2 n;
  double c0 = 0;
};

double tangency_angle(const MovingLine& l) { return norm_angle(angle_of(-l.n)); }

MovingLine line_from_tangency(Vec2 q, double tau, double phi) {
  const Vec2 n = -dir_of(phi);
  return {n, dot(n, q) - tau};
}

std::optional<Vec2> meet_at(const MovingLine& a, const MovingLine& b, double t,
                            const Tolerance& tol) {
  return intersect(Line{a.n, a.c0 + t}, Line{b.n, b.c0 + t}, tol);
}

/* Structural retry knobs decoded from the style index.  Jitter alone
 * cannot rescue a tree whose cluster spacing is infeasible under the
 * default proportions, so later styles shift the proportions themselves:
 * wider or narrower interior wedges, wider gaps beside each entry arc,
 * faster time decay down the tree. */
struct StyleKnobs {
  double interior_bias;  // dial offset widening descent-arc wedges
  double pocket_bias;    // same for ascent (pocket) wedges; negative narrows
  double rise;           // relative time gain of an ascent
  double flank_bias;     // widening for the gaps beside the entry arc
  double decay;          // extra factor on the convex descent ratio
};

constexpr std::uint32_t kStyleCount = 48;

/* A pocket cluster clears its parent's vertices in one of two ways: resolve
 * much later than the parent (wide pocket, big rise) or keep the pocket
 * wedge narrow, which forces the cluster's own outer steps toward pi.  The
 * style table covers both regimes plus the descent proportions. */
StyleKnobs style_knobs(std::uint32_t style) {
  constexpr double kBias[4] = {0.26, 0.42, 0.14, 0.55};
  constexpr double kPocketRise[4][2] = {
      {0.26, 0.12}, {0.26, 0.80}, {-0.32, 0.12}, {-0.10, 0.45}};
  constexpr double kFlankDecay[3][2] = {{0.16, 1.0}, {0.16, 0.62}, {0.0, 0.82}};
  const auto& pr = kPocketRise[(style / 4) % 4];
  const auto& fd = kFlankDecay[(style / 16) % 3];
  return {kBias[style % 4], pr[0], pr[1], fd[0], fd[1]};
}

/* One wedge step to fill in: the signed turn between two consecutive edge
 * tangencies around an event.  Incoming convex arcs step forward, incoming
 * reflex arcs backward; outgoing arcs flip sign because the far end reads
 * the flanks in swapped order. */
struct StepSlot {
  int sign = 1;
  std::optional<double> pin;  // exact signed value when preset
  double jitter = 0;          // per-slot offset on the shared dial
  double bias = 0;            // systematic offset (interior arcs run wide)
  double cap = kPi;           // hard magnitude ceiling (keeps tangents sane)
};

/* Chooses the free steps so everything sums to `total`, each step with the
 * slot's sign and magnitude in (margin, pi - margin).  All magnitudes ride
 * one dial (found by bisection) plus per-slot jitter, so symmetric nodes
 * still come out with distinct steps and no parallel edges. */
std::optional<std::vector<double>> allocate_signed(const std::vector<StepSlot>& slots,
                                                   double total, double margin) {
  std::vector<double> out(slots.size(), 0.0);
  double rest = total;
  std::size_t free_count = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i].pin) {
      ++free_count;
      continue;
    }
    const double p = *slots[i].pin;
    if (p * slots[i].sign <= 0) return std::nullopt;
    if (std::fabs(p) <= 1e-9 || std::fabs(p) >= kPi - 1e-9) return std::nullopt;
    out[i] = p;
    rest -= p;
  }
  if (free_count == 0) {
    if (std::fabs(rest) > 1e-9 * (1.0 + std::fabs(total))) return std::nullopt;
    return out;
  }
  auto value = [&](const StepSlot& s, double lam) {
    // turning the dial up grows positive steps and shrinks negative ones,
    // so the sum is monotone in lam
    const double u =
        std::clamp((s.sign > 0 ? lam : 1.0 - lam) + s.jitter + s.bias, 0.002, 0.998);
    const double top = std::min(s.cap, kPi - margin);
    return s.sign * (margin + u * std::max(top - margin, 0.0));
  };
  auto sum_at = [&](double lam) {
    double sum = 0;
    for (const auto& s : slots)
      if (!s.pin) sum += value(s, lam);
    return sum;
  };
  double lo = -0.8, hi = 1.8;
  if (rest < sum_at(lo) - 1e-12 || rest > sum_at(hi) + 1e-12) return std::nullopt;
  for (int iter = 0; iter < 100; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (sum_at(mid) < rest ? lo : hi) = mid;
  }
  const double lam = 0.5 * (lo + hi);
  const double off = rest - sum_at(lam);
  if (std::fabs(off) > 1e-9) return std::nullopt;
  for (std::size_t i = 0; i < slots.size(); ++i)
    if (!slots[i].pin) out[i] = value(slots[i], lam);
  // fold the bisection residue into one free slot so the sum is exact
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].pin) continue;
    const double fixed = out[i] + off;
    if (std::fabs(fixed) > margin && std::fabs(fixed) < kPi - margin) {
      out[i] = fixed;
      break;
    }
  }
  return out;
}

/* The polygon boundary in cyclic order: edge lines separated by gaps, one
 * gap per leaf.  A vertex is the time-0 meet of the lines flanking a gap. */
struct ChainItem {
  int line = -1;          // index into Engine::lines, or
  NodeId leaf = kNoNode;  // the leaf realized by this gap
};

/* Builds a witness polygon by placing tree events in the plane, root peak
 * first.  At each event the incident arcs get wedge steps that sum to a
 * full-turn multiple fixed by the event's shape; the flanking wavefront
 * lines then follow from the cumulative tangency angles.  Recursion walks
 * every arc once, descending to earlier events and ascending to later
 * ones, and emits the boundary chain in rotation order. */
struct Engine {
  const DirectedOrderedTree& t;
  const std::vector<ArcLabel>& labels;
  const std::map<ArcId, double>& pins;
  std::uint32_t style;
  StyleKnobs kn;
  Tolerance tol;

  std::vector<MovingLine> lines;
  std::vector<ChainItem> chain;
  std::vector<double> event_time;  // node id -> design time, -1 when unplaced
  std::vector<int> desc_memo, out_memo;
  double leaf_step_sum = 0;
  std::size_t gap_count = 0;
  double tau_root = 0;
  std::string fail;

  Engine(const DirectedOrderedTree& tree, const std::vector<ArcLabel>& lab,
         const std::map<ArcId, double>& pin, std::uint32_t sty)
      : t(tree),
        labels(lab),
        pins(pin),
        style(sty),
        kn(style_knobs(sty)),
        event_time(tree.node_count(), -1.0),
        desc_memo(tree.node_count(), -1),
        out_memo(tree.node_count(), -1) {}

  bool failed(const std::string& msg) {
    if (fail.empty()) fail = msg;
    return false;
  }

  int step_sign(NodeId u, ArcId a) const {
    const bool out = t.is_outgoing(a, u);
    const bool reflex = labels[a] == ArcLabel::Reflex;
    return (out == reflex) ? 1 : -1;
  }

  int desc_height(NodeId u) {
    if (desc_memo[u] >= 0) return desc_memo[u];
    int h = 0;
    for (ArcId a : t.rotation[u])
      if (!t.is_outgoing(a, u) && !t.is_leaf(t.arcs[a].tail))
        h = std::max(h, 1 + desc_height(t.arcs[a].tail));
    return desc_memo[u] = h;
  }

  int out_height(NodeId u) {
    if (out_memo[u] >= 0) return out_memo[u];
    int h = 0;
    for (ArcId a : t.rotation[u])
      if (t.is_outgoing(a, u)) h = std::max(h, 1 + out_height(t.arcs[a].head));
    return out_memo[u] = h;
  }

  int new_line(const MovingLine& m) {
    lines.push_back(m);
    return int(lines.size()) - 1;
  }

  /* Local rotation check: with the candidate steps, the directions in
   * which the arcs leave the event must run counterclockwise in the same
   * order as the node's rotation. */
  bool rotation_matches(NodeId u, const std::vector<ArcId>& local,
                        const std::vector<double>& steps) const {
    const std::size_t k = local.size();
    std::vector<double> theta(k);
    double cum = 0;  // tangency of the flank before slot i, relative to e_0
    for (std::size_t i = 0; i < k; ++i) {
      // slot i sits between flanks e_{i-1} and e_i; an arc's trace runs
      // along the mid direction, away from the event for outgoing arcs
      const double mid = i == 0 ? -steps[0] / 2 : cum + steps[i] / 2;
      theta[i] = mid + (t.is_outgoing(local[i], u) ? kPi : 0.0);
      if (i > 0) cum += steps[i];
    }
    double prev = 0;
    for (std::size_t i = 1; i < k; ++i) {
      const double off = norm_angle(theta[i] - theta[0]);
      if (off < prev + 1e-6 || off > kTwoPi - 1e-6) return false;
      prev = off;
    }
    return true;
  }

  /* Picks wedge steps for the non-arrival slots of u.  The winding (sum of
   * all steps over 2*pi) is forced to 1 at peaks; otherwise the natural
   * candidate is 1 - out_degree, with its neighbors as fallbacks, and a
   * failed choice surfaces when the leaf steps do not close up. */
  bool choose_steps(NodeId u, const std::vector<ArcId>& local, bool root,
                    double s_arr, std::vector<double>& steps) {
    const std::size_t k = local.size();
    const std::size_t first = root ? 0 : 1;
    std::vector<StepSlot> slots(k - first);
    for (std::size_t i = first; i < k; ++i) {
      StepSlot& s = slots[i - first];
      s.sign = step_sign(u, local[i]);
      // a node owing extra winding would otherwise push its negative
      // wedges against a half turn, where the vertex spill tan(|s|/2)
      // blows up faster than any event time can compensate
      if (s.sign < 0 && t.out_degree(u) >= 2) s.cap = kPi - 0.18;
      // arcs to interior nodes take tuned wedges: a wide descent wedge
      // pushes the subtree cluster far out along the shared flank lines,
      // ahead of this node's own gap vertices in boundary order, while a
      // pocket (ascent) wedge follows the style's clearing strategy
      if (const NodeId v = t.other_end(local[i], u); !t.is_leaf(v)) {
        s.bias = t.is_outgoing(local[i], u) ? kn.pocket_bias : kn.interior_bias;
        // a split child must fit a whole extra turn of winding into its
        // slot, so give it as much room as the allocation allows
        if (!t.is_outgoing(local[i], u) && t.out_degree(v) >= 2) s.bias += 0.3;
      }
      // a reflex gap next to a pocket eats the clearance the pocket's
      // cluster needs on the shared line, so keep reflex leaf gaps shallow
      else if (s.sign < 0)
        s.bias = -0.15;
      // the first and last emitted gaps put vertices on the shared entry
      // flanks, where they must outrun the parent's own vertices: widen
      // them when convex, and keep them shallow when reflex
      if (!root && (i == 1 || i == k - 1))
        s.bias += s.sign > 0 ? kn.flank_bias : -0.75 * kn.flank_bias;
      if (auto it = pins.find(local[i]); it != pins.end()) {
        if (it->second * s.sign <= 0)
          return failed("pinned step has the wrong sign at " + t.names[u]);
        s.pin = it->second;
      }
    }
    std::vector<int> windings;
    if (t.out_degree(u) == 0) {
      windings = {1};
    } else {
      const int p = 1 - int(t.out_degree(u));
      windings = {p, p - 1, p + 1};
    }
    constexpr double kMargin[8] = {0.10, 0.06, 0.02,  0.02,
                                   0.004, 0.004, 0.02, 0.004};
    constexpr double kAmp[8] = {0.22, 0.22, 0.34, 0.12, 0.30, 0.45, 0.60, 0.80};
    for (int w : windings) {
      for (int attempt = 0; attempt < 8; ++attempt) {
        for (std::size_t i = 0; i < slots.size(); ++i)
          slots[i].jitter =
              kAmp[attempt] *
              (2.0 * unit_jitter(style, u, 101 + 16 * i + 977 * attempt + 7919 * (w + 8)) -
               1.0);
        auto got = allocate_signed(slots, kTwoPi * w - (root ? 0.0 : s_arr),
                                   kMargin[attempt]);
        if (!got) continue;
        steps.assign(k, 0.0);
        if (!root) steps[0] = s_arr;
        for (std::size_t i = first; i < k; ++i) steps[i] = (*got)[i - first];
        if (rotation_matches(u, local, steps)) return true;
      }
    }
    return failed("sector packing infeasible at node " + t.names[u]);
  }

  std::vector<ArcId> local_order(NodeId u, ArcId arrival) const {
    const auto& rot = t.rotation[u];
    std::size_t at = 0;
    for (std::size_t i = 0; i < rot.size(); ++i)
      if (rot[i] == arrival) at = i;
    std::vector<ArcId> local(rot.size());
    for (std::size_t i = 0; i < rot.size(); ++i)
      local[i] = rot[(at + i) % rot.size()];
    return local;
  }

  /* Runs the child's step allocation ahead of time (it is deterministic
   * and does not depend on event times) to learn how far its first and
   * last wedges spread; place() sizes the child's event time against
   * them.  The later real allocation repeats this choice exactly. */
  bool peek_extremes(NodeId v, ArcId arrival, double s_arr, double& first_step,
                     double& last_step) {
    const std::vector<ArcId> local = local_order(v, arrival);
    std::vector<double> steps;
    if (!choose_steps(v, local, false, s_arr, steps)) return false;
    first_step = steps[1];
    last_step = steps[local.size() - 1];
    return true;
  }

  bool realize(NodeId u, ArcId arrival, int line_l, int line_r, double s_arr,
               double tau);

  /* Lays out one event: allocate steps, create the interior flank lines,
   * then walk the non-arrival slots emitting leaf gaps and recursing into
   * interior neighbors.  The flanks hand off swapped (the neighbor's
   * before-flank is our after-flank) with the step negated. */
  bool place(NodeId u, const std::vector<ArcId>& local, bool root, double s_arr,
             double phi0, Vec2 q, double tau, int line_l, int line_r) {
    const std::size_t k = local.size();
    std::vector<double> steps;
    if (!choose_steps(u, local, root, s_arr, steps)) return false;

    if (std::getenv("SKELTREE_STEPS")) {
      std::fprintf(stderr, "style %u node %s tau %.6g q(%.6g,%.6g) steps",
                   style, t.names[u].c_str(), tau, q.x, q.y);
      for (double s : steps) std::fprintf(stderr, " %.4g", s);
      std::fprintf(stderr, "\n");
    }
    std::vector<int> eid(k, -1);  // flank e_i between local[i] and local[i+1]
    if (!root) {
      eid[0] = line_r;
      eid[k - 1] = line_l;
    } else {
      eid[0] = new_line(line_from_tangency(q, tau, norm_angle(phi0)));
    }
    double cum = phi0;
    const std::size_t last_new = root ? k - 1 : k - 2;
    for (std::size_t i = 1; i <= last_new; ++i) {
      cum += steps[i];
      eid[i] = new_line(line_from_tangency(q, tau, norm_angle(cum)));
    }
    for (std::size_t i = root ? 0 : 1; i < k; ++i) {
      const ArcId a = local[i];
      const NodeId v = t.other_end(a, u);
      const int before = eid[(i + k - 1) % k];
      const int after = eid[i];
      if (t.is_leaf(v)) {
        if (t.is_outgoing(a, u))
          return failed("arc into a leaf at " + t.names[u]);
        chain.push_back({-1, v});
        leaf_step_sum += steps[i];
        ++gap_count;
      } else {
        /* The child's cluster hangs off the sliding corner of this wedge.
         * On each shared flank, the corner drifts (tau - tv)*tan(s/2) from
         * the tangency and the child's outermost vertex spills a further
         * tv*tan(|child step|/2), while the neighbouring gap's own vertex
         * sits tau*tan(s_adj/2) out.  Both clearance conditions are linear
         * in x = tv/tau, so they bound the usable time ratio directly. */
        double cf = 0, cl = 0;  // child's first and last free steps
        if (!peek_extremes(v, a, -steps[i], cf, cl)) return false;
        auto half_tan = [](double sv) {
          return std::tan(std::clamp(sv, -(kPi - 0.02), kPi - 0.02) / 2);
        };
        const double t_s = half_tan(steps[i]);
        auto adj_tan = [&](std::size_t j) {
          if (!root && j == 0) return 0.0;  // edges by the arrival wedge
                                            // are the parent's concern
          const double tj = half_tan(steps[j]);
          // an interior neighbour's cluster nests near its own corner and
          // claims part of the spacing, so count only half its reach
          return t.is_leaf(t.other_end(local[j], u)) ? tj : 0.45 * tj;
        };
        double x_lo = 2e-4, x_hi = 1e9;
        auto bound = [&](double t_child, double t_adj) {
          const double c = t_child - t_s, b = t_s + t_adj;
          if (c > 1e-6) x_lo = std::max(x_lo, -b / c);
          else if (c < -1e-6) x_hi = std::min(x_hi, b / -c);
          // near-zero coefficient: clearance is fixed; checks catch b <= 0
        };
        bound(half_tan(cf), adj_tan((i + k - 1) % k));
        bound(half_tan(cl), adj_tan((i + 1) % k));
        double x;
        if (t.is_outgoing(a, u)) {
          // ascend: the head resolves later, by the style's rise spread
          // over the remaining chain unless the bounds demand more
          x = 1.0 + (kn.rise + 0.12 * unit_jitter(style, v, 5)) /
                        std::max(1, out_height(u));
          x = std::max({x, 1.0005, 1.1 * x_lo + 0.01});
          if (x_hi < 1e8) x = std::min(x, std::max(0.9 * x_hi, 1.0005));
        } else {
          if (labels[a] == ArcLabel::Reflex) {
            // reflex descent: the subtree hangs past the phantom corner;
            // keep it tiny and early so it stays near the corner instead
            // of reaching back across the parent's features
            x = 0.08 + 0.06 * unit_jitter(style, v, 7);
          } else {
            // descend: deeper subtrees get proportionally earlier times
            const int h = desc_height(v);
            x = kn.decay *
                ((h + 0.7 + 0.5 * unit_jitter(style, v, 6)) / (h + 2.2));
          }
          if (x_hi < 1e8) x = std::min(x, 0.85 * x_hi);
          x = std::max({x, 2e-4, 1.1 * x_lo + 1e-4});
          x = std::min(x, 0.995);
        }
        if (!realize(v, a, after, before, -steps[i], tau * x)) return false;
      }
      if (root || i + 1 < k) chain.push_back({after, kNoNode});
    }
    return true;
  }

  NodeId pick_root() const {
    NodeId best = kNoNode;
    std::size_t best_size = 0;
    for (NodeId u = 0; u < t.node_count(); ++u) {
      if (t.is_leaf(u) || t.out_degree(u) != 0) continue;
      std::vector<NodeId> stack{u};
      std::vector<char> seen(t.node_count(), 0);
      seen[u] = 1;
      std::size_t count = 0;
      while (!stack.empty()) {
        const NodeId x = stack.back();
        stack.pop_back();
        ++count;
        for (ArcId a : t.rotation[x])
          if (!t.is_outgoing(a, x) && !seen[t.arcs[a].tail]) {
            seen[t.arcs[a].tail] = 1;
            stack.push_back(t.arcs[a].tail);
          }
      }
      if (best == kNoNode || count > best_size) {
        best = u;
        best_size = count;
      }
    }
    return best;
  }

  bool build() {
    const NodeId root = pick_root();
    if (root == kNoNode) return failed("tree has no peak");
    tau_root = 0.55 + 0.08 * unit_jitter(style, root, 1);
    const double phi0 = kTwoPi * unit_jitter(style, root, 2);
    event_time[root] = tau_root;
    const auto& rot = t.rotation[root];
    if (rot.size() < 3) return failed("peak of degree < 3");
    const std::vector<ArcId> local(rot.begin(), rot.end());
    if (!place(root, local, true, 0.0, phi0, Vec2{0, 0}, tau_root, -1, -1))
      return false;

    std::size_t leaves = 0;
    for (NodeId u = 0; u < t.node_count(); ++u)
      if (t.is_leaf(u)) ++leaves;
    if (gap_count != leaves)
      return failed("internal: boundary gap count mismatch");
    if (std::fabs(leaf_step_sum - kTwoPi) > 1e-7)
      return failed("leaf steps do not close up (winding mismatch)");

    std::vector<double> times;
    for (NodeId u = 0; u < t.node_count(); ++u)
      if (event_time[u] >= 0) times.push_back(event_time[u]);
    std::sort(times.begin(), times.end());
    for (std::size_t i = 1; i < times.size(); ++i)
      if (times[i] - times[i - 1] < 1e-6 * tau_root)
        return failed("event times too close together");
    return true;
  }

  std::optional<Polygon> extract(std::vector<NodeId>& leaf_map) {
    const std::size_t m = chain.size();
    if (m == 0 || m % 2 != 0) {
      failed("internal: boundary chain malformed");
      return std::nullopt;
    }
    Polygon p;
    for (std::size_t i = 0; i < m; i += 2) {
      if (chain[i].leaf == kNoNode || chain[i + 1].line < 0) {
        failed("internal: boundary chain does not alternate");
        return std::nullopt;
      }
      const int before = chain[(i + m - 1) % m].line;
      const int after = chain[i + 1].line;
      const auto v = meet_at(lines[before], lines[after], 0.0, tol);
      if (!v) {
        failed("parallel edges flank a vertex");
        return std::nullopt;
      }
      p.pts.push_back(*v);
      leaf_map.push_back(chain[i].leaf);
    }
    // every edge must run along its line's canonical direction (interior
    // on the left); a backward edge means some cluster landed out of order
    for (std::size_t g = 0; g < p.size(); ++g) {
      const Vec2 n = lines[chain[2 * g + 1].line].n;
      if (dot(p.at(g + 1) - p.pts[g], Vec2{n.y, -n.x}) <= 0) {
        if (std::getenv("SKELTREE_DUMP")) {
          const NodeId la = chain[2 * g].leaf;
          const NodeId lb = chain[(2 * g + 2) % m].leaf;
          auto parent_of = [&](NodeId leaf) {
            return t.other_end(t.rotation[leaf][0], leaf);
          };
          const NodeId pa = parent_of(la), pb = parent_of(lb);
          std::fprintf(stderr,
                       "style %u backward edge: leaf %s (of %s, t=%.4g) -> "
                       "leaf %s (of %s, t=%.4g) overlap %.4g  A(%.6g,%.6g) "
                       "B(%.6g,%.6g) n(%.6g,%.6g)\n",
                       style, t.names[la].c_str(), t.names[pa].c_str(),
                       event_time[pa], t.names[lb].c_str(),
                       t.names[pb].c_str(), event_time[pb],
                       dot(p.at(g + 1) - p.pts[g], Vec2{n.y, -n.x}),
                       p.pts[g].x, p.pts[g].y, p.at(g + 1).x, p.at(g + 1).y,
                       n.x, n.y);
        }
        failed("edge runs backward on its line");
        return std::nullopt;
      }
    }
    return p;
  }
};

bool Engine::realize(NodeId u, ArcId arrival, int line_l, int line_r,
                     double s_arr, double tau) {
  const std::size_t k = t.degree(u);
  if (k < 3)
    return failed("interior node of degree " + std::to_string(k) + ": " + t.names[u]);
  if (event_time[u] >= 0) return failed("internal: node visited twice");
  event_time[u] = tau;

  const auto q = meet_at(lines[line_l], lines[line_r], tau, tol);
  if (!q) return failed("parallel flanks at " + t.names[u]);

  const std::vector<ArcId> local = local_order(u, arrival);
  if (local[0] != arrival)
    return failed("internal: arrival arc missing from rotation");

  const double phi0 = tangency_angle(lines[line_r]);
  if (std::fabs(std::remainder(tangency_angle(lines[line_l]) + s_arr - phi0,
                               kTwoPi)) > 1e-6)
    return failed("internal: flank tangencies disagree with the arrival step");
  if (s_arr * step_sign(u, arrival) <= 0)
    return failed("internal: arrival step sign mismatch at " + t.names[u]);

  return place(u, local, false, s_arr, phi0, *q, tau, line_l, line_r);
}

/* Runs the engine over styles until a candidate polygon passes every gate:
 * well-formed, regime-appropriate, and with a skeleton isomorphic to the
 * input tree at the requested level. */
Realization engine_build(const DirectedOrderedTree& tree, Regime regime,
                         IsoLevel level, const std::map<ArcId, double>& pins) {
  const auto labels = effective_labels(tree);
  if (!labels || labels->size() != tree.arc_count())
    throw std::invalid_argument("tree admits no arc labeling");
  const Tolerance tol;
  std::string notes;
  auto note = [&](std::uint32_t style, const std::string& msg) {
    if (notes.size() > 500) return;
    notes += "\n  style " + std::to_string(style) + ": " + msg;
  };
  for (std::uint32_t style = 0; style < kStyleCount; ++style) {
    Engine eng(tree, *labels, pins, style);
    if (!eng.build()) {
      note(style, eng.fail);
      continue;
    }
    std::vector<NodeId> leaf_map;
    auto raw = eng.extract(leaf_map);
    if (!raw) {
      note(style, eng.fail);
      continue;
    }
    Polygon p;
    try {
      p = normalized_to_unit(*raw);
    } catch (const std::invalid_argument& e) {
      note(style, e.what());
      continue;
    }
    if (auto flaw = polygon_flaw(p, tol)) {
      note(style, *flaw);
      continue;
    }
    if (has_parallel_edges(p, tol)) {
      note(style, "parallel edges");
      continue;
    }
    if (regime == Regime::GeneralPosition && !in_general_position(p, tol)) {
      note(style, "not in general position");
      continue;
    }
    auto sk = compute_skeleton(p, tol);
    if (!sk.ok()) {
      if (std::getenv("SKELTREE_DUMP")) {
        std::fprintf(stderr, "style %u skeleton fail: %s\n", style,
                     sk.error.c_str());
        for (const Vec2& v : p.pts)
          std::fprintf(stderr, "%.17g %.17g\n", v.x, v.y);
      }
      note(style, "skeleton: " + sk.error);
      continue;
    }
    if (!isomorphic(tree, directed_labeled_view(*sk.graph), level, false)) {
      note(style, "skeleton does not match the tree");
      continue;
    }
    return Realization{std::move(p), std::move(leaf_map), regime};
  }
  throw std::runtime_error("witness construction failed for every style:" + notes);
}

void require_clean(const std::vector<Violation>& report, const char* what) {
  if (report.empty()) return;
  std::string msg = std::string("tree rejected for the ") + what + " regime:";
  for (std::size_t i = 0; i < report.size() && i < 4; ++i)
    msg += std::string(" [") + to_string(report[i].code) + "] " + report[i].detail;
  throw std::invalid_argument(msg);
}

std::size_t vertex_of_leaf(const Realization& r, NodeId leaf) {
  std::size_t at = r.leaf_map.size();
  for (std::size_t i = 0; i < r.leaf_map.size(); ++i)
    if (r.leaf_map[i] == leaf) {
      if (at != r.leaf_map.size())
        throw std::invalid_argument("leaf realized by more than one vertex");
      at = i;
    }
  if (at == r.leaf_map.size())
    throw std::invalid_argument("leaf is not realized by any vertex");
  return at;
}

double first_interior_event(const Polygon& p, const Tolerance& tol,
                            std::string* err) {
  auto sk = compute_skeleton(p, tol);
  if (!sk.ok()) {
    if (err) *err = sk.error;
    return -1;
  }
  double t1 = std::numeric_limits<double>::infinity();
  for (std::size_t i = sk.graph->leaf_count; i < sk.graph->nodes.size(); ++i)
    t1 = std::min(t1, sk.graph->nodes[i].time);
  return t1;
}

double seg_dist(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = norm2(ab);
  const double t = len2 > 0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return norm(p - (a + t * ab));
}

/* Pins for an angle constraint: the leaf's own step is pi - alpha, and the
 * spine up to the peak is pinned so that large step stays reachable.  On a
 * caterpillar the side leaves get a concave difference series (so their
 * angles increase strictly toward the constrained leaf); otherwise each
 * spine node just reserves half the remaining headroom for its side arc. */
std::map<ArcId, double> constraint_pins(const DirectedOrderedTree& tree,
                                        const AngleConstraint& c) {
  if (c.leaf >= tree.node_count() || tree.degree(c.leaf) != 1)
    throw std::invalid_argument("angle constraint names a non-leaf");
  if (!(c.alpha > 1e-6 && c.alpha < kPi - 1e-6))
    throw std::invalid_argument("constraint angle must lie strictly in (0, pi)");

  std::map<ArcId, double> pins;
  const ArcId leaf_arc = tree.rotation[c.leaf][0];
  pins[leaf_arc] = kPi - c.alpha;

  std::vector<NodeId> path;      // constrained leaf's parent, then upward
  std::vector<ArcId> side_arcs;  // the other incoming arc per path node
  std::vector<ArcId> up_arcs;    // the outgoing arc per path node
  ArcId from = leaf_arc;
  NodeId u = tree.arcs[leaf_arc].head;
  bool caterpillar = true;
  while (classify_node(tree, u) == NodeClass::Collapse) {
    ArcId side = kNoArc, up = kNoArc;
    for (ArcId a : tree.rotation[u]) {
      if (tree.is_outgoing(a, u)) up = a;
      else if (a != from) side = a;
    }
    path.push_back(u);
    side_arcs.push_back(side);
    up_arcs.push_back(up);
    if (!tree.is_leaf(tree.arcs[side].tail)) caterpillar = false;
    from = up;
    u = tree.arcs[up].head;
  }

  const std::size_t m = path.size();
  double climb = kPi - c.alpha;  // step pinned on the spine arc above
  if (caterpillar) {
    auto series = [&](std::size_t i) {
      return c.alpha * std::pow(double(i) / double(m + 1), 0.85);
    };
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t i = m - j;  // distance of path[j] from the peak
      const double delta = series(i + 1) - series(i);
      pins[side_arcs[j]] = delta;
      climb += delta;
      pins[up_arcs[j]] = climb;
    }
  } else {
    for (std::size_t j = 0; j < m; ++j) {
      const double headroom = kPi - 0.03 - climb;
      if (headroom <= 1e-4)
        throw std::runtime_error("angle constraint leaves no room on the spine");
      climb += std::min(0.4, 0.5 * headroom);
      pins[up_arcs[j]] = climb;
    }
  }
  return pins;
}

}  // namespace

Realization build_splitfree(const DirectedOrderedTree& tree,
                            std::optional<AngleConstraint> constraint) {
  require_clean(check_general(tree), "general-position");
  for (NodeId u = 0; u < tree.node_count(); ++u)
    if (classify_node(tree, u) == NodeClass::Split)
      throw std::invalid_argument("tree has a split node: " + tree.names[u]);

  std::map<ArcId, double> pins;
  if (constraint) pins = constraint_pins(tree, *constraint);

  Realization r =
      engine_build(tree, Regime::GeneralPosition, IsoLevel::Directed, pins);
  for (std::size_t i = 0; i < r.polygon.size(); ++i)
    if (interior_angle(r.polygon, i) >= kPi - 1e-9)
      throw std::runtime_error("internal: split-free witness is not convex");
  if (constraint) {
    const std::size_t idx = vertex_of_leaf(r, constraint->leaf);
    if (std::fabs(interior_angle(r.polygon, idx) - constraint->alpha) > 1e-6)
      throw std::runtime_error("internal: constrained angle missed");
  }
  return r;
}

Realization build_general_position(const DirectedOrderedTree& tree) {
  require_clean(check_general(tree), "general-position");
  return engine_build(tree, Regime::GeneralPosition, IsoLevel::Directed, {});
}

Realization build_labeled(const DirectedOrderedTree& tree) {
  require_clean(check_labeled(tree), "labeled");
  return engine_build(tree, Regime::LabeledDeg3, IsoLevel::DirectedLabeled, {});
}

Realization build_arbitrary(const DirectedOrderedTree& tree) {
  require_clean(check_arbitrary(tree), "arbitrary");
  return engine_build(tree, Regime::Arbitrary, IsoLevel::DirectedLabeledOrdered, {});
}

Realization expand_leaf(const Realization& r, NodeId leaf,
                        std::pair<double, double> new_angles) {
  const Tolerance tol;
  const std::size_t idx = vertex_of_leaf(r, leaf);
  const Polygon& p = r.polygon;
  const std::size_t n = p.size();
  const double theta = interior_angle(p, idx);
  if (theta >= kPi - 1e-9)
    throw std::invalid_argument("expand_leaf: vertex is not convex");
  const double ta = new_angles.first;
  if (!(ta > theta + 1e-9 && ta < kPi - 1e-9))
    throw std::invalid_argument("expand_leaf: first angle outside (theta, pi)");
  const double tb = kPi + theta - ta;  // the geometry forces the sum
  if (std::fabs(new_angles.second - tb) > 1e-6)
    throw std::invalid_argument(
        "expand_leaf: angles must sum to pi plus the old angle");
  if (!(tb > theta + 1e-9 && tb < kPi - 1e-9))
    throw std::invalid_argument("expand_leaf: second angle outside (theta, pi)");

  std::string err;
  const double t1 = first_interior_event(p, tol, &err);
  if (t1 <= 0)
    throw std::runtime_error("expand_leaf: input skeleton failed: " + err);

  double d = 0.25 * std::min(t1, min_edge_length(p));
  for (int tries = 0; tries < 60; ++tries, d *= 0.5) {
    Polygon q;
    try {
      q = exterior_offset(p, d);
    } catch (const std::invalid_argument&) {
      continue;
    }
    const Vec2 v = q.pts[idx];
    const Vec2 before = q.at(idx + n - 1), after = q.at(idx + 1);
    const Vec2 u_in = normalized(v - before), u_out = normalized(after - v);
    // cut length chosen so the new edge collapses at time d/2, recreating
    // the original wedge vertex strictly before any prior event (>= d)
    const double cut =
        (d / 2) * (1.0 / std::tan(ta / 2) + 1.0 / std::tan(tb / 2));
    const double sa = cut * std::sin(tb) / std::sin(theta);
    const double sb = cut * std::sin(ta) / std::sin(theta);
    if (sa > 0.45 * norm(v - before) || sb > 0.45 * norm(after - v)) continue;
    Polygon out;
    out.pts = q.pts;
    out.pts[idx] = v - sa * u_in;
    out.pts.insert(out.pts.begin() + idx + 1, v + sb * u_out);
    if (polygon_flaw(out, tol) || has_parallel_edges(out, tol)) continue;
    const double tfirst = first_interior_event(out, tol, nullptr);
    if (!(std::fabs(tfirst - d / 2) <= 1e-6 * d)) continue;
    NodeId fresh = 0;
    for (NodeId x : r.leaf_map) fresh = std::max(fresh, x + 1);
    std::vector<NodeId> map2;
    map2.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == idx) map2.push_back(leaf);
      else if (i == idx + 1) map2.push_back(fresh);
      else map2.push_back(r.leaf_map[i <= idx ? i : i - 1]);
    }
    return Realization{normalized_to_unit(out), std::move(map2), r.regime};
  }
  throw std::runtime_error("expand_leaf: no cut size fit");
}

Realization insert_zshape(const Realization& r, NodeId leaf,
                          std::pair<ArcLabel, ArcLabel> labels) {
  if ((labels.first == ArcLabel::Reflex) == (labels.second == ArcLabel::Reflex))
    throw std::invalid_argument(
        "insert_zshape: exactly one endpoint must be reflex");
  const Tolerance tol;
  const std::size_t idx = vertex_of_leaf(r, leaf);
  const Polygon& p = r.polygon;
  const std::size_t n = p.size();
  const double theta = interior_angle(p, idx);
  if (theta >= kPi - 1e-9)
    throw std::invalid_argument("insert_zshape: vertex is not convex");

  std::string err;
  const double t1 = first_interior_event(p, tol, &err);
  if (t1 <= 0)
    throw std::runtime_error("insert_zshape: input skeleton failed: " + err);

  double d = 0.25 * std::min(t1, min_edge_length(p));
  double notch = std::min(0.35, 0.45 * theta);
  for (int tries = 0; tries < 60; ++tries, d *= 0.5, notch *= 0.75) {
    Polygon q;
    try {
      q = exterior_offset(p, d);
    } catch (const std::invalid_argument&) {
      continue;
    }
    const Vec2 v = q.pts[idx];
    const Vec2 before = q.at(idx + n - 1), after = q.at(idx + 1);
    const Line l1 = line_through(before, v), l2 = line_through(v, after);
    const MovingLine e1{l1.n, l1.c}, e2{l2.n, l2.c};
    // design the collapse locally: the new edge is tangent to the clearance
    // circle of the point where the old wedge vertex sits at time d/2
    const double tc = d / 2;
    const auto x = meet_at(e1, e2, tc, tol);
    if (!x) continue;
    const double phi1 = tangency_angle(e1);
    const double wedge = norm_angle(tangency_angle(e2) - phi1);
    const double phiz = labels.first == ArcLabel::Reflex
                            ? phi1 - notch
                            : phi1 + wedge + notch;
    const MovingLine ez = line_from_tangency(*x, tc, norm_angle(phiz));
    const auto w1 = meet_at(e1, ez, 0.0, tol);
    const auto w2 = meet_at(ez, e2, 0.0, tol);
    if (!w1 || !w2) continue;
    Polygon out;
    out.pts = q.pts;
    out.pts[idx] = *w1;
    out.pts.insert(out.pts.begin() + idx + 1, *w2);
    if (polygon_flaw(out, tol) || has_parallel_edges(out, tol)) continue;
    const double tfirst = first_interior_event(out, tol, nullptr);
    if (!(std::fabs(tfirst - tc) <= 1e-6 * d)) continue;
    NodeId fresh = 0;
    for (NodeId y : r.leaf_map) fresh = std::max(fresh, y + 1);
    std::vector<NodeId> map2;
    map2.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == idx) map2.push_back(leaf);
      else if (i == idx + 1) map2.push_back(fresh);
      else map2.push_back(r.leaf_map[i <= idx ? i : i - 1]);
    }
    return Realization{normalized_to_unit(out), std::move(map2),
                       Regime::LabeledDeg3};
  }
  throw std::runtime_error("insert_zshape: no notch fit");
}

Realization merge_at_split(const Realization& parent, const Realization& child,
                           const SplitJoin& join) {
  if (join.out_arcs.size() != 2 || join.in_arcs.size() != 1 ||
      join.in_arcs[0].dropped_leaf == kNoNode)
    throw std::invalid_argument("merge_at_split: join is not a degree-3 split");
  const Tolerance tol;
  const std::size_t i1 = vertex_of_leaf(parent, join.node);
  const std::size_t i2 = vertex_of_leaf(child, join.node);
  const Polygon& p1 = parent.polygon;
  const Polygon& p2 = child.polygon;
  const std::size_t n1 = p1.size(), n2 = p2.size();
  const double a1 = interior_angle(p1, i1);
  const double a2 = interior_angle(p2, i2);
  if (a1 >= kPi - 1e-9 || a2 >= kPi - 1e-9)
    throw std::invalid_argument(
        "merge_at_split: substitute vertices must be convex");
  if (a1 + a2 >= kPi - 1e-6)
    throw std::invalid_argument(
        "merge_at_split: child angle too large for the split");

  const Vec2 v1 = p1.pts[i1];
  double clear = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < n1; ++e) {
    if (e == i1 || (e + 1) % n1 == i1) continue;
    clear = std::min(clear, seg_dist(v1, p1.at(e), p1.at(e + 1)));
  }
  const double scale = clear / (8.0 * diameter(p2));
  const Vec2 u_in = normalized(v1 - p1.at(i1 + n1 - 1));
  const Vec2 u_out = normalized(p2.at(i2 + 1) - p2.pts[i2]);
  const double spin = angle_of(u_in) - angle_of(u_out);

  // pinched union: the child hangs off the extension of the parent's
  // incoming edge, and the two substitute vertices fuse into one reflex
  // corner (vertex 0), which the exterior offset then opens up
  Polygon u;
  std::vector<NodeId> map2;
  u.pts.push_back(v1);
  map2.push_back(join.in_arcs[0].dropped_leaf);
  for (std::size_t j = 1; j < n1; ++j) {
    u.pts.push_back(p1.at(i1 + j));
    map2.push_back(parent.leaf_map[(i1 + j) % n1]);
  }
  for (std::size_t j = 1; j < n2; ++j) {
    u.pts.push_back(v1 + scale * rotate(p2.at(i2 + j) - p2.pts[i2], spin));
    map2.push_back(child.leaf_map[(i2 + j) % n2]);
  }

  // feature gap of the union, ignoring the deliberate pinch pair
  const std::size_t n = u.pts.size();
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < n; ++e) gap = std::min(gap, norm(u.edge_vec(e)));
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t e = 0; e < n; ++e) {
      if (e == w || (e + 1) % n == w) continue;
      if (w == 0 && e == n1 - 1) continue;
      gap = std::min(gap, seg_dist(u.pts[w], u.at(e), u.at(e + 1)));
    }

  double d = 0.25 * gap;
  for (int tries = 0; tries < 60; ++tries, d *= 0.5) {
    Polygon out;
    try {
      out = exterior_offset(u, d);
    } catch (const std::invalid_argument&) {
      continue;
    }
    if (polygon_flaw(out, tol) || has_parallel_edges(out, tol)) continue;
    if (!compute_skeleton(out, tol).ok()) continue;
    return Realization{normalized_to_unit(out), std::move(map2), parent.regime};
  }
  throw std::runtime_error("merge_at_split: no offset fit");
}

Realization map_leaves_to_original(const Realization& r,
                                   const SplitComponent& component) {
  Realization out = r;
  for (NodeId& v : out.leaf_map) {
    if (v >= component.node_to_original.size())
      throw std::invalid_argument(
          "map_leaves_to_original: leaf id outside the component");
    v = component.node_to_original[v];
  }
  return out;
}

}  // namespace skeltree
