#include "skeltree/generate.hpp"

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace skeltree {

namespace {

/* Leaf-expansion grower.  Every op replaces an open leaf with an
 * interior node whose cyclic signature is valid for the regime, hanging
 * fresh leaves (and fresh peak subtrees for extra out-arcs) off it, so
 * the whole tree stays validator-clean at every step. */
struct Grower {
  DirectedOrderedTree t;
  std::mt19937_64 rng;
  const GeneratorSpec& spec;
  const bool with_labels;
  std::vector<NodeId> open;  // leaves that may still be expanded

  explicit Grower(const GeneratorSpec& s)
      : rng(s.seed), spec(s), with_labels(s.regime != Regime::GeneralPosition) {}

  double u01() { return double(rng() >> 11) * 0x1.0p-53; }
  bool coin(double p) { return u01() < p; }
  std::size_t pick(std::size_t n) { return std::size_t(rng() % n); }

  std::size_t budget_left() const {
    return spec.node_budget - t.node_count();
  }

  NodeId fresh_node() {
    const NodeId id = static_cast<NodeId>(t.names.size());
    t.names.push_back("v" + std::to_string(id));
    t.rotation.emplace_back();
    return id;
  }

  ArcId fresh_arc(NodeId tail, NodeId head, ArcLabel lab) {
    const ArcId id = static_cast<ArcId>(t.arcs.size());
    Arc a;
    a.tail = tail;
    a.head = head;
    if (with_labels) a.label = lab;
    t.arcs.push_back(a);
    return id;
  }

  /* Fresh leaf with an arc into `head`; open unless locked. */
  ArcId grow_leaf(NodeId head, ArcLabel lab, bool lock = false) {
    const NodeId leaf = fresh_node();
    const ArcId a = fresh_arc(leaf, head, lab);
    t.rotation[leaf].push_back(a);
    if (!lock) open.push_back(leaf);
    return a;
  }

  /* Fresh peak subtree fed by an arc out of `tail`.  Plain peaks take
   * two extra convex leaves; with remaining budget the arbitrary regime
   * sometimes grows a full-wedge peak with one reflex feeder instead. */
  ArcId grow_peak(NodeId tail) {
    const NodeId p = fresh_node();
    const ArcId in = fresh_arc(tail, p, ArcLabel::Convex);
    t.rotation[p].push_back(in);
    const bool rich = spec.regime == Regime::Arbitrary && budget_left() >= 5 &&
                      coin(0.3 * spec.reflex_probability);
    // grow_leaf reallocates t.rotation, so take the arc id first
    if (rich) {
      // signature c r c c c: a reflex feeder needs four convex walls
      const ArcId r = grow_leaf(p, ArcLabel::Reflex);
      t.rotation[p].push_back(r);
      for (int i = 0; i < 3; ++i) {
        const ArcId c = grow_leaf(p, ArcLabel::Convex);
        t.rotation[p].push_back(c);
      }
    } else {
      for (int i = 0; i < 2; ++i) {
        const ArcId c = grow_leaf(p, ArcLabel::Convex);
        t.rotation[p].push_back(c);
      }
    }
    return in;
  }

  enum class Sym { InR, InC, OutCPeak };

  /* Turns leaf `u` into an interior node.  `tail_sig` lists the wedge
   * symbols following u's existing out-arc in cyclic rotation order. */
  void expand(NodeId u, const std::vector<Sym>& tail_sig) {
    for (Sym s : tail_sig) {
      ArcId a = kNoArc;  // grown before the push: growth reallocates
      switch (s) {
        case Sym::InR:
          // reflex feeders stay leaves in the degree-3 regimes (splits
          // take theirs from a leaf, collapses must not pass reflex on)
          a = grow_leaf(u, ArcLabel::Reflex, spec.regime != Regime::Arbitrary);
          break;
        case Sym::InC:
          a = grow_leaf(u, ArcLabel::Convex);
          break;
        case Sym::OutCPeak:
          a = grow_peak(u);
          break;
      }
      t.rotation[u].push_back(a);
    }
  }

  /* An in-block matching C+ (length len >= 2): convex runs with lone
   * reflex symbols sprinkled in, never two adjacent. */
  std::vector<Sym> cplus_block(std::size_t len) {
    std::vector<Sym> out;
    bool prev_r = false, has_c = false;
    for (std::size_t i = 0; i < len; ++i) {
      const bool last_needs_c = (i + 1 == len && !has_c);
      if (!prev_r && !last_needs_c && coin(spec.reflex_probability)) {
        out.push_back(Sym::InR);
        prev_r = true;
      } else {
        out.push_back(Sym::InC);
        prev_r = false;
        has_c = true;
      }
    }
    return out;
  }

  bool leaf_arc_is_reflex(NodeId u) const {
    return with_labels &&
           t.arcs[t.rotation[u][0]].label == ArcLabel::Reflex;
  }

  /* One growth step on leaf `u`; returns false when nothing fits. */
  bool step(NodeId u) {
    const std::size_t room = budget_left();
    using S = Sym;
    if (leaf_arc_is_reflex(u)) {
      // the existing arc is the node's single reflex out
      if (room >= 5 && coin(spec.split_probability)) {
        expand(u, {S::InR, S::OutCPeak, S::InR});  // r c^ r r^
        return true;
      }
      if (room < 3) return false;
      if (room >= 5 && coin(0.3))
        expand(u, {S::InR, S::InC, S::InR, S::InC, S::InR});  // long chain
      else
        expand(u, {S::InR, S::InC, S::InR});  // r c r r^
      return true;
    }
    if (room < 2) return false;
    const bool multi = coin(spec.split_probability);
    if (multi && spec.regime != Regime::Arbitrary && room >= 4) {
      expand(u, {S::InR, S::OutCPeak});  // degree-3 split
      return true;
    }
    if (multi && spec.regime == Regime::Arbitrary && room >= 4) {
      std::vector<std::vector<Sym>> menu;
      menu.push_back({S::InR, S::OutCPeak});  // c^ r c^ split
      if (room >= 5) {
        menu.push_back({S::InR, S::OutCPeak, S::InR});  // r c^ r c^
        menu.push_back({S::InR, S::OutCPeak, S::InC});  // c c^ r c^
      }
      if (room >= 6)
        menu.push_back({S::InR, S::InC, S::InR, S::OutCPeak});  // r c r c^ c^
      expand(u, menu[pick(menu.size())]);
      return true;
    }
    // single-out growth: a collapse, possibly reflex flavored or wide
    if (spec.regime == Regime::Arbitrary) {
      std::size_t len = 2;
      if (room >= 3 && coin(0.4)) len = 3;
      if (room >= 4 && len == 3 && coin(0.4)) len = 4;
      expand(u, cplus_block(len));
      return true;
    }
    if (with_labels && coin(spec.reflex_probability)) {
      if (coin(0.5))
        expand(u, {S::InR, S::InC});
      else
        expand(u, {S::InC, S::InR});
      return true;
    }
    expand(u, {S::InC, S::InC});
    return true;
  }

  DirectedOrderedTree run() {
    const NodeId peak = fresh_node();
    for (int i = 0; i < 3; ++i) {
      const ArcId a = grow_leaf(peak, ArcLabel::Convex);
      t.rotation[peak].push_back(a);
    }
    while (budget_left() >= 2 && !open.empty()) {
      // a reflex leaf needs room for 3; try a few picks before giving up
      bool grown = false;
      for (std::size_t tries = 0; tries < open.size() && !grown; ++tries) {
        const std::size_t slot = pick(open.size());
        const NodeId u = open[slot];
        if (!step(u)) continue;
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(slot));
        grown = true;
      }
      if (!grown) break;
    }
    return std::move(t);
  }
};

}  // namespace

DirectedOrderedTree generate_valid_tree(const GeneratorSpec& spec) {
  if (spec.node_budget < 4)
    throw std::invalid_argument("generator needs a node budget of at least 4");
  Grower g(spec);
  DirectedOrderedTree t = g.run();
  const auto report = spec.regime == Regime::GeneralPosition
                          ? check_general(t)
                          : spec.regime == Regime::LabeledDeg3
                                ? check_labeled(t)
                                : check_arbitrary(t);
  if (!report.empty())
    throw std::logic_error("generator produced an invalid tree: " +
                           to_report(report, t));
  return t;
}

}  // namespace skeltree
