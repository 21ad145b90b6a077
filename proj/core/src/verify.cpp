#include "skeltree/verify.hpp"

#include <algorithm>
#include <limits>

#include "skeltree/validate.hpp"

namespace skeltree {

std::string to_string(IsoLevel level) {
  switch (level) {
    case IsoLevel::Directed: return "directed";
    case IsoLevel::DirectedLabeled: return "labeled";
    case IsoLevel::DirectedLabeledOrdered: return "ordered";
  }
  return "?";
}

std::optional<IsoLevel> parse_iso_level(const std::string& name) {
  if (name == "directed") return IsoLevel::Directed;
  if (name == "labeled") return IsoLevel::DirectedLabeled;
  if (name == "ordered") return IsoLevel::DirectedLabeledOrdered;
  return std::nullopt;
}

namespace {

/* Encodes the tree rooted at a chosen node.  Arcs are tagged by their
 * direction relative to the rooting ('d' points toward the child) plus
 * a label character at the labeled levels.  At the ordered level a
 * node's children keep the rotation order, read cyclically starting
 * after the parent arc; at the unordered levels child encodings are
 * sorted, which is the usual canonical form for rooted trees. */
struct Encoder {
  const DirectedOrderedTree& t;
  IsoLevel level;
  bool mirrored = false;

  bool ordered() const { return level == IsoLevel::DirectedLabeledOrdered; }

  std::vector<ArcId> arcs_around(NodeId v) const {
    std::vector<ArcId> rot = t.rotation[v];
    if (mirrored) std::reverse(rot.begin(), rot.end());
    return rot;
  }

  std::string tag(ArcId a, NodeId parent) const {
    std::string s;
    s += t.arcs[a].tail == parent ? 'd' : 'u';
    if (level != IsoLevel::Directed) {
      if (!t.arcs[a].label) s += '-';
      else s += *t.arcs[a].label == ArcLabel::Reflex ? 'r' : 'c';
    }
    return s;
  }

  std::string encode(NodeId v, ArcId parent_arc) const {
    std::vector<ArcId> rot = arcs_around(v);
    std::size_t start = 0;
    if (parent_arc != kNoArc) {
      auto it = std::find(rot.begin(), rot.end(), parent_arc);
      start = static_cast<std::size_t>(it - rot.begin()) + 1;
    }
    std::vector<std::string> kids;
    kids.reserve(rot.size());
    for (std::size_t k = 0; k < rot.size(); ++k) {
      ArcId a = rot[(start + k) % rot.size()];
      if (a == parent_arc) continue;
      kids.push_back(tag(a, v) + encode(t.other_end(a, v), a));
    }
    if (!ordered()) std::sort(kids.begin(), kids.end());
    std::string out = "(";
    for (const auto& k : kids) out += k;
    out += ")";
    return out;
  }

  /* The root has no parent arc to anchor the rotation, so the ordered
   * level takes the smallest encoding over all cyclic starts. */
  std::string encode_root(NodeId root) const {
    std::vector<ArcId> rot = arcs_around(root);
    if (rot.empty()) return "()";
    if (!ordered()) return encode(root, kNoArc);
    std::string best;
    for (std::size_t s = 0; s < rot.size(); ++s) {
      std::string out = "(";
      for (std::size_t k = 0; k < rot.size(); ++k) {
        ArcId a = rot[(s + k) % rot.size()];
        out += tag(a, root) + encode(t.other_end(a, root), a);
      }
      out += ")";
      if (best.empty() || out < best) best = std::move(out);
    }
    return best;
  }
};

/* Subtree sizes away from each neighbor give the centroid: the node
 * minimizing its largest remaining component.  A tree has one or two. */
std::vector<NodeId> centroids(const DirectedOrderedTree& t) {
  std::size_t n = t.node_count();
  if (n == 1) return {0};
  std::vector<std::size_t> size(n, 1);
  std::vector<std::size_t> heaviest(n, 0);
  // Iterative post-order from node 0; the tree is connected by contract.
  std::vector<NodeId> order;
  std::vector<NodeId> parent(n, kNoNode);
  std::vector<NodeId> stack = {0};
  std::vector<bool> seen(n, false);
  seen[0] = true;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (ArcId a : t.rotation[v]) {
      NodeId w = t.other_end(a, v);
      if (seen[w]) continue;
      seen[w] = true;
      parent[w] = v;
      stack.push_back(w);
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeId v = *it;
    if (parent[v] != kNoNode) {
      size[parent[v]] += size[v];
      heaviest[parent[v]] = std::max(heaviest[parent[v]], size[v]);
    }
  }
  std::vector<NodeId> best;
  std::size_t best_weight = std::numeric_limits<std::size_t>::max();
  for (NodeId v = 0; v < n; ++v) {
    std::size_t weight = std::max(heaviest[v], n - size[v]);
    if (weight < best_weight) {
      best_weight = weight;
      best = {v};
    } else if (weight == best_weight) {
      best.push_back(v);
    }
  }
  return best;
}

std::vector<NodeId> canonical_roots(const DirectedOrderedTree& t) {
  if (count_peaks(t) == 1) {
    for (NodeId v = 0; v < t.node_count(); ++v)
      if (t.out_degree(v) == 0) return {v};
  }
  return centroids(t);
}

}  // namespace

std::string canonical_form(const DirectedOrderedTree& t, IsoLevel level,
                           bool allow_mirror) {
  if (t.node_count() == 0) return "";
  std::vector<NodeId> roots = canonical_roots(t);
  std::string best;
  for (int mirror = 0; mirror <= (allow_mirror ? 1 : 0); ++mirror) {
    Encoder enc{t, level, mirror != 0};
    for (NodeId root : roots) {
      std::string s = enc.encode_root(root);
      if (best.empty() || s < best) best = std::move(s);
    }
  }
  return best;
}

bool isomorphic(const DirectedOrderedTree& a, const DirectedOrderedTree& b,
                IsoLevel level, bool allow_mirror) {
  return canonical_form(a, level, allow_mirror) ==
         canonical_form(b, level, allow_mirror);
}

}  // namespace skeltree
