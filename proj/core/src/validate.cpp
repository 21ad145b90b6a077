#include "skeltree/validate.hpp"

#include <sstream>

#include "skeltree/pattern.hpp"

namespace skeltree {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::GeneralPosition: return "general";
    case Regime::LabeledDeg3: return "labeled";
    case Regime::Arbitrary: return "arbitrary";
  }
  return "?";
}

const char* to_string(ViolationCode c) {
  switch (c) {
    case ViolationCode::G1: return "G1";
    case ViolationCode::G2: return "G2";
    case ViolationCode::G3: return "G3";
    case ViolationCode::L1: return "L1";
    case ViolationCode::L2: return "L2";
    case ViolationCode::L3: return "L3";
    case ViolationCode::NMismatch: return "N";
    case ViolationCode::LeafInDegree: return "leaf";
  }
  return "?";
}

std::vector<Violation> check_general(const DirectedOrderedTree& tree) {
  std::vector<Violation> out;
  for (NodeId v = 0; v < tree.node_count(); ++v) {
    const std::size_t deg = tree.degree(v);
    if (deg <= 1) {
      if (deg == 0) {
        out.push_back({ViolationCode::G1, v, "isolated node has no outgoing arc"});
      } else if (tree.out_degree(v) != 1) {
        out.push_back({ViolationCode::G1, v, "leaf arc must point away from the leaf"});
      }
      continue;
    }
    if (deg != 3) {
      out.push_back({ViolationCode::G2, v,
                     "interior node must have degree 3, has " + std::to_string(deg)});
      continue;
    }
    const std::size_t in = tree.in_degree(v);
    if (in == 0) {
      out.push_back({ViolationCode::G2, v, "interior node has more than two outgoing arcs"});
      continue;
    }
    if (in == 1) {
      // out-degree 2: the single incoming arc must come straight from a leaf
      ArcId in_arc = kNoArc;
      for (ArcId aid : tree.rotation[v])
        if (tree.arcs[aid].head == v) in_arc = aid;
      if (in_arc != kNoArc && !tree.is_leaf(tree.arcs[in_arc].tail)) {
        out.push_back({ViolationCode::G3, v,
                       "incoming arc of an out-degree-2 node must come from a leaf (comes from " +
                           tree.names[tree.arcs[in_arc].tail] + ")"});
      }
    }
  }
  return out;
}

namespace {

ViolationCode label_code_for(NodeClass cls) {
  if (cls == NodeClass::Peak) return ViolationCode::L1;
  if (cls == NodeClass::Split) return ViolationCode::L3;
  return ViolationCode::L2;
}

// Per-node label checks for degree-3 trees.  Assumes degree(v) == 3 and
// all incident arcs labeled.
void check_labels_at(const DirectedOrderedTree& tree, NodeId v,
                     std::vector<Violation>& out) {
  const NodeClass cls = classify_node(tree, v);
  std::size_t in_convex = 0, in_reflex = 0;
  bool out_all_convex = true;
  for (ArcId aid : tree.rotation[v]) {
    const Arc& a = tree.arcs[aid];
    if (a.head == v) {
      (*a.label == ArcLabel::Convex ? in_convex : in_reflex) += 1;
    } else if (*a.label != ArcLabel::Convex) {
      out_all_convex = false;
    }
  }
  switch (cls) {
    case NodeClass::Peak:
      if (in_reflex > 0)
        out.push_back({ViolationCode::L1, v, "peak has a reflex incoming arc"});
      break;
    case NodeClass::Collapse:
      if (in_convex == 0)
        out.push_back({ViolationCode::L2, v, "collapse node needs a convex incoming arc"});
      if (!out_all_convex)
        out.push_back({ViolationCode::L2, v, "collapse node's outgoing arc must be convex"});
      break;
    case NodeClass::Split:
      if (in_reflex != 1)
        out.push_back({ViolationCode::L3, v, "split node's incoming arc must be reflex"});
      if (!out_all_convex)
        out.push_back({ViolationCode::L3, v, "split node's outgoing arcs must be convex"});
      break;
    default:
      break;  // degree-3 in-degree-0 already reported by check_general
  }
}

}  // namespace

std::vector<Violation> check_labeled(const DirectedOrderedTree& tree) {
  std::vector<Violation> out = check_general(tree);
  if (!tree.labeled()) {
    // one violation per unlabeled arc, reported at its head
    for (ArcId a = 0; a < tree.arc_count(); ++a) {
      if (tree.arcs[a].label) continue;
      const NodeId head = tree.arcs[a].head;
      out.push_back({label_code_for(classify_node(tree, head)), head,
                     "arc from " + tree.names[tree.arcs[a].tail] +
                         " has no label; the labeled regime requires one"});
    }
    return out;
  }
  for (NodeId v = 0; v < tree.node_count(); ++v)
    if (tree.degree(v) == 3) check_labels_at(tree, v, out);
  return out;
}

std::vector<Violation> check_arbitrary(const DirectedOrderedTree& tree) {
  std::vector<Violation> out;
  if (tree.arc_count() > 0 && !tree.labeled()) {
    out.push_back({ViolationCode::NMismatch, 0,
                   "arbitrary regime requires arc labels on every arc"});
    return out;
  }
  for (NodeId v = 0; v < tree.node_count(); ++v) {
    if (tree.degree(v) <= 1) {
      if (tree.out_degree(v) != 1)
        out.push_back({ViolationCode::LeafInDegree, v,
                       tree.degree(v) == 0 ? "isolated node"
                                           : "leaf arc must point away from the leaf"});
      continue;
    }
    const auto sig = node_signature(tree, v);
    if (!sig) continue;  // unreachable: tree is labeled
    const auto dec = classify_signature(*sig);
    if (!dec)
      out.push_back({ViolationCode::NMismatch, v,
                     "signature " + to_string(*sig) + " matches no node pattern"});
  }
  return out;
}

std::size_t count_peaks(const DirectedOrderedTree& tree) {
  std::size_t n = 0;
  for (NodeId v = 0; v < tree.node_count(); ++v)
    if (tree.out_degree(v) == 0) ++n;
  return n;
}

std::string to_report(const std::vector<Violation>& violations,
                      const DirectedOrderedTree& tree) {
  std::ostringstream os;
  for (const Violation& v : violations) {
    os << to_string(v.code) << " at node ";
    if (v.node < tree.node_count())
      os << tree.names[v.node];
    else
      os << v.node;
    os << ": " << v.detail << "\n";
  }
  return os.str();
}

}  // namespace skeltree
