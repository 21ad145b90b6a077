#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace skeltree {

using NodeId = std::uint32_t;
using ArcId = std::uint32_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);
inline constexpr ArcId kNoArc = static_cast<ArcId>(-1);

enum class ArcLabel : std::uint8_t { Reflex, Convex };

struct Arc {
  NodeId tail = kNoNode;
  NodeId head = kNoNode;
  std::optional<ArcLabel> label;

  bool operator==(const Arc&) const = default;
};

/* A directed tree with a rotation system: per node, the cyclic
 * counterclockwise order of its incident arcs.  Either every arc is
 * labeled or none is.  Node ids are dense; names are only for I/O. */
struct DirectedOrderedTree {
  std::vector<std::string> names;                // node id -> name
  std::vector<Arc> arcs;                         // arc id -> arc
  std::vector<std::vector<ArcId>> rotation;      // node id -> incident arcs, CCW

  std::size_t node_count() const { return names.size(); }
  std::size_t arc_count() const { return arcs.size(); }

  std::size_t degree(NodeId v) const { return rotation[v].size(); }
  std::size_t in_degree(NodeId v) const;
  std::size_t out_degree(NodeId v) const;
  bool is_leaf(NodeId v) const { return degree(v) <= 1; }

  NodeId other_end(ArcId a, NodeId v) const {
    return arcs[a].tail == v ? arcs[a].head : arcs[a].tail;
  }
  bool is_outgoing(ArcId a, NodeId v) const { return arcs[a].tail == v; }

  /* true iff every arc carries a label (a tree without arcs counts as
   * unlabeled: there is nothing to honor). */
  bool labeled() const;

  bool operator==(const DirectedOrderedTree&) const = default;
};

enum class NodeClass : std::uint8_t { Leaf, Peak, Collapse, Split, General };

/* Leaf for total degree <= 1; Peak/Collapse/Split for degree-3 interior
 * nodes by in-degree 3/2/1; General for everything else (including
 * in-degree-0 degree-3 nodes, which the validator rejects).  Pattern ids
 * for General nodes come from classify_signature in pattern.hpp. */
NodeClass classify_node(const DirectedOrderedTree& tree, NodeId node);

const char* to_string(NodeClass c);

/* Wedge alphabet of node signatures: incoming arcs are unhatted (r/c),
 * outgoing arcs hatted (r̂/ĉ). */
enum class WedgeSymbol : std::uint8_t { InReflex, InConvex, OutReflex, OutConvex };

inline bool is_outgoing(WedgeSymbol s) {
  return s == WedgeSymbol::OutReflex || s == WedgeSymbol::OutConvex;
}
inline bool is_reflex(WedgeSymbol s) {
  return s == WedgeSymbol::InReflex || s == WedgeSymbol::OutReflex;
}

using NodeSignature = std::vector<WedgeSymbol>;

/* Cyclic signature of a node in rotation order.  Requires labels: either
 * the tree is labeled, or it is a degree-<=3 tree where implied labels
 * apply (leaf-to-split arcs reflex, everything else convex).  Empty
 * optional when labels are unavailable. */
std::optional<NodeSignature> node_signature(const DirectedOrderedTree& tree, NodeId node);

/* Arc labels with the implied-label rule applied on unlabeled trees whose
 * interior degrees are all 3.  Empty when the tree is unlabeled and some
 * interior node has degree != 3 (no implied labeling exists there). */
std::optional<std::vector<ArcLabel>> effective_labels(const DirectedOrderedTree& tree);

std::string to_string(const NodeSignature& sig);  // "r c r r̂ ĉ"
std::string to_display(WedgeSymbol s);

struct ParseError {
  int line = 0;  // 1-based; 0 for whole-file structural errors
  int column = 0;
  std::string message;
};

struct ParseResult {
  std::optional<DirectedOrderedTree> tree;
  std::vector<ParseError> errors;
  bool ok() const { return tree.has_value(); }
};

/* Line-oriented format:
 *   node <name>
 *   arc <tail> <head> [reflex|convex]
 *   order <name> <arc-index> ...     (global arc indices; optional)
 * '#' starts a comment.  Rotation defaults to file order of arc lines. */
ParseResult parse_tree(const std::string& text);

/* Inverse of parse_tree: nodes in id order, arcs in id order, an explicit
 * order line per node.  parse_tree(serialize_tree(t)) == t. */
std::string serialize_tree(const DirectedOrderedTree& tree);

}  // namespace skeltree
