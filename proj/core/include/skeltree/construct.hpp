#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "skeltree/decompose.hpp"
#include "skeltree/geometry.hpp"
#include "skeltree/tree.hpp"
#include "skeltree/validate.hpp"

namespace skeltree {

/* A witness polygon for a tree: the directed skeleton of `polygon` is
 * isomorphic to the tree the builder was given, and leaf_map[i] names
 * the leaf realized by vertex i.  Polygons are normalized to the unit
 * square, CCW, simple, and free of parallel edges; builders verify all
 * of this (plus the skeleton isomorphism itself) before returning. */
struct Realization {
  Polygon polygon;
  std::vector<NodeId> leaf_map;  // vertex index -> leaf node
  Regime regime = Regime::GeneralPosition;
};

/* Ask for a specific interior angle at one leaf's vertex (radians,
 * strictly between 0 and pi). */
struct AngleConstraint {
  NodeId leaf = kNoNode;
  double alpha = 0.0;
};

/* Split-free degree-3 trees produce convex polygons.  With a constraint
 * the polygon carries the requested angle at that leaf; on a path of
 * collapse nodes the remaining angles follow a strictly increasing
 * series toward the constrained leaf. */
Realization build_splitfree(const DirectedOrderedTree& tree,
                            std::optional<AngleConstraint> constraint = {});

/* Witness builders for the three input regimes.  Verification level
 * rises with the regime: direction-only, plus labels, plus rotation. */
Realization build_general_position(const DirectedOrderedTree& tree);
Realization build_labeled(const DirectedOrderedTree& tree);
Realization build_arbitrary(const DirectedOrderedTree& tree);

/* Replace the vertex at `leaf` by a short edge after an exterior offset.
 * The vertex must be convex with interior angle theta; the two new
 * angles must lie in (theta, pi) and sum to pi + theta, so the new edge
 * collapses back into the original wedge strictly before any event of
 * the previous polygon.  The result maps `leaf` to the first new vertex
 * in boundary order and a fresh id (one past the largest in the map) to
 * the second. */
Realization expand_leaf(const Realization& r, NodeId leaf,
                        std::pair<double, double> new_angles);

/* Like expand_leaf but the inserted edge gets one reflex and one convex
 * endpoint, in the boundary order requested by `labels` (exactly one of
 * which must be Reflex).  The edge's collapse is the offset polygon's
 * first event and recreates the original wedge. */
Realization insert_zshape(const Realization& r, NodeId leaf,
                          std::pair<ArcLabel, ArcLabel> labels);

/* Glue a child component onto a parent at a degree-3 split.  Both
 * realizations must be keyed by original tree ids (map_leaves_to_original
 * below), so each contains join.node as the substitute-leaf vertex; the
 * child must have been built with an angle constraint alpha < pi minus
 * the parent's angle there.  The child is scaled small, placed so the
 * two substitute vertices coincide with one edge pair collinear, and the
 * union is offset outward: the pinch opens into the reflex leaf
 * (join.in_arcs[0].dropped_leaf) and the collinear pair becomes the
 * split edge. */
Realization merge_at_split(const Realization& parent, const Realization& child,
                           const SplitJoin& join);

/* Rewrite a component realization's leaf ids into original-tree ids;
 * substitute leaves become the join node's id. */
Realization map_leaves_to_original(const Realization& r,
                                   const SplitComponent& component);

}  // namespace skeltree
