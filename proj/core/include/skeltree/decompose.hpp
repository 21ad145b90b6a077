#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "skeltree/tree.hpp"

namespace skeltree {

/* Splitting a tree at its out-degree-2+ nodes.  Each such join node is
 * removed; for every outgoing arc join->h a fresh substitute leaf with an
 * arc into h stands in for the join, so each component is a well-formed
 * split-free tree on its own.  The join records keep everything needed to
 * put the original tree back together: the join's rotation, which
 * component/leaf realizes each outgoing arc, and what fed the join from
 * the incoming side (a dropped leaf in the degree-3 regime, an exit node
 * of some component otherwise). */

struct SplitComponent {
  DirectedOrderedTree tree;
  std::vector<NodeId> node_to_original;  // substitute leaf -> the join node
  std::vector<ArcId> arc_to_original;    // substitute arc -> original join->head arc
  std::vector<char> substitute;          // 1 for substitute leaves
};

struct JoinInArc {
  ArcId arc = kNoArc;  // original arc tail->join
  std::optional<ArcLabel> label;
  // degree-3 splits: the incoming arc's leaf is dropped entirely
  NodeId dropped_leaf = kNoNode;
  std::string dropped_leaf_name;
  // arbitrary regime: the arc exits a component at exit_node instead
  std::size_t component = static_cast<std::size_t>(-1);
  NodeId exit_node = kNoNode;              // id within that component
  std::size_t exit_rotation_pos = 0;       // slot of `arc` in the exit node's rotation
};

struct JoinOutArc {
  ArcId arc = kNoArc;  // original arc join->head
  std::size_t component = 0;
  NodeId substitute_leaf = kNoNode;  // id within that component
};

struct SplitJoin {
  NodeId node = kNoNode;
  std::string name;
  std::vector<ArcId> rotation;  // the join node's original rotation
  std::vector<JoinInArc> in_arcs;
  std::vector<JoinOutArc> out_arcs;
  // cyclic slot of the (single) incoming arc within `rotation`; for
  // degree-3 splits this is where the reflex leaf sat
  std::size_t reflex_leaf_position = 0;
};

struct SplitForest {
  std::vector<SplitComponent> components;
  std::vector<SplitJoin> joins;
  std::size_t original_node_count = 0;
  std::size_t original_arc_count = 0;
};

/* Degree-3 regime: split at out-degree-2 nodes, dropping each split's
 * incoming reflex leaf.  Every component has exactly one peak.  Throws
 * std::invalid_argument if check_general fails. */
SplitForest split_forest(const DirectedOrderedTree& tree);

/* Arbitrary regime: components are the connected pieces among nodes of
 * out-degree <= 1; arcs feeding a join become recorded exits of their
 * component rather than dropped leaves.  On degree-3 input this is the
 * split_forest partition except that dropped reflex leaves show up as
 * their own single-node components. */
SplitForest components_by_outdegree(const DirectedOrderedTree& tree);

/* Exact inverse: rebuilds the original tree (ids, names, labels,
 * rotations) from the forest. */
DirectedOrderedTree reassemble(const SplitForest& forest);

}  // namespace skeltree
