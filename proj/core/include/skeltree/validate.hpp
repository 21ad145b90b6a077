#pragma once

#include <string>
#include <vector>

#include "skeltree/tree.hpp"

namespace skeltree {

enum class Regime : std::uint8_t { GeneralPosition, LabeledDeg3, Arbitrary };

const char* to_string(Regime r);

enum class ViolationCode : std::uint8_t {
  G1,          // leaf arc not outgoing
  G2,          // interior degree != 3, or three outgoing arcs
  G3,          // split node's incoming arc not from a leaf
  L1,          // peak with a reflex incoming arc
  L2,          // collapse without convex incoming, or reflex outgoing
  L3,          // split without reflex incoming / convex outgoing pair
  NMismatch,   // interior signature matches no N variant
  LeafInDegree // leaf without out-degree exactly one
};

const char* to_string(ViolationCode c);

struct Violation {
  ViolationCode code;
  NodeId node;
  std::string detail;
};

/* Conditions G1-G3: leaf arcs outgoing; interior nodes have degree 3 with
 * at most two outgoing arcs; the incoming arc of every out-degree-2 node
 * comes directly from a leaf.  Empty report iff all hold. */
std::vector<Violation> check_general(const DirectedOrderedTree& tree);

/* Conditions L1-L3 on top of G1-G3 for labeled degree-3 trees.  G
 * violations are included; unlabeled trees yield per-node violations
 * rather than a crash. */
std::vector<Violation> check_labeled(const DirectedOrderedTree& tree);

/* Arbitrary-degree characterization: every leaf has out-degree one and
 * every interior node's cyclic signature matches the node pattern N.
 * Unlabeled trees are rejected outright (no implied labels here). */
std::vector<Violation> check_arbitrary(const DirectedOrderedTree& tree);

/* Number of out-degree-zero nodes. */
std::size_t count_peaks(const DirectedOrderedTree& tree);

std::string to_report(const std::vector<Violation>& violations,
                      const DirectedOrderedTree& tree);

}  // namespace skeltree
