#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skeltree/geometry.hpp"
#include "skeltree/tree.hpp"

namespace skeltree {

/* Straight skeleton as a directed graph: node i < leaf_count is input
 * vertex i at time 0; interior nodes are events in chronological order.
 * Every arc runs from the earlier node to the later one and carries the
 * convexity of the wavefront vertex that traced it. */
struct SkeletonGraph {
  struct Node {
    Vec2 pos;
    double time = 0;
  };
  struct Arc {
    std::uint32_t tail = 0;
    std::uint32_t head = 0;
    ArcLabel label = ArcLabel::Convex;
  };

  std::vector<Node> nodes;
  std::vector<Arc> arcs;
  std::vector<std::vector<std::uint32_t>> rotation;  // arc ids, counterclockwise
  std::size_t leaf_count = 0;

  std::size_t in_degree(std::uint32_t node) const;
  std::size_t out_degree(std::uint32_t node) const;
};

enum class EventKind { Edge, Split, Multi };

/* Classifies an interior node by its arc degrees: an ordinary collapse
 * (two in, one out), an ordinary split (one in, two out), anything
 * else - peaks included - is a multi event. */
EventKind node_event_kind(const SkeletonGraph& g, std::uint32_t node);

struct SkeletonResult {
  std::optional<SkeletonGraph> graph;
  std::string error;  // set when numerics or input validity fail
  bool ok() const { return graph.has_value(); }
};

/* Computes the skeleton by simulating the unit-speed inward wavefront.
 * Simultaneous events at a common locus (within 1e3 * epsilon windows in
 * time and space) merge into one node of degree four or more.  Any
 * numerical ambiguity is reported as an error, never resolved silently. */
SkeletonResult compute_skeleton(const Polygon& p, const Tolerance& tol = {});

struct WavefrontResult {
  std::optional<std::vector<Polygon>> fronts;
  std::string error;
  bool ok() const { return fronts.has_value(); }
};

/* The wavefront at time t: one polygon per surviving component, each
 * listed starting at its lowest-numbered kinetic vertex, components
 * ordered the same way.  t = 0 returns the input polygon. */
WavefrontResult simulate_wavefront(const Polygon& p, double t, const Tolerance& tol = {});

/* Reads the skeleton as a directed ordered labeled tree: leaves named
 * v<i> after the polygon vertices, interior nodes n<k> in event order.
 * The graph must be a tree (compute_skeleton guarantees it). */
DirectedOrderedTree directed_labeled_view(const SkeletonGraph& g);

}  // namespace skeltree
