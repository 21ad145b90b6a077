#include "skeltree/decompose.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "skeltree/validate.hpp"

namespace skeltree {

namespace {

constexpr std::size_t kNoComponent = static_cast<std::size_t>(-1);

/* Shared worker.  drop_leaves: degree-3 mode, where a leaf feeding a join
 * is dropped and recorded on the join; otherwise such a leaf stays a
 * component of its own and the arc becomes an exit. */
SplitForest decompose(const DirectedOrderedTree& tree, bool drop_leaves) {
  const std::size_t n = tree.node_count();
  std::vector<char> is_join(n, 0), is_dropped(n, 0);
  for (NodeId v = 0; v < n; ++v) is_join[v] = tree.out_degree(v) >= 2;
  if (drop_leaves) {
    for (NodeId v = 0; v < n; ++v) {
      if (!tree.is_leaf(v) || tree.out_degree(v) != 1) continue;
      const Arc& a = tree.arcs[tree.rotation[v][0]];
      if (a.tail == v && is_join[a.head]) is_dropped[v] = 1;
    }
  }

  // connected pieces over the remaining nodes
  std::vector<std::size_t> comp(n, kNoComponent);
  std::size_t comp_count = 0;
  for (NodeId seed = 0; seed < n; ++seed) {
    if (is_join[seed] || is_dropped[seed] || comp[seed] != kNoComponent) continue;
    const std::size_t c = comp_count++;
    std::vector<NodeId> stack{seed};
    comp[seed] = c;
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (ArcId aid : tree.rotation[v]) {
        const NodeId w = tree.other_end(aid, v);
        if (is_join[w] || is_dropped[w] || comp[w] != kNoComponent) continue;
        comp[w] = c;
        stack.push_back(w);
      }
    }
  }

  SplitForest forest;
  forest.original_node_count = n;
  forest.original_arc_count = tree.arc_count();
  forest.components.resize(comp_count);

  // per component: real nodes in original id order, then substitute leaves
  // in original arc id order
  std::vector<std::vector<NodeId>> members(comp_count);
  for (NodeId v = 0; v < n; ++v)
    if (comp[v] != kNoComponent) members[comp[v]].push_back(v);

  struct SubLeaf {
    ArcId arc;    // original join->head arc
    NodeId join;  // original join node
    NodeId head;  // original head node
  };
  std::vector<std::vector<SubLeaf>> subs(comp_count);
  for (ArcId aid = 0; aid < tree.arc_count(); ++aid) {
    const Arc& a = tree.arcs[aid];
    if (is_join[a.tail] && comp[a.head] != kNoComponent)
      subs[comp[a.head]].push_back({aid, a.tail, a.head});
  }
  for (auto& s : subs)
    std::sort(s.begin(), s.end(), [](const SubLeaf& x, const SubLeaf& y) {
      return x.arc < y.arc;
    });

  // local ids of real nodes, and where each original node's exit arc sits
  std::vector<NodeId> local(n, kNoNode);
  for (std::size_t c = 0; c < comp_count; ++c) {
    SplitComponent& out = forest.components[c];
    for (NodeId v : members[c]) {
      local[v] = static_cast<NodeId>(out.tree.names.size());
      out.tree.names.push_back(tree.names[v]);
      out.node_to_original.push_back(v);
      out.substitute.push_back(0);
    }
    std::vector<NodeId> sub_local(subs[c].size());
    for (std::size_t i = 0; i < subs[c].size(); ++i) {
      sub_local[i] = static_cast<NodeId>(out.tree.names.size());
      out.tree.names.push_back("~" + tree.names[subs[c][i].join] + "." +
                               std::to_string(subs[c][i].arc));
      out.node_to_original.push_back(subs[c][i].join);
      out.substitute.push_back(1);
    }

    // arcs in original id order; substitute arcs reuse the join->head id
    struct LocalArc {
      ArcId original;
      Arc arc;
    };
    std::vector<LocalArc> arcs;
    for (NodeId v : members[c]) {
      for (ArcId aid : tree.rotation[v]) {
        const Arc& a = tree.arcs[aid];
        if (a.tail != v) continue;  // visit each arc from its tail once
        if (comp[a.head] == comp[v])
          arcs.push_back({aid, {local[v], local[a.head], a.label}});
      }
    }
    for (std::size_t i = 0; i < subs[c].size(); ++i) {
      const Arc& a = tree.arcs[subs[c][i].arc];
      arcs.push_back({subs[c][i].arc, {sub_local[i], local[subs[c][i].head], a.label}});
    }
    std::sort(arcs.begin(), arcs.end(), [](const LocalArc& x, const LocalArc& y) {
      return x.original < y.original;
    });
    std::map<ArcId, ArcId> arc_local;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      arc_local[arcs[i].original] = static_cast<ArcId>(i);
      out.tree.arcs.push_back(arcs[i].arc);
      out.arc_to_original.push_back(arcs[i].original);
    }

    out.tree.rotation.assign(out.tree.names.size(), {});
    for (NodeId v : members[c]) {
      for (ArcId aid : tree.rotation[v]) {
        auto it = arc_local.find(aid);
        if (it != arc_local.end()) out.tree.rotation[local[v]].push_back(it->second);
        // else: the exit arc into a join; recorded on the join below
      }
    }
    for (std::size_t i = 0; i < subs[c].size(); ++i)
      out.tree.rotation[sub_local[i]].push_back(arc_local[subs[c][i].arc]);
  }

  // join records
  std::map<ArcId, std::size_t> sub_index_of_arc;  // arc -> index within its comp's subs
  for (std::size_t c = 0; c < comp_count; ++c)
    for (std::size_t i = 0; i < subs[c].size(); ++i)
      sub_index_of_arc[subs[c][i].arc] = i;

  for (NodeId s = 0; s < n; ++s) {
    if (!is_join[s]) continue;
    SplitJoin join;
    join.node = s;
    join.name = tree.names[s];
    join.rotation = tree.rotation[s];
    bool saw_in = false;
    for (std::size_t slot = 0; slot < tree.rotation[s].size(); ++slot) {
      const ArcId aid = tree.rotation[s][slot];
      const Arc& a = tree.arcs[aid];
      if (a.head == s) {
        if (!saw_in) {
          join.reflex_leaf_position = slot;
          saw_in = true;
        }
        JoinInArc in;
        in.arc = aid;
        in.label = a.label;
        if (is_dropped[a.tail]) {
          in.dropped_leaf = a.tail;
          in.dropped_leaf_name = tree.names[a.tail];
        } else if (!is_join[a.tail]) {
          in.component = comp[a.tail];
          in.exit_node = local[a.tail];
          // slot of this arc in the tail's own rotation
          const auto& rot = tree.rotation[a.tail];
          in.exit_rotation_pos = static_cast<std::size_t>(
              std::find(rot.begin(), rot.end(), aid) - rot.begin());
        }
        // join-to-join arcs keep all sentinels; endpoints are recovered by
        // matching arc ids across join records
        join.in_arcs.push_back(in);
      } else {
        JoinOutArc outarc;
        outarc.arc = aid;
        if (is_join[a.head]) {
          outarc.component = kNoComponent;
        } else {
          outarc.component = comp[a.head];
          const std::size_t mc = outarc.component;
          const std::size_t si = sub_index_of_arc.at(aid);
          // substitute leaves follow the real members in local numbering
          outarc.substitute_leaf = static_cast<NodeId>(members[mc].size() + si);
        }
        join.out_arcs.push_back(outarc);
      }
    }
    forest.joins.push_back(std::move(join));
  }

  return forest;
}

}  // namespace

SplitForest split_forest(const DirectedOrderedTree& tree) {
  const auto bad = check_general(tree);
  if (!bad.empty())
    throw std::invalid_argument("split_forest: input fails the degree-3 checks: " +
                                to_report(bad, tree));
  return decompose(tree, /*drop_leaves=*/true);
}

SplitForest components_by_outdegree(const DirectedOrderedTree& tree) {
  return decompose(tree, /*drop_leaves=*/false);
}

DirectedOrderedTree reassemble(const SplitForest& forest) {
  DirectedOrderedTree out;
  out.names.assign(forest.original_node_count, {});
  out.arcs.assign(forest.original_arc_count, Arc{kNoNode, kNoNode, std::nullopt});
  out.rotation.assign(forest.original_node_count, {});

  for (const SplitComponent& c : forest.components) {
    for (NodeId v = 0; v < c.tree.node_count(); ++v) {
      if (c.substitute[v]) continue;
      const NodeId ov = c.node_to_original[v];
      out.names[ov] = c.tree.names[v];
      out.rotation[ov].reserve(c.tree.rotation[v].size());
      for (ArcId aid : c.tree.rotation[v])
        out.rotation[ov].push_back(c.arc_to_original[aid]);
    }
    for (ArcId aid = 0; aid < c.tree.arc_count(); ++aid) {
      const Arc& a = c.tree.arcs[aid];
      out.arcs[c.arc_to_original[aid]] =
          Arc{c.node_to_original[a.tail], c.node_to_original[a.head], a.label};
    }
  }

  std::map<ArcId, NodeId> join_tail;  // for join-to-join arcs
  for (const SplitJoin& j : forest.joins) {
    out.names[j.node] = j.name;
    out.rotation[j.node] = j.rotation;
    for (const JoinOutArc& o : j.out_arcs)
      if (o.component == static_cast<std::size_t>(-1)) join_tail[o.arc] = j.node;
  }
  for (const SplitJoin& j : forest.joins) {
    for (const JoinInArc& in : j.in_arcs) {
      if (in.dropped_leaf != kNoNode) {
        out.names[in.dropped_leaf] = in.dropped_leaf_name;
        out.arcs[in.arc] = Arc{in.dropped_leaf, j.node, in.label};
        out.rotation[in.dropped_leaf] = {in.arc};
      } else if (in.component != static_cast<std::size_t>(-1)) {
        const SplitComponent& c = forest.components[in.component];
        const NodeId ot = c.node_to_original[in.exit_node];
        out.arcs[in.arc] = Arc{ot, j.node, in.label};
        auto& rot = out.rotation[ot];
        rot.insert(rot.begin() + static_cast<std::ptrdiff_t>(
                                     std::min(in.exit_rotation_pos, rot.size())),
                   in.arc);
      } else {
        out.arcs[in.arc] = Arc{join_tail.at(in.arc), j.node, in.label};
      }
    }
  }
  return out;
}

}  // namespace skeltree
