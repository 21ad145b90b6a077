#include <stdexcept>

#include "doctest.h"
#include "skeltree/decompose.hpp"
#include "skeltree/validate.hpp"
#include "test_util.hpp"

using namespace skeltree;
using testutil::must_parse;

namespace {

const char* kSplitTree =
    "node s\nnode l\nnode p\nnode q\nnode x\nnode y\nnode u\nnode w\n"
    "arc l s reflex\narc s p convex\narc s q convex\n"
    "arc x p convex\narc y p convex\narc u q convex\narc w q convex\n";

// two splits feeding a shared collapse node
const char* kTwoSplitTree =
    "node l1\nnode s1\nnode p1\nnode x1\nnode y1\n"
    "node l2\nnode s2\nnode p2\nnode x2\nnode y2\n"
    "node c\nnode p\nnode z1\nnode z2\n"
    "arc l1 s1 reflex\narc s1 p1 convex\narc s1 c convex\n"
    "arc x1 p1 convex\narc y1 p1 convex\n"
    "arc l2 s2 reflex\narc s2 p2 convex\narc s2 c convex\n"
    "arc x2 p2 convex\narc y2 p2 convex\n"
    "arc c p convex\narc z1 p convex\narc z2 p convex\n";

}  // namespace

TEST_SUITE("decompose") {

TEST_CASE("a split-free tree is a single component with no joins") {
  auto t = must_parse(
      "node v\nnode a\nnode b\nnode p\nnode x\nnode y\n"
      "arc a v\narc b v\narc v p\narc x p\narc y p\n");
  auto f = split_forest(t);
  CHECK(f.components.size() == 1);
  CHECK(f.joins.empty());
  CHECK(f.components[0].tree == t);
  CHECK(reassemble(f) == t);
}

TEST_CASE("invalid trees are rejected") {
  auto t = must_parse("node a\nnode b\nnode c\narc a b\narc c b\n");
  CHECK_THROWS_AS(split_forest(t), std::invalid_argument);
}

TEST_CASE("one split yields two components with one peak each") {
  auto t = must_parse(kSplitTree);
  auto f = split_forest(t);
  REQUIRE(f.components.size() == 2);
  REQUIRE(f.joins.size() == 1);

  for (const auto& c : f.components) {
    CHECK(check_labeled(c.tree).empty());
    CHECK(count_peaks(c.tree) == 1);
    CHECK(c.tree.node_count() == 4);  // peak, two leaves, one substitute
    std::size_t subs = 0;
    for (std::size_t v = 0; v < c.tree.node_count(); ++v)
      if (c.substitute[v]) {
        ++subs;
        CHECK(c.node_to_original[v] == 0);  // stands for the split node s
        CHECK(c.tree.is_leaf(static_cast<NodeId>(v)));
      }
    CHECK(subs == 1);
  }

  const SplitJoin& j = f.joins[0];
  CHECK(j.node == 0);
  CHECK(j.name == "s");
  CHECK(j.rotation == std::vector<ArcId>{0, 1, 2});
  CHECK(j.reflex_leaf_position == 0);
  REQUIRE(j.in_arcs.size() == 1);
  CHECK(j.in_arcs[0].dropped_leaf == 1);
  CHECK(j.in_arcs[0].dropped_leaf_name == "l");
  REQUIRE(j.out_arcs.size() == 2);
  CHECK(j.out_arcs[0].component != j.out_arcs[1].component);

  CHECK(reassemble(f) == t);
}

TEST_CASE("substitute leaves sit where the split arcs were") {
  auto t = must_parse(kSplitTree);
  auto f = split_forest(t);
  for (const auto& j : f.joins) {
    for (const auto& o : j.out_arcs) {
      const auto& c = f.components[o.component];
      // the substitute leaf's arc maps back to the original join->head arc
      const auto& rot = c.tree.rotation[o.substitute_leaf];
      REQUIRE(rot.size() == 1);
      CHECK(c.arc_to_original[rot[0]] == o.arc);
      // and it keeps the original label
      CHECK(c.tree.arcs[rot[0]].label == t.arcs[o.arc].label);
    }
  }
}

TEST_CASE("two splits sharing a collapse component round-trip") {
  auto t = must_parse(kTwoSplitTree);
  REQUIRE(check_labeled(t).empty());
  auto f = split_forest(t);
  REQUIRE(f.components.size() == 3);
  REQUIRE(f.joins.size() == 2);
  // the middle component carries two substitute leaves
  std::size_t with_two = 0;
  for (const auto& c : f.components) {
    CHECK(check_labeled(c.tree).empty());
    CHECK(count_peaks(c.tree) == 1);
    std::size_t subs = 0;
    for (char s : c.substitute) subs += s != 0;
    if (subs == 2) ++with_two;
  }
  CHECK(with_two == 1);
  CHECK(reassemble(f) == t);
}

TEST_CASE("out-degree partition keeps dropped leaves as singleton components") {
  auto t = must_parse(kSplitTree);
  auto f = components_by_outdegree(t);
  // two peak components plus the reflex leaf on its own
  REQUIRE(f.components.size() == 3);
  std::size_t singletons = 0;
  for (const auto& c : f.components) {
    if (c.tree.node_count() == 1) {
      ++singletons;
      CHECK(c.tree.arc_count() == 0);
      CHECK(c.tree.names[0] == "l");
    }
  }
  CHECK(singletons == 1);

  REQUIRE(f.joins.size() == 1);
  const SplitJoin& j = f.joins[0];
  REQUIRE(j.in_arcs.size() == 1);
  CHECK(j.in_arcs[0].dropped_leaf == kNoNode);
  CHECK(j.in_arcs[0].exit_node != kNoNode);
  CHECK(f.components[j.in_arcs[0].component].tree.names[j.in_arcs[0].exit_node] == "l");

  CHECK(reassemble(f) == t);
}

TEST_CASE("out-degree partition handles interior arcs into joins") {
  // degree-5 node with two outgoing arcs, fed by a chain: the feeding
  // node is interior, so its arc becomes a component exit
  DirectedOrderedTree t;
  auto add_node = [&](const char* name) {
    t.names.push_back(name);
    t.rotation.emplace_back();
    return static_cast<NodeId>(t.names.size() - 1);
  };
  auto add_arc = [&](NodeId a, NodeId b, ArcLabel l) {
    Arc arc{a, b, l};
    const ArcId id = static_cast<ArcId>(t.arcs.size());
    t.arcs.push_back(arc);
    t.rotation[a].push_back(id);
    t.rotation[b].push_back(id);
    return id;
  };
  const NodeId n = add_node("n");
  const NodeId f1 = add_node("f1");
  const NodeId f2 = add_node("f2");
  const NodeId g = add_node("g");
  const NodeId h1 = add_node("h1");
  const NodeId h2 = add_node("h2");
  const NodeId hl1 = add_node("hl1");
  const NodeId hl2 = add_node("hl2");
  add_arc(f1, n, ArcLabel::Reflex);
  add_arc(f2, g, ArcLabel::Convex);
  add_arc(g, n, ArcLabel::Convex);
  add_arc(n, h1, ArcLabel::Convex);
  add_arc(n, h2, ArcLabel::Convex);
  add_arc(hl1, h1, ArcLabel::Convex);
  add_arc(hl2, h2, ArcLabel::Convex);

  auto f = components_by_outdegree(t);
  // pieces: {f1}, {f2, g}, {h1, hl1, +sub}, {h2, hl2, +sub}
  CHECK(f.components.size() == 4);
  REQUIRE(f.joins.size() == 1);
  const SplitJoin& j = f.joins[0];
  CHECK(j.node == n);
  REQUIRE(j.in_arcs.size() == 2);
  // g is interior: its arc into n is an exit at rotation slot 1 of g
  bool saw_g_exit = false;
  for (const auto& in : j.in_arcs) {
    if (in.exit_node == kNoNode) continue;
    const auto& c = f.components[in.component];
    if (c.tree.names[in.exit_node] == "g") {
      saw_g_exit = true;
      CHECK(in.exit_rotation_pos == 1);
    }
  }
  CHECK(saw_g_exit);
  CHECK(reassemble(f) == t);
}

}  // TEST_SUITE
