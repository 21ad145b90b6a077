#include <string>

#include "doctest.h"
#include "skeltree/tree.hpp"
#include "test_util.hpp"

using namespace skeltree;
using testutil::must_parse;
using testutil::sig_of;

TEST_SUITE("tree") {

TEST_CASE("three node path parses with default rotation") {
  auto t = must_parse(
      "node a\nnode b\nnode c\n"
      "arc a b\narc c b\n");
  CHECK(t.node_count() == 3);
  CHECK(t.arc_count() == 2);
  CHECK(t.in_degree(1) == 2);
  CHECK(t.out_degree(1) == 0);
  CHECK(t.rotation[1] == std::vector<ArcId>{0, 1});
  CHECK(classify_node(t, 0) == NodeClass::Leaf);
  CHECK(classify_node(t, 1) == NodeClass::General);  // degree 2 interior
}

TEST_CASE("single node file is a valid tree") {
  auto t = must_parse("node only\n");
  CHECK(t.node_count() == 1);
  CHECK(t.arc_count() == 0);
  CHECK(t.is_leaf(0));
  CHECK_FALSE(t.labeled());
}

TEST_CASE("comments and blank lines are ignored") {
  auto t = must_parse(
      "# a path\n\nnode a  # tail\nnode b\n"
      "arc a b  # the arc\n");
  CHECK(t.arc_count() == 1);
}

TEST_CASE("order lines override rotation") {
  auto t = must_parse(
      "node v\nnode a\nnode b\nnode c\nnode d\n"
      "arc a v\narc b v\narc v c\narc v d\n"
      "order v 2 1 3 0\n");
  CHECK(t.rotation[0] == std::vector<ArcId>{2, 1, 3, 0});
}

TEST_CASE("parse errors carry line and column") {
  auto r = parse_tree("node a\nnode a\n");
  REQUIRE_FALSE(r.ok());
  CHECK(r.errors[0].line == 2);
  CHECK(r.errors[0].column == 6);

  r = parse_tree("node a\narc a zz\n");
  REQUIRE_FALSE(r.ok());
  CHECK(r.errors[0].message.find("unknown node") != std::string::npos);

  r = parse_tree("node a\narc a a\n");
  REQUIRE_FALSE(r.ok());
  CHECK(r.errors[0].message.find("self-loop") != std::string::npos);
}

TEST_CASE("structural errors: arc count, connectivity, labeling") {
  auto r = parse_tree("node a\nnode b\nnode c\narc a b\narc b c\narc c a\n");
  REQUIRE_FALSE(r.ok());  // duplicate arc check fires only on same pair; c->a closes a cycle
  bool found = false;
  for (const auto& e : r.errors)
    if (e.message.find("not a tree") != std::string::npos) found = true;
  CHECK(found);

  r = parse_tree("node a\nnode b\nnode c\nnode d\narc a b\narc c d\narc a b\n");
  REQUIRE_FALSE(r.ok());  // duplicate arc plus disconnection

  r = parse_tree("node a\nnode b\nnode c\narc a b reflex\narc c b\n");
  REQUIRE_FALSE(r.ok());
  CHECK(r.errors[0].message.find("mixed labeling") != std::string::npos);

  r = parse_tree("");
  REQUIRE_FALSE(r.ok());
  CHECK(r.errors[0].line == 0);
}

TEST_CASE("order line must list exactly the incident arcs") {
  auto r = parse_tree(
      "node a\nnode b\nnode c\narc a b\narc c b\n"
      "order b 0 0\n");
  REQUIRE_FALSE(r.ok());
  r = parse_tree(
      "node a\nnode b\nnode c\narc a b\narc c b\n"
      "order b 1\n");
  REQUIRE_FALSE(r.ok());
}

TEST_CASE("serialize round-trips through parse") {
  const char* samples[] = {
      "node a\nnode b\nnode c\narc a b\narc c b\n",
      "node v\nnode a\nnode b\nnode c\nnode d\n"
      "arc a v reflex\narc b v convex\narc v c convex\narc v d convex\n"
      "order v 2 1 3 0\n",
      "node only\n",
  };
  for (const char* s : samples) {
    auto t = must_parse(s);
    auto again = must_parse(serialize_tree(t));
    CHECK(again == t);
    CHECK(serialize_tree(again) == serialize_tree(t));
  }
}

TEST_CASE("node classes by degree and in-degree") {
  // peak: three incoming
  auto peak = must_parse(
      "node p\nnode a\nnode b\nnode c\n"
      "arc a p\narc b p\narc c p\n");
  CHECK(classify_node(peak, 0) == NodeClass::Peak);

  // collapse: two incoming, one outgoing
  auto col = must_parse(
      "node v\nnode a\nnode b\nnode p\nnode x\nnode y\n"
      "arc a v\narc b v\narc v p\narc x p\narc y p\n");
  CHECK(classify_node(col, 0) == NodeClass::Collapse);
  CHECK(classify_node(col, 3) == NodeClass::Peak);

  // split: one incoming, two outgoing
  auto spl = must_parse(
      "node s\nnode l\nnode p\nnode q\nnode x\nnode y\nnode u\nnode w\n"
      "arc l s\narc s p\narc s q\narc x p\narc y p\narc u q\narc w q\n");
  CHECK(classify_node(spl, 0) == NodeClass::Split);

  // degree 3 with three outgoing: no kinetic class
  auto out3 = must_parse(
      "node v\nnode a\nnode b\nnode c\n"
      "arc v a\narc v b\narc v c\n");
  CHECK(classify_node(out3, 0) == NodeClass::General);
}

TEST_CASE("implied labels on unlabeled degree-3 trees") {
  auto spl = must_parse(
      "node s\nnode l\nnode p\nnode q\nnode x\nnode y\nnode u\nnode w\n"
      "arc l s\narc s p\narc s q\narc x p\narc y p\narc u q\narc w q\n");
  auto labels = effective_labels(spl);
  REQUIRE(labels.has_value());
  CHECK((*labels)[0] == ArcLabel::Reflex);  // leaf into split
  for (ArcId a = 1; a < spl.arc_count(); ++a) CHECK((*labels)[a] == ArcLabel::Convex);

  auto sig = node_signature(spl, 0);
  REQUIRE(sig.has_value());
  CHECK(*sig == sig_of("r c^ c^"));
}

TEST_CASE("no implied labels once an interior degree exceeds 3") {
  auto t = testutil::star_with_signature(sig_of("r c r c^ c^"));
  // strip the labels: degree-5 interior node, no implied labeling
  for (Arc& a : t.arcs) a.label.reset();
  CHECK_FALSE(effective_labels(t).has_value());
  CHECK_FALSE(node_signature(t, 0).has_value());
}

TEST_CASE("signature of a degree-5 labeled node in rotation order") {
  auto t = testutil::star_with_signature(sig_of("r c r c^ c^"));
  auto sig = node_signature(t, 0);
  REQUIRE(sig.has_value());
  CHECK(*sig == sig_of("r c r c^ c^"));
  CHECK(classify_node(t, 0) == NodeClass::General);
  CHECK(to_string(*sig) == "r c r c\xCC\x82 c\xCC\x82");
}

}  // TEST_SUITE
