#include <algorithm>

#include "doctest.h"
#include "skeltree/validate.hpp"
#include "test_util.hpp"

using namespace skeltree;
using testutil::must_parse;
using testutil::sig_of;

namespace {

bool has_code(const std::vector<Violation>& vs, ViolationCode c) {
  return std::any_of(vs.begin(), vs.end(),
                     [&](const Violation& v) { return v.code == c; });
}

bool has_code_at(const std::vector<Violation>& vs, ViolationCode c, NodeId n) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) {
    return v.code == c && v.node == n;
  });
}

}  // namespace

TEST_SUITE("validate") {

TEST_CASE("a valid split tree passes the degree-3 checks") {
  auto t = must_parse(
      "node s\nnode l\nnode p\nnode q\nnode x\nnode y\nnode u\nnode w\n"
      "arc l s\narc s p\narc s q\narc x p\narc y p\narc u q\narc w q\n");
  CHECK(check_general(t).empty());
  CHECK(count_peaks(t) == 2);
}

TEST_CASE("leaf arcs must point away from the leaf") {
  auto t = must_parse("node a\nnode b\nnode c\narc a b\narc c b\n");
  auto vs = check_general(t);
  // node b has degree 2: interior degree violation, not a leaf one
  CHECK(has_code_at(vs, ViolationCode::G2, 1));
  CHECK_FALSE(has_code(vs, ViolationCode::G1));
  CHECK(count_peaks(t) == 1);

  auto t2 = must_parse(
      "node p\nnode a\nnode b\nnode c\nnode d\n"
      "arc a p\narc b p\narc p c\narc c d\n");
  // d is a leaf with an incoming arc
  auto vs2 = check_general(t2);
  CHECK(has_code_at(vs2, ViolationCode::G1, 4));
}

TEST_CASE("interior nodes with three outgoing arcs are rejected") {
  auto t = must_parse("node v\nnode a\nnode b\nnode c\narc v a\narc v b\narc v c\n");
  auto vs = check_general(t);
  CHECK(has_code_at(vs, ViolationCode::G2, 0));
  // the three leaves each carry an incoming arc
  CHECK(has_code_at(vs, ViolationCode::G1, 1));
}

TEST_CASE("split incoming arcs must come from leaves") {
  auto t = must_parse(
      "node a\nnode b\nnode m\nnode s\nnode x\nnode y\n"
      "arc a m\narc b m\narc m s\narc s x\narc s y\n");
  auto vs = check_general(t);
  CHECK(has_code_at(vs, ViolationCode::G3, 3));
}

TEST_CASE("label conditions at peaks, collapses and splits") {
  // peak with one reflex incoming arc
  auto peak = must_parse(
      "node p\nnode a\nnode b\nnode c\n"
      "arc a p reflex\narc b p convex\narc c p convex\n");
  CHECK(has_code_at(check_labeled(peak), ViolationCode::L1, 0));

  // collapse whose outgoing arc is reflex
  auto col = must_parse(
      "node v\nnode a\nnode b\nnode p\nnode x\nnode y\n"
      "arc a v convex\narc b v convex\narc v p reflex\narc x p convex\narc y p convex\n");
  auto vs = check_labeled(col);
  CHECK(has_code_at(vs, ViolationCode::L2, 0));
  CHECK(has_code_at(vs, ViolationCode::L1, 3));  // and the peak sees it coming in

  // collapse with two reflex incoming arcs
  auto col2 = must_parse(
      "node v\nnode a\nnode b\nnode p\nnode x\nnode y\n"
      "arc a v reflex\narc b v reflex\narc v p convex\narc x p convex\narc y p convex\n");
  CHECK(has_code_at(check_labeled(col2), ViolationCode::L2, 0));

  // split with a convex incoming arc
  auto spl = must_parse(
      "node s\nnode l\nnode p\nnode q\nnode x\nnode y\nnode u\nnode w\n"
      "arc l s convex\narc s p convex\narc s q convex\n"
      "arc x p convex\narc y p convex\narc u q convex\narc w q convex\n");
  CHECK(has_code_at(check_labeled(spl), ViolationCode::L3, 0));

  // and the all-correct labeling passes
  auto good = must_parse(
      "node s\nnode l\nnode p\nnode q\nnode x\nnode y\nnode u\nnode w\n"
      "arc l s reflex\narc s p convex\narc s q convex\n"
      "arc x p convex\narc y p convex\narc u q convex\narc w q convex\n");
  CHECK(check_labeled(good).empty());
}

TEST_CASE("unlabeled trees in the labeled regime report every arc") {
  auto t = must_parse(
      "node p\nnode a\nnode b\nnode c\n"
      "arc a p\narc b p\narc c p\n");
  auto vs = check_labeled(t);
  std::size_t label_violations = 0;
  for (const auto& v : vs)
    if (v.detail.find("no label") != std::string::npos) ++label_violations;
  CHECK(label_violations == 3);
  CHECK(has_code_at(vs, ViolationCode::L1, 0));  // all three arcs head at the peak
}

TEST_CASE("arbitrary regime requires labels outright") {
  auto t = must_parse(
      "node p\nnode a\nnode b\nnode c\narc a p\narc b p\narc c p\n");
  auto vs = check_arbitrary(t);
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].code == ViolationCode::NMismatch);
}

TEST_CASE("arbitrary regime accepts labeled peaks of any degree") {
  auto t3 = must_parse(
      "node p\nnode a\nnode b\nnode c\n"
      "arc a p convex\narc b p convex\narc c p convex\n");
  CHECK(check_arbitrary(t3).empty());

  auto t4 = must_parse(
      "node p\nnode a\nnode b\nnode c\nnode d\n"
      "arc a p convex\narc b p convex\narc c p convex\narc d p convex\n");
  CHECK(check_arbitrary(t4).empty());
}

TEST_CASE("arbitrary regime flags leaves with incoming arcs and bad signatures") {
  auto t = testutil::star_with_signature(sig_of("r^ c^"));
  auto vs = check_arbitrary(t);
  CHECK(has_code_at(vs, ViolationCode::NMismatch, 0));
  CHECK(has_code_at(vs, ViolationCode::LeafInDegree, 1));
  CHECK(has_code_at(vs, ViolationCode::LeafInDegree, 2));

  // single node: no arcs at all
  auto single = must_parse("node only\n");
  CHECK(has_code(check_arbitrary(single), ViolationCode::LeafInDegree));
}

TEST_CASE("peak counting is by out-degree zero") {
  CHECK(count_peaks(must_parse("node only\n")) == 1);
  auto t = must_parse(
      "node s\nnode l\nnode p\nnode q\nnode x\nnode y\nnode u\nnode w\n"
      "arc l s\narc s p\narc s q\narc x p\narc y p\narc u q\narc w q\n");
  CHECK(count_peaks(t) == 2);
}

TEST_CASE("violation report names nodes") {
  auto t = must_parse("node a\nnode b\nnode c\narc a b\narc c b\n");
  auto vs = check_general(t);
  auto report = to_report(vs, t);
  CHECK(report.find("G2 at node b") != std::string::npos);
}

}  // TEST_SUITE
