#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

#include "skeltree/tree.hpp"

/* Shared helpers for the test binaries.  Signatures are written in ASCII
 * here ("r c r^ c^"), with ^ marking outgoing symbols. */
namespace testutil {

inline skeltree::NodeSignature sig_of(const std::string& text) {
  using skeltree::WedgeSymbol;
  skeltree::NodeSignature out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == "r") out.push_back(WedgeSymbol::InReflex);
    else if (tok == "c") out.push_back(WedgeSymbol::InConvex);
    else if (tok == "r^") out.push_back(WedgeSymbol::OutReflex);
    else if (tok == "c^") out.push_back(WedgeSymbol::OutConvex);
    else throw std::runtime_error("bad signature token '" + tok + "'");
  }
  return out;
}

inline std::string oracle_word(const skeltree::NodeSignature& sig) {
  std::string out;
  for (skeltree::WedgeSymbol s : sig) {
    switch (s) {
      case skeltree::WedgeSymbol::InReflex: out += 'r'; break;
      case skeltree::WedgeSymbol::InConvex: out += 'c'; break;
      case skeltree::WedgeSymbol::OutReflex: out += 'R'; break;
      case skeltree::WedgeSymbol::OutConvex: out += 'C'; break;
    }
  }
  return out;
}

/* Star tree realizing a given signature at its center (node 0); arcs are
 * labeled from the signature.  Useful for signature-level tests; no claim
 * of regime validity. */
inline skeltree::DirectedOrderedTree star_with_signature(const skeltree::NodeSignature& sig) {
  using namespace skeltree;
  DirectedOrderedTree t;
  t.names.push_back("v");
  t.rotation.emplace_back();
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const NodeId leaf = static_cast<NodeId>(t.names.size());
    t.names.push_back("l" + std::to_string(i));
    t.rotation.emplace_back();
    Arc a;
    a.label = is_reflex(sig[i]) ? ArcLabel::Reflex : ArcLabel::Convex;
    if (is_outgoing(sig[i])) {
      a.tail = 0;
      a.head = leaf;
    } else {
      a.tail = leaf;
      a.head = 0;
    }
    const ArcId id = static_cast<ArcId>(t.arcs.size());
    t.arcs.push_back(a);
    t.rotation[0].push_back(id);
    t.rotation[leaf].push_back(id);
  }
  return t;
}

inline skeltree::DirectedOrderedTree must_parse(const std::string& text) {
  auto r = skeltree::parse_tree(text);
  if (!r.ok()) {
    std::string msg = "parse failed:";
    for (const auto& e : r.errors) msg += " [" + std::to_string(e.line) + "] " + e.message;
    throw std::runtime_error(msg);
  }
  return *r.tree;
}

}  // namespace testutil
