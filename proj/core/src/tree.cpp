#include "skeltree/tree.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>

namespace skeltree {

std::size_t DirectedOrderedTree::in_degree(NodeId v) const {
  std::size_t n = 0;
  for (ArcId a : rotation[v])
    if (arcs[a].head == v) ++n;
  return n;
}

std::size_t DirectedOrderedTree::out_degree(NodeId v) const {
  std::size_t n = 0;
  for (ArcId a : rotation[v])
    if (arcs[a].tail == v) ++n;
  return n;
}

bool DirectedOrderedTree::labeled() const {
  if (arcs.empty()) return false;
  for (const Arc& a : arcs)
    if (!a.label) return false;
  return true;
}

NodeClass classify_node(const DirectedOrderedTree& tree, NodeId node) {
  if (tree.is_leaf(node)) return NodeClass::Leaf;
  if (tree.degree(node) == 3) {
    switch (tree.in_degree(node)) {
      case 3: return NodeClass::Peak;
      case 2: return NodeClass::Collapse;
      case 1: return NodeClass::Split;
      default: break;  // in-degree 0: no kinetic interpretation
    }
  }
  return NodeClass::General;
}

const char* to_string(NodeClass c) {
  switch (c) {
    case NodeClass::Leaf: return "leaf";
    case NodeClass::Peak: return "peak";
    case NodeClass::Collapse: return "collapse";
    case NodeClass::Split: return "split";
    case NodeClass::General: return "general";
  }
  return "?";
}

std::optional<std::vector<ArcLabel>> effective_labels(const DirectedOrderedTree& tree) {
  std::vector<ArcLabel> out(tree.arc_count(), ArcLabel::Convex);
  if (tree.labeled()) {
    for (ArcId a = 0; a < tree.arc_count(); ++a) out[a] = *tree.arcs[a].label;
    return out;
  }
  for (NodeId v = 0; v < tree.node_count(); ++v)
    if (!tree.is_leaf(v) && tree.degree(v) != 3) return std::nullopt;
  // Implied labels: an arc is reflex iff it runs from a leaf into a split
  // node; every other arc is convex.
  for (ArcId a = 0; a < tree.arc_count(); ++a) {
    const Arc& arc = tree.arcs[a];
    if (tree.is_leaf(arc.tail) &&
        classify_node(tree, arc.head) == NodeClass::Split)
      out[a] = ArcLabel::Reflex;
  }
  return out;
}

std::optional<NodeSignature> node_signature(const DirectedOrderedTree& tree, NodeId node) {
  auto labels = effective_labels(tree);
  if (!labels) return std::nullopt;
  NodeSignature sig;
  sig.reserve(tree.degree(node));
  for (ArcId a : tree.rotation[node]) {
    bool out = tree.is_outgoing(a, node);
    bool reflex = (*labels)[a] == ArcLabel::Reflex;
    sig.push_back(out ? (reflex ? WedgeSymbol::OutReflex : WedgeSymbol::OutConvex)
                      : (reflex ? WedgeSymbol::InReflex : WedgeSymbol::InConvex));
  }
  return sig;
}

std::string to_display(WedgeSymbol s) {
  switch (s) {
    case WedgeSymbol::InReflex: return "r";
    case WedgeSymbol::InConvex: return "c";
    case WedgeSymbol::OutReflex: return "r\xCC\x82";   // r + combining circumflex
    case WedgeSymbol::OutConvex: return "c\xCC\x82";
  }
  return "?";
}

std::string to_string(const NodeSignature& sig) {
  std::string out;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    if (i) out += ' ';
    out += to_display(sig[i]);
  }
  return out;
}

namespace {

struct Token {
  std::string text;
  int column = 0;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) { ++i; continue; }
    if (line[i] == '#') break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

}  // namespace

ParseResult parse_tree(const std::string& text) {
  ParseResult result;
  DirectedOrderedTree tree;
  std::map<std::string, NodeId> by_name;
  // order overrides recorded per node until all arcs are known
  std::vector<std::pair<NodeId, std::vector<ArcId>>> orders;
  std::vector<int> order_line_of_node;
  auto err = [&](int line, int col, std::string msg) {
    result.errors.push_back({line, col, std::move(msg)});
  };

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int labeled_arcs = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto tok = tokenize(line);
    if (tok.empty()) continue;
    const std::string& kw = tok[0].text;
    if (kw == "node") {
      if (tok.size() != 2) {
        err(lineno, tok[0].column, "expected: node <name>");
        continue;
      }
      if (by_name.count(tok[1].text)) {
        err(lineno, tok[1].column, "duplicate node name '" + tok[1].text + "'");
        continue;
      }
      by_name[tok[1].text] = static_cast<NodeId>(tree.names.size());
      tree.names.push_back(tok[1].text);
      tree.rotation.emplace_back();
      order_line_of_node.push_back(0);
    } else if (kw == "arc") {
      if (tok.size() != 3 && tok.size() != 4) {
        err(lineno, tok[0].column, "expected: arc <tail> <head> [reflex|convex]");
        continue;
      }
      auto tail = by_name.find(tok[1].text);
      auto head = by_name.find(tok[2].text);
      if (tail == by_name.end()) {
        err(lineno, tok[1].column, "unknown node '" + tok[1].text + "'");
        continue;
      }
      if (head == by_name.end()) {
        err(lineno, tok[2].column, "unknown node '" + tok[2].text + "'");
        continue;
      }
      if (tail->second == head->second) {
        err(lineno, tok[1].column, "self-loop at '" + tok[1].text + "'");
        continue;
      }
      Arc arc;
      arc.tail = tail->second;
      arc.head = head->second;
      if (tok.size() == 4) {
        if (tok[3].text == "reflex") arc.label = ArcLabel::Reflex;
        else if (tok[3].text == "convex") arc.label = ArcLabel::Convex;
        else {
          err(lineno, tok[3].column, "label must be 'reflex' or 'convex'");
          continue;
        }
        ++labeled_arcs;
      }
      for (ArcId a : tree.rotation[arc.tail]) {
        NodeId u = tree.other_end(a, arc.tail);
        if (u == arc.head) {
          err(lineno, tok[1].column, "duplicate arc between '" + tok[1].text +
                                         "' and '" + tok[2].text + "'");
          arc.tail = kNoNode;
          break;
        }
      }
      if (arc.tail == kNoNode) continue;
      ArcId id = static_cast<ArcId>(tree.arcs.size());
      tree.arcs.push_back(arc);
      tree.rotation[arc.tail].push_back(id);
      tree.rotation[arc.head].push_back(id);
    } else if (kw == "order") {
      if (tok.size() < 2) {
        err(lineno, tok[0].column, "expected: order <name> <arc-index> ...");
        continue;
      }
      auto node = by_name.find(tok[1].text);
      if (node == by_name.end()) {
        err(lineno, tok[1].column, "unknown node '" + tok[1].text + "'");
        continue;
      }
      if (order_line_of_node[node->second]) {
        err(lineno, tok[1].column, "duplicate order line for '" + tok[1].text + "'");
        continue;
      }
      order_line_of_node[node->second] = lineno;
      std::vector<ArcId> ids;
      bool bad = false;
      for (std::size_t i = 2; i < tok.size(); ++i) {
        unsigned long v = 0;
        auto [p, ec] = std::from_chars(tok[i].text.data(),
                                       tok[i].text.data() + tok[i].text.size(), v);
        if (ec != std::errc() || p != tok[i].text.data() + tok[i].text.size()) {
          err(lineno, tok[i].column, "arc index expected, got '" + tok[i].text + "'");
          bad = true;
          break;
        }
        ids.push_back(static_cast<ArcId>(v));
      }
      if (!bad) orders.emplace_back(node->second, std::move(ids));
    } else {
      err(lineno, tok[0].column, "unknown directive '" + kw + "'");
    }
  }

  if (tree.names.empty()) {
    err(0, 0, "no nodes declared");
    return result;
  }
  if (labeled_arcs != 0 && labeled_arcs != static_cast<int>(tree.arcs.size()))
    err(0, 0, "mixed labeling: either all arcs carry labels or none");
  if (tree.arc_count() + 1 != tree.node_count())
    err(0, 0, "not a tree: " + std::to_string(tree.node_count()) + " nodes need " +
                  std::to_string(tree.node_count() - 1) + " arcs, got " +
                  std::to_string(tree.arc_count()));

  // connectivity (acyclicity follows from the arc count once connected)
  if (result.errors.empty()) {
    std::vector<char> seen(tree.node_count(), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (ArcId a : tree.rotation[v]) {
        NodeId u = tree.other_end(a, v);
        if (!seen[u]) {
          seen[u] = 1;
          ++reached;
          stack.push_back(u);
        }
      }
    }
    if (reached != tree.node_count()) err(0, 0, "tree is disconnected");
  }

  // apply order overrides: each must list exactly the incident arcs
  for (auto& [v, ids] : orders) {
    std::vector<ArcId> sorted_given = ids;
    std::vector<ArcId> sorted_have = tree.rotation[v];
    std::sort(sorted_given.begin(), sorted_given.end());
    std::sort(sorted_have.begin(), sorted_have.end());
    if (sorted_given != sorted_have) {
      err(order_line_of_node[v], 1,
          "order line for '" + tree.names[v] +
              "' must list exactly its incident arc indices");
      continue;
    }
    tree.rotation[v] = ids;
  }

  if (!result.errors.empty()) return result;
  result.tree = std::move(tree);
  return result;
}

std::string serialize_tree(const DirectedOrderedTree& tree) {
  std::ostringstream out;
  for (const std::string& name : tree.names) out << "node " << name << "\n";
  for (const Arc& a : tree.arcs) {
    out << "arc " << tree.names[a.tail] << " " << tree.names[a.head];
    if (a.label)
      out << (*a.label == ArcLabel::Reflex ? " reflex" : " convex");
    out << "\n";
  }
  for (NodeId v = 0; v < tree.node_count(); ++v) {
    out << "order " << tree.names[v];
    for (ArcId a : tree.rotation[v]) out << " " << a;
    out << "\n";
  }
  return out.str();
}

}  // namespace skeltree
