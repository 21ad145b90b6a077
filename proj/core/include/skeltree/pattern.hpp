#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skeltree/tree.hpp"

namespace skeltree {

/* Pattern AST over WedgeSymbol with the operator set used by the wedge
 * grammar: concatenation, alternation, star, plus, optional, empty word. */
struct PatternExpr {
  enum class Op : std::uint8_t { Empty, Symbol, Concat, Alt, Star, Plus, Opt };
  Op op = Op::Empty;
  WedgeSymbol symbol = WedgeSymbol::InReflex;
  std::vector<PatternExpr> kids;
};

namespace pat {
PatternExpr empty();
PatternExpr sym(WedgeSymbol s);
PatternExpr seq(std::vector<PatternExpr> kids);
PatternExpr alt(std::vector<PatternExpr> kids);
PatternExpr star(PatternExpr kid);
PatternExpr plus(PatternExpr kid);
PatternExpr opt(PatternExpr kid);
}  // namespace pat

/* The named wedge and node patterns:
 *   R   = r (c r)*          reflex wedge
 *   R+  = r (c r)+          non-trivial reflex wedge
 *   C   = r? c (r? c)* r?   convex wedge
 *   C+  = C, length >= 2    non-trivial convex wedge
 *   P   = empty word        trivial pi-wedge (parallel edges excluded)
 *   F   = c (r? c)* c (r? c)* c (r? c)*   full wedge
 *   N_a = C+ c^   N_b = C c^ (R c^)+   N_d = P c^ (R c^)+
 *   N_e = R+ r^   N_f = (R c^)+ R r^   N_g = (R c^)+ R c^   N_h = F
 *   N   = N_a|N_b|N_d|N_e|N_f|N_g|N_h */
const std::vector<std::pair<std::string, PatternExpr>>& builtin_patterns();

const PatternExpr& builtin_pattern(const std::string& name);

bool match_linear(const PatternExpr& pattern, const NodeSignature& word);

/* Smallest rotation offset k such that signature[k..]+signature[..k]
 * matches the pattern linearly; absent if no rotation matches. */
std::optional<int> match_cyclic(const PatternExpr& pattern, const NodeSignature& signature);

enum class WedgeKind : std::uint8_t { Reflex, Convex, Pi, Full };

struct Wedge {
  WedgeKind kind;
  std::vector<WedgeSymbol> slice;  // incoming symbols swept by this wedge
};

/* One rotation of a signature cut into wedges and the outgoing separator
 * symbols between them: wedge[0] sep[0] wedge[1] sep[1] ... reproduces the
 * rotated signature.  A Full decomposition has one wedge, no separators. */
struct WedgeDecomposition {
  std::string variant;  // "N_a".."N_h"
  int rotation = 0;     // offset applied to the input signature
  std::vector<Wedge> wedges;
  std::vector<WedgeSymbol> separators;
};

/* Matches the signature cyclically against the N variants in precedence
 * order N_h, N_a, N_e, N_g, N_f, N_b, N_d (most constrained first); for
 * the winning variant the smallest rotation offset is used. */
std::optional<WedgeDecomposition> classify_signature(const NodeSignature& signature);

std::string to_string(const WedgeDecomposition& d);  // "N_d: [P:∅] ĉ [R:r c r] ĉ"

}  // namespace skeltree
