#pragma once

#include <optional>
#include <string>

#include "skeltree/tree.hpp"

namespace skeltree {

/* How much structure an isomorphism must preserve.  Each level includes
 * the previous: arc directions; plus arc labels; plus the cyclic order
 * of arcs around every node (up to rotation, not reflection). */
enum class IsoLevel { Directed, DirectedLabeled, DirectedLabeledOrdered };

std::string to_string(IsoLevel level);
std::optional<IsoLevel> parse_iso_level(const std::string& name);

/* Canonical encoding: the tree is rooted at its unique peak when it has
 * exactly one, otherwise at its centroid (taking the smaller string over
 * the at most two candidates).  At the ordered level the root's cyclic
 * arc order is canonicalized over rotations only; allow_mirror also
 * admits the reflected embedding.  Equal strings = isomorphic trees. */
std::string canonical_form(const DirectedOrderedTree& t, IsoLevel level,
                           bool allow_mirror = false);

bool isomorphic(const DirectedOrderedTree& a, const DirectedOrderedTree& b,
                IsoLevel level, bool allow_mirror = false);

}  // namespace skeltree
