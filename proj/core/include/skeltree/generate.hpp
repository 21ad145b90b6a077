#pragma once

#include <cstdint>

#include "skeltree/tree.hpp"
#include "skeltree/validate.hpp"

namespace skeltree {

/* Deterministic random-tree generator: the same spec always yields the
 * same tree, across runs and processes. */
struct GeneratorSpec {
  std::uint64_t seed = 0;
  std::size_t node_budget = 4;  // upper bound on node count; >= 4
  Regime regime = Regime::GeneralPosition;
  double split_probability = 0.25;   // chance of growing extra out-arcs
  double reflex_probability = 0.35;  // chance of reflex flavored growth
};

/* Grows a tree that passes the regime's validator by construction:
 * starts from the one-peak star and repeatedly expands a leaf into an
 * interior node whose signature is drawn from the regime's menu
 * (collapses and splits for degree-3 regimes, the full node pattern
 * menu for the arbitrary regime).  Stops when no expansion fits the
 * budget.  General-position trees come out unlabeled, the other
 * regimes fully labeled. */
DirectedOrderedTree generate_valid_tree(const GeneratorSpec& spec);

}  // namespace skeltree
