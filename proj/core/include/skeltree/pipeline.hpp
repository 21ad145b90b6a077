#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skeltree/construct.hpp"
#include "skeltree/geometry.hpp"
#include "skeltree/validate.hpp"
#include "skeltree/verify.hpp"

namespace skeltree {

struct StageReport {
  std::string name;
  bool pass = false;
  std::string detail;  // deterministic: no timings, no addresses
  double millis = 0;   // wall time, reported separately from detail
};

struct PipelineReport {
  std::vector<StageReport> stages;
  bool pass = false;  // true iff every stage ran and passed
  std::optional<Realization> witness;

  /* One "STAGE name PASS|FAIL detail" line per executed stage.
   * Deterministic for identical inputs. */
  std::string to_text() const;
};

/* validate -> realize -> skeleton -> verify, stopping at the first
 * failing stage.  The verify level is the regime's own: Directed for
 * general position, DirectedLabeled for labeled, DirectedLabeledOrdered
 * for arbitrary; `level` overrides it when set. */
PipelineReport run_pipeline(const DirectedOrderedTree& tree, Regime regime,
                            std::optional<IsoLevel> level = {},
                            const Tolerance& tol = {});

/* The strictness the regime's round-trip theorem guarantees. */
IsoLevel regime_level(Regime regime);

}  // namespace skeltree
