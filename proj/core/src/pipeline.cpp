#include "skeltree/pipeline.hpp"

#include <chrono>
#include <exception>
#include <stdexcept>

#include "skeltree/skeleton.hpp"

namespace skeltree {

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(
             clock::now().time_since_epoch())
      .count();
}

std::size_t leaf_count(const DirectedOrderedTree& t) {
  std::size_t n = 0;
  for (NodeId v = 0; v < t.node_count(); ++v) n += t.is_leaf(v);
  return n;
}

}  // namespace

IsoLevel regime_level(Regime regime) {
  switch (regime) {
    case Regime::GeneralPosition: return IsoLevel::Directed;
    case Regime::LabeledDeg3: return IsoLevel::DirectedLabeled;
    case Regime::Arbitrary: break;
  }
  return IsoLevel::DirectedLabeledOrdered;
}

std::string PipelineReport::to_text() const {
  std::string out;
  for (const StageReport& s : stages) {
    out += "STAGE " + s.name + (s.pass ? " PASS " : " FAIL ") + s.detail;
    out += '\n';
  }
  return out;
}

PipelineReport run_pipeline(const DirectedOrderedTree& tree, Regime regime,
                            std::optional<IsoLevel> level,
                            const Tolerance& tol) {
  PipelineReport rep;
  const IsoLevel lv = level.value_or(regime_level(regime));
  auto stage = [&rep](const std::string& name, auto&& body) -> bool {
    StageReport s;
    s.name = name;
    const double t0 = now_ms();
    try {
      s.detail = body();
      s.pass = true;
    } catch (const std::exception& e) {
      s.detail = e.what();
      s.pass = false;
    }
    s.millis = now_ms() - t0;
    rep.stages.push_back(std::move(s));
    return rep.stages.back().pass;
  };

  const bool ok_validate = stage("validate", [&] {
    const auto report = regime == Regime::GeneralPosition ? check_general(tree)
                        : regime == Regime::LabeledDeg3   ? check_labeled(tree)
                                                          : check_arbitrary(tree);
    if (!report.empty()) throw std::runtime_error(to_report(report, tree));
    return std::to_string(tree.node_count()) + " nodes, " +
           std::to_string(leaf_count(tree)) + " leaves, regime " +
           to_string(regime);
  });
  if (!ok_validate) return rep;

  const bool ok_realize = stage("realize", [&] {
    Realization r = regime == Regime::GeneralPosition
                        ? build_general_position(tree)
                    : regime == Regime::LabeledDeg3 ? build_labeled(tree)
                                                    : build_arbitrary(tree);
    rep.witness = std::move(r);
    return "witness polygon with " +
           std::to_string(rep.witness->polygon.size()) + " vertices";
  });
  if (!ok_realize) return rep;

  SkeletonResult sk;
  const bool ok_skeleton = stage("skeleton", [&] {
    sk = compute_skeleton(rep.witness->polygon, tol);
    if (!sk.ok()) throw std::runtime_error(sk.error);
    return std::to_string(sk.graph->nodes.size()) + " nodes, " +
           std::to_string(sk.graph->arcs.size()) + " arcs";
  });
  if (!ok_skeleton) return rep;

  rep.pass = stage("verify", [&] {
    if (!isomorphic(tree, directed_labeled_view(*sk.graph), lv, false))
      throw std::runtime_error(std::string("skeleton tree differs at level ") +
                               to_string(lv));
    return std::string("isomorphic at level ") + to_string(lv);
  });
  return rep;
}

}  // namespace skeltree
