#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mivc/engine_context.hpp"

namespace mivc {

struct McsResult {
  ElementIdSet elements;
  bool approximate = false;
};

// Thrown by get_single_mcs when the property provably cannot be violated by
// removing any subset of the candidate elements.
struct NoCutSetExists : std::runtime_error {
  NoCutSetExists() : std::runtime_error("no cut set exists over the candidate elements") {}
};

// Metadata of the cut instrumentation: one rigid Boolean selector per
// element of E; a true selector removes the element's conjuncts.
struct InstrumentedSystem {
  const TransitionSystem* base = nullptr;
  std::vector<std::pair<ElementId, std::string>> selectors;  // id -> y variable

  const std::string& selector_for(ElementId id) const;
};

InstrumentedSystem instrument(const TransitionSystem& ts, const ElementIdSet& elements);

// True exactly on assignments with at most k true variables, as an integer
// sum of indicators.
TermPtr at_most_k(const std::vector<std::string>& yvars, int k);

// The cut set of an instrumented counterexample: elements whose selector is
// true at step 0. Throws EvaluationError if a selector is missing.
ElementIdSet extract_cut_set(const Trace& trace, const InstrumentedSystem& inst,
                             const ElementIdSet& candidates);

struct McsEnumeration {
  std::vector<McsResult> mcs;
  bool complete = false;
};

// All minimal cut sets over `candidates` with cardinality at most ub,
// found in layers of increasing cardinality. Elements of the universe
// outside `candidates` are kept on.
McsEnumeration all_mcs_up_to_ub(EngineContext& ctx, const ElementIdSet& candidates, int ub);

// The descent phase only: one smallest cut set over `candidates`, flagged
// approximate if an unknown result interrupted the descent. Returns nullopt
// when the solver could neither find a cut nor prove none exists.
std::optional<McsResult> get_single_mcs(EngineContext& ctx, const ElementIdSet& candidates);

// MUST set: the union of all singleton cut sets, searched inside an
// approximate validity core. The flag marks an underapproximation.
std::pair<ElementIdSet, bool> must_set(EngineContext& ctx);

}  // namespace mivc
