#pragma once

#include <map>
#include <memory>

#include "mivc/induction_engine.hpp"

namespace mivc {

// Shared state for one (system, element universe, property) analysis:
// a lazily created activation-mode verifier and cut-mode verifier, each
// owning one solver session that is reused across every query of the
// analysis.
class EngineContext {
 public:
  EngineContext(const TransitionSystem& ts, ElementIdSet universe, size_t prop_index,
                SolverConfig cfg, EngineOptions opts)
      : ts_(ts),
        universe_(std::move(universe)),
        prop_index_(prop_index),
        cfg_(std::move(cfg)),
        opts_(opts) {}

  const TransitionSystem& ts() const { return ts_; }
  const ElementIdSet& universe() const { return universe_; }
  size_t prop_index() const { return prop_index_; }
  const Property& property() const { return ts_.properties.at(prop_index_); }
  const SolverConfig& solver_config() const { return cfg_; }
  const EngineOptions& options() const { return opts_; }

  DualEngine& engine() {
    if (!engine_) engine_ = std::make_unique<DualEngine>(ts_, universe_, cfg_);
    return *engine_;
  }

  // Memoized per active set: verdicts within one analysis context are
  // deterministic replays, and several phases probe the same subsets.
  VerifyOutcome verify_active(const ElementIdSet& active, bool collect_cores = false) {
    auto it = verify_cache_.find(active);
    if (it != verify_cache_.end() && (!collect_cores || it->second.second))
      return it->second.first;
    VerifyOutcome out = engine().verify_active(prop_index_, active, opts_, collect_cores);
    verify_cache_[active] = {out, collect_cores};
    return out;
  }

  // A cut query with an empty candidate set or a zero cardinality cap is the
  // plain verification of the full universe.
  VerifyOutcome verify_cut(const ElementIdSet& cuttable, std::optional<int> at_most) {
    if (cuttable.empty() || (at_most && *at_most <= 0)) return verify_active(universe_);
    return engine().verify_cut(prop_index_, cuttable, at_most, opts_);
  }

 private:
  const TransitionSystem& ts_;
  ElementIdSet universe_;
  size_t prop_index_;
  SolverConfig cfg_;
  EngineOptions opts_;
  std::unique_ptr<DualEngine> engine_;
  std::map<ElementIdSet, std::pair<VerifyOutcome, bool>> verify_cache_;
};

}  // namespace mivc
