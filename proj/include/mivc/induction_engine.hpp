#pragma once

#include <memory>
#include <optional>

#include "mivc/solver_session.hpp"
#include "mivc/transition_system.hpp"

namespace mivc {

struct EngineOptions {
  int kmax = 10;                // highest induction depth tried
  long long budget_ms = 60000;  // wall budget for one verify call
};

struct VerifyOutcome {
  enum class Verdict { Safe, Unsafe, Unknown };
  Verdict verdict = Verdict::Unknown;
  int k = -1;         // Safe: induction depth used
  Trace trace;        // Unsafe: witness; includes cut selectors in cut mode
  ElementIdSet core;  // Safe with core collection: union of query cores
  UnknownReason unknown_reason = UnknownReason::Incomplete;

  bool safe() const { return verdict == Verdict::Safe; }
  bool unsafe() const { return verdict == Verdict::Unsafe; }
  bool unknown() const { return verdict == Verdict::Unknown; }
};

// Solver symbol naming shared by the engines and tests.
std::string activation_var_name(ElementId id);  // element activation literal
std::string cut_var_name(ElementId id);         // per-element cut selector

// The Verify(I, T, P) oracle: bounded model checking plus k-induction over
// one incremental solver session. Every universe element is asserted under
// a dual guard (activation literal and negated cut selector), so one
// unrolling answers both kinds of query:
//
//   verify_active  - IVC side: the active element subset is chosen through
//                    activation assumptions, all cut selectors held false;
//                    unsat cores range over exactly the activations.
//   verify_cut     - blame side: all activations held true, cut selectors
//                    free (bounded by a cardinality cap); a true selector
//                    removes the element, selectors are rigid.
//
// Elements outside the universe are always present.
class DualEngine {
 public:
  DualEngine(const TransitionSystem& ts, ElementIdSet universe, SolverConfig cfg);
  ~DualEngine();
  DualEngine(const DualEngine&) = delete;
  DualEngine& operator=(const DualEngine&) = delete;

  VerifyOutcome verify_active(size_t prop_index, const ElementIdSet& active,
                              const EngineOptions& opts, bool collect_cores = false);

  // Counterexample search where only `cuttable` selectors may be true, at
  // most `at_most` of them (unbounded if nullopt). Unsafe traces carry the
  // selector values.
  VerifyOutcome verify_cut(size_t prop_index, const ElementIdSet& cuttable,
                           std::optional<int> at_most, const EngineOptions& opts);

  // Blocking clauses for cut-set enumeration: while a scope is open,
  // verify_cut queries exclude any cut set containing a blocked one.
  // Clauses of closed scopes become inert. Scopes do not nest.
  void begin_scope();
  void end_scope();
  void block_superset(const ElementIdSet& cut);

  const ElementIdSet& universe() const;
  Session& session();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Exact, solver-free certification: true iff the trace satisfies every
// present element's conjuncts at every step and violates the property at the
// last step. `active` lists the present selectable elements; non-selectable
// elements are always present.
bool replay_trace(const TransitionSystem& ts, const ElementIdSet& active,
                  const Property& prop, const Trace& trace);

}  // namespace mivc
