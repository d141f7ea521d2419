#include "mivc/mcs_engine.hpp"

#include "mivc/ivc_engine.hpp"

namespace mivc {

const std::string& InstrumentedSystem::selector_for(ElementId id) const {
  for (const auto& [eid, name] : selectors)
    if (eid == id) return name;
  throw EvaluationError("no cut selector for element " + std::to_string(id));
}

InstrumentedSystem instrument(const TransitionSystem& ts, const ElementIdSet& elements) {
  InstrumentedSystem inst;
  inst.base = &ts;
  for (ElementId id : elements) {
    if (id < 0 || static_cast<size_t>(id) >= ts.elements.size())
      throw EvaluationError("cut selector requested for unknown element " + std::to_string(id));
    inst.selectors.emplace_back(id, cut_var_name(id));
  }
  return inst;
}

TermPtr at_most_k(const std::vector<std::string>& yvars, int k) {
  TermPtr sum = mk_int(0);
  for (const auto& y : yvars)
    sum = mk_add(sum, mk_ite(mk_var(y, Sort::Bool, false), mk_int(1), mk_int(0)));
  return mk_le(sum, mk_int(k));
}

ElementIdSet extract_cut_set(const Trace& trace, const InstrumentedSystem& inst,
                             const ElementIdSet& candidates) {
  if (trace.empty()) throw EvaluationError("cannot extract a cut set from an empty trace");
  ElementIdSet cut;
  for (const auto& [id, yvar] : inst.selectors) {
    if (!candidates.count(id)) continue;
    auto it = trace.steps.front().find(yvar);
    if (it == trace.steps.front().end())
      throw EvaluationError("trace misses cut selector " + yvar);
    if (std::holds_alternative<bool>(it->second) && std::get<bool>(it->second)) cut.insert(id);
  }
  return cut;
}

namespace {

// Descent phase: peel the cardinality bound down from m while
// counterexamples keep appearing. Returns the final verify outcome, the
// deepest counterexample, and the bound reached.
struct DescentResult {
  VerifyOutcome last;
  std::optional<Trace> best_trace;
  int k = 0;
};

DescentResult descend(EngineContext& ctx, const ElementIdSet& candidates, int m) {
  DescentResult r;
  r.k = m;
  while (true) {
    r.last = ctx.verify_cut(candidates, r.k);
    if (!r.last.unsafe()) break;
    r.best_trace = r.last.trace;
    --r.k;
    if (r.k < 0) break;
  }
  return r;
}

ElementIdSet cut_from_trace(const EngineContext& ctx, const Trace& trace,
                            const ElementIdSet& candidates) {
  InstrumentedSystem inst = instrument(ctx.ts(), ctx.universe());
  return extract_cut_set(trace, inst, candidates);
}

}  // namespace

McsEnumeration all_mcs_up_to_ub(EngineContext& ctx, const ElementIdSet& candidates, int ub) {
  McsEnumeration out;
  bool approx = false;
  const int m = std::min<int>(ub, static_cast<int>(candidates.size()));

  DescentResult d = descend(ctx, candidates, m);
  approx = approx || d.last.unknown();

  if (d.k < m) {
    if (d.k < 0) {
      // the unweakened system already violates the property
      out.mcs.push_back({ElementIdSet{}, approx});
    } else {
      int k = d.k + 1;  // cardinality of a smallest cut set
      DualEngine& engine = ctx.engine();
      ElementIdSet first = cut_from_trace(ctx, *d.best_trace, candidates);
      out.mcs.push_back({first, approx});
      engine.begin_scope();
      engine.block_superset(first);
      while (k <= m) {
        VerifyOutcome res = engine.verify_cut(ctx.prop_index(), candidates, k, ctx.options());
        while (res.unsafe()) {
          ElementIdSet c = cut_from_trace(ctx, res.trace, candidates);
          out.mcs.push_back({c, approx});
          engine.block_superset(c);
          res = engine.verify_cut(ctx.prop_index(), candidates, k, ctx.options());
        }
        approx = approx || res.unknown();
        ++k;
      }
      engine.end_scope();
    }
  }
  out.complete = !approx;
  return out;
}

std::optional<McsResult> get_single_mcs(EngineContext& ctx, const ElementIdSet& candidates) {
  const int m = static_cast<int>(candidates.size());
  DescentResult d = descend(ctx, candidates, m);
  bool approx = d.last.unknown();
  if (!d.best_trace) {
    if (d.last.safe()) throw NoCutSetExists();
    return std::nullopt;  // inconclusive: no cut found, none excluded
  }
  // unsafe even with every selector off: the empty set is the cut set
  if (d.k < 0) return McsResult{ElementIdSet{}, approx};
  return McsResult{cut_from_trace(ctx, *d.best_trace, candidates), approx};
}

std::pair<ElementIdSet, bool> must_set(EngineContext& ctx) {
  IvcResult ivc = get_approximate_mivc(ctx);
  McsEnumeration singles = all_mcs_up_to_ub(ctx, ivc.elements, 1);
  ElementIdSet must;
  for (const auto& s : singles.mcs)
    if (!s.approximate && s.elements.size() == 1) must.insert(*s.elements.begin());
  return {must, !singles.complete};
}

}  // namespace mivc
