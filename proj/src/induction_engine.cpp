#include "mivc/induction_engine.hpp"

#include <chrono>
#include <sstream>

namespace mivc {

std::string activation_var_name(ElementId id) { return "elem!" + std::to_string(id); }
std::string cut_var_name(ElementId id) { return "cut!" + std::to_string(id); }

namespace {

using Clock = std::chrono::steady_clock;

long long ms_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

std::string frame_var(const std::string& name, int frame) {
  return name + "@" + std::to_string(frame);
}

}  // namespace

// Frame-indexed encoding of the transition system. Initial conjuncts are
// conditioned on the frame-0 init flag so the same unrolling serves base
// and step queries.
struct DualEngine::Impl {
  Impl(const TransitionSystem& ts, ElementIdSet universe, SolverConfig cfg)
      : ts(ts), universe(std::move(universe)), session(std::move(cfg)) {
    for (ElementId id : this->universe) {
      session.declare_const(activation_var_name(id), "Bool");
      session.declare_const(cut_var_name(id), "Bool");
    }
    init_flag0 = frame_var(ts.init_flag, 0);
    declare_frame(0);
    assert_frame0();
  }

  std::string guarded(ElementId id, const std::string& formula) const {
    if (!universe.count(id)) return formula;
    return "(=> (and " + activation_var_name(id) + " (not " + cut_var_name(id) + ")) " +
           formula + ")";
  }

  void declare_frame(int t) {
    for (const auto& v : ts.state_vars)
      session.declare_const(frame_var(v.name, t), smt_sort(v.sort));
  }

  void assert_frame0() {
    for (const auto& e : ts.elements)
      for (const auto& c : e.init_conjuncts)
        session.assert_raw(
            guarded(e.id, "(=> " + init_flag0 + " " + print_smt(*c, 0) + ")"));
    for (size_t p = 0; p < ts.properties.size(); ++p) {
      std::string def = prop_lit(p, 0);
      session.declare_const(def, "Bool");
      session.assert_raw("(= " + def + " (=> " + init_flag0 + " " +
                         print_smt(*ts.properties[p].init_form, 0) + "))");
    }
  }

  void unroll_to(int n) {
    while (frames < n) {
      int t = ++frames;
      declare_frame(t);
      for (const auto& e : ts.elements)
        for (const auto& c : e.trans_conjuncts)
          session.assert_raw(guarded(e.id, print_smt(*c, t - 1)));
      for (size_t p = 0; p < ts.properties.size(); ++p) {
        std::string def = prop_lit(p, t);
        session.declare_const(def, "Bool");
        session.assert_raw("(= " + def + " " + print_smt(*ts.properties[p].trans_form, t - 1) +
                           ")");
      }
    }
  }

  std::string prop_lit(size_t prop_index, int t) const {
    return "prop!" + std::to_string(prop_index) + "!" + std::to_string(t);
  }

  std::string amk_lit(int k) {
    if (!amk_declared.count(k)) {
      std::string name = "amk!" + std::to_string(k);
      std::ostringstream sum;
      sum << "(+ 0";
      for (ElementId id : universe) sum << " (ite " << cut_var_name(id) << " 1 0)";
      sum << ")";
      session.declare_const(name, "Bool");
      session.assert_raw("(=> " + name + " (<= " + sum.str() + " " + std::to_string(k) + "))");
      amk_declared.insert(k);
    }
    return "amk!" + std::to_string(k);
  }

  // Extracts steps 0..depth; extra symbols are replicated into every step.
  Trace extract_trace(int depth, const std::vector<std::string>& extra_symbols) {
    std::vector<std::string> symbols;
    for (int t = 0; t <= depth; ++t)
      for (const auto& v : ts.state_vars) symbols.push_back(frame_var(v.name, t));
    for (const auto& s : extra_symbols) symbols.push_back(s);
    auto values = session.get_values(symbols);
    Trace trace;
    trace.steps.resize(static_cast<size_t>(depth) + 1);
    for (int t = 0; t <= depth; ++t) {
      auto& step = trace.steps[static_cast<size_t>(t)];
      for (const auto& v : ts.state_vars) {
        auto it = values.find(frame_var(v.name, t));
        if (it == values.end())
          throw ProtocolError("model misses variable " + frame_var(v.name, t));
        step[v.name] = it->second;
      }
      for (const auto& s : extra_symbols) {
        auto it = values.find(s);
        if (it != values.end()) step[s] = it->second;
      }
    }
    return trace;
  }

  // The BMC + k-induction loop shared by both query modes.
  VerifyOutcome run(size_t prop_index, std::vector<Literal> base_assumptions,
                    const EngineOptions& opts, bool collect_cores,
                    const std::vector<std::string>& trace_extras) {
    auto start = Clock::now();
    const int per_query = session.config().query_timeout_ms;

    VerifyOutcome out;
    ElementIdSet core_union;
    auto remaining = [&]() { return opts.budget_ms - ms_since(start); };

    auto fold_core = [&](const std::vector<Literal>& core) {
      for (const auto& lit : core) {
        if (!lit.positive) continue;
        if (lit.name.rfind("elem!", 0) == 0)
          core_union.insert(static_cast<ElementId>(std::stoi(lit.name.substr(5))));
      }
    };

    for (int w = 1; w - 1 <= opts.kmax; ++w) {
      if (remaining() <= 0) {
        out.verdict = VerifyOutcome::Verdict::Unknown;
        out.unknown_reason = UnknownReason::Timeout;
        return out;
      }
      session.set_query_timeout(
          static_cast<int>(std::min<long long>(per_query, std::max<long long>(remaining(), 1))));
      unroll_to(w);

      // base case at depth w-1: first violation at exactly that depth
      {
        std::vector<Literal> assumptions = base_assumptions;
        assumptions.push_back({init_flag0, true});
        for (int j = 0; j <= w - 2; ++j) assumptions.push_back({prop_lit(prop_index, j), true});
        assumptions.push_back({prop_lit(prop_index, w - 1), false});
        SatResult res = session.check_assuming(assumptions);
        if (res.is_sat()) {
          out.verdict = VerifyOutcome::Verdict::Unsafe;
          out.trace = extract_trace(w - 1, trace_extras);
          return out;
        }
        if (res.is_unknown()) {
          out.verdict = VerifyOutcome::Verdict::Unknown;
          out.unknown_reason = res.reason;
          return out;
        }
        if (collect_cores) fold_core(res.core);
      }

      if (remaining() <= 0) {
        out.verdict = VerifyOutcome::Verdict::Unknown;
        out.unknown_reason = UnknownReason::Timeout;
        return out;
      }
      session.set_query_timeout(
          static_cast<int>(std::min<long long>(per_query, std::max<long long>(remaining(), 1))));

      // induction step over a window of w transitions
      {
        std::vector<Literal> assumptions = base_assumptions;
        assumptions.push_back({init_flag0, false});
        for (int j = 1; j <= w - 1; ++j) assumptions.push_back({prop_lit(prop_index, j), true});
        assumptions.push_back({prop_lit(prop_index, w), false});
        SatResult res = session.check_assuming(assumptions);
        if (res.is_unsat()) {
          if (collect_cores) fold_core(res.core);
          out.verdict = VerifyOutcome::Verdict::Safe;
          out.k = w - 1;
          out.core = std::move(core_union);
          return out;
        }
        if (res.is_unknown()) {
          out.verdict = VerifyOutcome::Verdict::Unknown;
          out.unknown_reason = res.reason;
          return out;
        }
        // satisfiable: no proof at this depth, widen the window
      }
    }
    out.verdict = VerifyOutcome::Verdict::Unknown;
    out.unknown_reason = UnknownReason::Incomplete;
    return out;
  }

  const TransitionSystem& ts;
  ElementIdSet universe;
  Session session;
  std::string init_flag0;
  int frames = 0;
  std::set<int> amk_declared;
  std::optional<std::string> active_scope;
  int scope_counter = 0;
};

DualEngine::DualEngine(const TransitionSystem& ts, ElementIdSet universe, SolverConfig cfg)
    : impl_(std::make_unique<Impl>(ts, std::move(universe), std::move(cfg))) {}

DualEngine::~DualEngine() = default;

VerifyOutcome DualEngine::verify_active(size_t prop_index, const ElementIdSet& active,
                                        const EngineOptions& opts, bool collect_cores) {
  std::vector<Literal> assumptions;
  for (ElementId id : impl_->universe) {
    assumptions.push_back({activation_var_name(id), active.count(id) > 0});
    assumptions.push_back({cut_var_name(id), false});
  }
  return impl_->run(prop_index, std::move(assumptions), opts, collect_cores, {});
}

VerifyOutcome DualEngine::verify_cut(size_t prop_index, const ElementIdSet& cuttable,
                                     std::optional<int> at_most, const EngineOptions& opts) {
  std::vector<Literal> assumptions;
  std::vector<std::string> extras;
  for (ElementId id : impl_->universe) {
    assumptions.push_back({activation_var_name(id), true});
    if (!cuttable.count(id)) assumptions.push_back({cut_var_name(id), false});
    extras.push_back(cut_var_name(id));
  }
  if (at_most) assumptions.push_back({impl_->amk_lit(*at_most), true});
  if (impl_->active_scope) assumptions.push_back({*impl_->active_scope, true});
  return impl_->run(prop_index, std::move(assumptions), opts, /*collect_cores=*/false, extras);
}

void DualEngine::begin_scope() {
  std::string name = "scope!" + std::to_string(impl_->scope_counter++);
  impl_->session.declare_const(name, "Bool");
  impl_->active_scope = name;
}

void DualEngine::end_scope() { impl_->active_scope.reset(); }

void DualEngine::block_superset(const ElementIdSet& cut) {
  if (!impl_->active_scope) begin_scope();
  std::ostringstream clause;
  clause << "(or false";
  for (ElementId id : cut) clause << " (not " << cut_var_name(id) << ")";
  clause << ")";
  impl_->session.assert_raw("(=> " + *impl_->active_scope + " " + clause.str() + ")");
}

const ElementIdSet& DualEngine::universe() const { return impl_->universe; }
Session& DualEngine::session() { return impl_->session; }

// ---------------------------------------------------------------------------

bool replay_trace(const TransitionSystem& ts, const ElementIdSet& active, const Property& prop,
                  const Trace& trace) {
  if (trace.empty()) throw EvaluationError("cannot replay an empty trace");
  auto present = [&](const Element& e) { return !e.selectable || active.count(e.id) > 0; };

  const auto& first = trace.steps.front();
  for (const auto& e : ts.elements) {
    if (!present(e)) continue;
    for (const auto& c : e.init_conjuncts) {
      Value v = eval_term(*c, nullptr, first);
      if (!std::holds_alternative<bool>(v) || !std::get<bool>(v)) return false;
    }
  }
  for (size_t t = 1; t < trace.steps.size(); ++t) {
    for (const auto& e : ts.elements) {
      if (!present(e)) continue;
      for (const auto& c : e.trans_conjuncts) {
        Value v = eval_term(*c, &trace.steps[t - 1], trace.steps[t]);
        if (!std::holds_alternative<bool>(v) || !std::get<bool>(v)) return false;
      }
    }
  }
  Value last = trace.steps.size() == 1
                   ? eval_term(*prop.init_form, nullptr, trace.steps[0])
                   : eval_term(*prop.trans_form, &trace.steps[trace.steps.size() - 2],
                               trace.steps.back());
  if (!std::holds_alternative<bool>(last))
    throw EvaluationError("property does not evaluate to a Boolean");
  return !std::get<bool>(last);
}

}  // namespace mivc
