#include "mivc/transition_system.hpp"

#include <sstream>

namespace mivc {

std::string element_kind_name(ElementKind k) {
  switch (k) {
    case ElementKind::Assumption: return "assumption";
    case ElementKind::Guarantee: return "guarantee";
    case ElementKind::Equation: return "equation";
    case ElementKind::NodeCall: return "node_call";
    case ElementKind::Structural: return "structural";
  }
  return "?";
}

const StateVar* TransitionSystem::find_var(const std::string& name) const {
  for (const auto& v : state_vars)
    if (v.name == name) return &v;
  return nullptr;
}

std::optional<ElementId> TransitionSystem::find_element(const std::string& label) const {
  for (const auto& e : elements)
    if (e.label == label) return e.id;
  return std::nullopt;
}

const Property* TransitionSystem::find_property(const std::string& label) const {
  for (const auto& p : properties)
    if (p.label == label) return &p;
  return nullptr;
}

ElementIdSet select_elements(const TransitionSystem& ts,
                             const std::set<ElementKind>& categories) {
  ElementIdSet out;
  for (const auto& e : ts.elements)
    if (e.selectable && categories.count(e.kind)) out.insert(e.id);
  return out;
}

std::string dump_transition_system(const TransitionSystem& ts) {
  std::ostringstream os;
  os << "state variables:\n";
  for (const auto& v : ts.state_vars) os << "  " << v.name << " : " << sort_name(v.sort) << "\n";
  os << "elements:\n";
  for (const auto& e : ts.elements) {
    os << "  [" << e.id << "] " << e.label << " (" << element_kind_name(e.kind)
       << (e.selectable ? ", selectable" : "") << ")\n";
    for (const auto& c : e.init_conjuncts) os << "    init:  " << print_plain(*c) << "\n";
    for (const auto& c : e.trans_conjuncts) os << "    trans: " << print_plain(*c) << "\n";
  }
  os << "properties:\n";
  for (const auto& p : ts.properties) {
    os << "  " << p.label << "\n";
    os << "    init:  " << print_plain(*p.init_form) << "\n";
    os << "    trans: " << print_plain(*p.trans_form) << "\n";
  }
  return os.str();
}

const Value& Trace::at(size_t step, const std::string& var) const {
  if (step >= steps.size()) throw EvaluationError("trace step out of range");
  auto it = steps[step].find(var);
  if (it == steps[step].end())
    throw EvaluationError("trace has no value for variable '" + var + "'");
  return it->second;
}

namespace {

const Value& lookup(const std::map<std::string, Value>& frame, const std::string& name) {
  auto it = frame.find(name);
  if (it == frame.end()) throw EvaluationError("missing variable '" + name + "' in assignment");
  return it->second;
}

bool as_bool(const Value& v, const Term& t) {
  if (!std::holds_alternative<bool>(v))
    throw EvaluationError("expected Boolean value in " + print_plain(t));
  return std::get<bool>(v);
}

Rational as_num(const Value& v, const Term& t) {
  if (!std::holds_alternative<Rational>(v))
    throw EvaluationError("expected numeric value in " + print_plain(t));
  return std::get<Rational>(v);
}

}  // namespace

Value eval_term(const Term& t, const std::map<std::string, Value>* prev,
                const std::map<std::string, Value>& cur) {
  auto ev = [&](const TermPtr& c) { return eval_term(*c, prev, cur); };
  switch (t.kind) {
    case TermKind::True: return true;
    case TermKind::False: return false;
    case TermKind::RealConst:
    case TermKind::IntConst: return t.value;
    case TermKind::Var: {
      if (t.primed) return lookup(cur, t.var_name);
      if (prev) return lookup(*prev, t.var_name);
      return lookup(cur, t.var_name);
    }
    case TermKind::Not: return !as_bool(ev(t.children[0]), t);
    case TermKind::And: {
      for (const auto& c : t.children)
        if (!as_bool(ev(c), t)) return false;
      return true;
    }
    case TermKind::Or: {
      for (const auto& c : t.children)
        if (as_bool(ev(c), t)) return true;
      return false;
    }
    case TermKind::Implies:
      return !as_bool(ev(t.children[0]), t) || as_bool(ev(t.children[1]), t);
    case TermKind::Ite:
      return as_bool(ev(t.children[0]), t) ? ev(t.children[1]) : ev(t.children[2]);
    case TermKind::Eq: {
      Value a = ev(t.children[0]);
      Value b = ev(t.children[1]);
      return value_equal(a, b);
    }
    case TermKind::Le:
      return as_num(ev(t.children[0]), t) <= as_num(ev(t.children[1]), t);
    case TermKind::Lt:
      return as_num(ev(t.children[0]), t) < as_num(ev(t.children[1]), t);
    case TermKind::Add:
      return as_num(ev(t.children[0]), t) + as_num(ev(t.children[1]), t);
    case TermKind::Sub:
      return as_num(ev(t.children[0]), t) - as_num(ev(t.children[1]), t);
    case TermKind::Neg:
      return -as_num(ev(t.children[0]), t);
    case TermKind::Mul:
      return as_num(ev(t.children[0]), t) * as_num(ev(t.children[1]), t);
    case TermKind::Div: {
      Rational d = as_num(ev(t.children[1]), t);
      if (d == 0) throw EvaluationError("division by zero in " + print_plain(t));
      return as_num(ev(t.children[0]), t) / d;
    }
  }
  throw EvaluationError("unreachable term kind");
}

}  // namespace mivc
