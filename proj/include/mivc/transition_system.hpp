#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mivc/diagnostics.hpp"
#include "mivc/term.hpp"

namespace mivc {

using ElementId = int;
using ElementIdSet = std::set<ElementId>;

// Structural elements carry glue the analyses never toggle (the init flag,
// rigid-constant chaining, parameter bindings of calls not selected as
// NodeCall elements would own them otherwise).
enum class ElementKind { Assumption, Guarantee, Equation, NodeCall, Structural };

std::string element_kind_name(ElementKind k);

// A named, source-traceable top-level conjunct group: the unit over which
// validity cores and cut sets are computed. Deactivating an element removes
// exactly its init_conjuncts and trans_conjuncts.
struct Element {
  ElementId id = 0;
  std::string label;
  ElementKind kind = ElementKind::Structural;
  std::vector<TermPtr> init_conjuncts;   // over step-0 variables
  std::vector<TermPtr> trans_conjuncts;  // over (previous, current) pairs
  SourceSpan span;
  bool selectable = false;
};

// The guarantee under proof, split on the initialization operator:
// init_form is checked at step 0, trans_form at steps >= 1.
struct Property {
  std::string label;
  TermPtr init_form;
  TermPtr trans_form;
  SourceSpan span;
};

struct StateVar {
  std::string name;
  Sort sort = Sort::Bool;
};

struct TransitionSystem {
  std::vector<StateVar> state_vars;
  std::vector<Element> elements;
  std::vector<Property> properties;
  std::string init_flag;  // name of the Boolean init-flag state variable

  const Element& element(ElementId id) const { return elements.at(static_cast<size_t>(id)); }
  const StateVar* find_var(const std::string& name) const;
  std::optional<ElementId> find_element(const std::string& label) const;
  const Property* find_property(const std::string& label) const;
};

// Ids of selectable elements whose kind is in `categories`. Elements outside
// the returned set are treated as always present by the analyses.
ElementIdSet select_elements(const TransitionSystem& ts, const std::set<ElementKind>& categories);

// Human-readable dump: variable list, per-element conjuncts, properties.
std::string dump_transition_system(const TransitionSystem& ts);

// A finite sequence of full state assignments; step 0 is the initial step.
struct Trace {
  std::vector<std::map<std::string, Value>> steps;

  bool empty() const { return steps.empty(); }
  size_t length() const { return steps.size(); }
  const Value& at(size_t step, const std::string& var) const;
};

// Exact, solver-free evaluation of a term. In a transition context `prev`
// holds the previous step and `cur` the current one; in an initial context
// pass the step-0 assignment as `cur` with `prev` null.
Value eval_term(const Term& t, const std::map<std::string, Value>* prev,
                const std::map<std::string, Value>& cur);

}  // namespace mivc
