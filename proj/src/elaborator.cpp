#include "mivc/elaborator.hpp"

#include <map>
#include <unordered_map>

namespace mivc {

using ast::Expr;
using ast::ExprKind;
using ast::ExprPtr;
using ast::NodeDecl;

namespace {

Sort sort_of(ast::Type t) {
  switch (t) {
    case ast::Type::Bool: return Sort::Bool;
    case ast::Type::Int: return Sort::Int;
    case ast::Type::Real: return Sort::Real;
    default: throw ElaborationError("expression with unresolved type reached elaboration");
  }
}

bool is_builtin(const Expr& e) {
  return e.kind == ExprKind::Call && (e.name == "abs" || e.name == "min");
}

bool contains_value_vars(const Term& t) {
  if (t.kind == TermKind::Var) return true;
  for (const auto& c : t.children)
    if (contains_value_vars(*c)) return true;
  return false;
}

class Elaborator {
 public:
  Elaborator(const TypedModel& tm, const std::string& main) : model_(tm.model), main_(main) {}

  TransitionSystem run() {
    const NodeDecl* main_node = model_.find_node(main_);
    if (!main_node) throw ElaborationError("main node '" + main_ + "' not found");
    if (main_node->imported)
      throw ElaborationError("main node '" + main_ + "' is imported and has no body");

    ts_.init_flag = "%init";
    declare_var(ts_.init_flag, Sort::Bool);
    {
      Element e = make_element("%init-flag", ElementKind::Structural, {});
      e.init_conjuncts.push_back(mk_var(ts_.init_flag, Sort::Bool, false));
      e.trans_conjuncts.push_back(mk_not(mk_var(ts_.init_flag, Sort::Bool, true)));
      commit(std::move(e));
    }

    elaborate_main(*main_node);
    check_linearity();
    return std::move(ts_);
  }

 private:
  // Scope of one node instance: AST identifier -> qualified state variable.
  struct Scope {
    std::string prefix;
    std::map<std::string, std::pair<std::string, Sort>> vars;

    const std::pair<std::string, Sort>& resolve(const std::string& name) const {
      auto it = vars.find(name);
      if (it == vars.end())
        throw ElaborationError("unresolved identifier '" + name + "' during elaboration");
      return it->second;
    }
  };

  enum class Mode { Init, TransCur };

  void declare_var(const std::string& name, Sort sort) {
    ts_.state_vars.push_back({name, sort});
  }

  // Ids are assigned when the element is committed, in commit order.
  Element make_element(const std::string& label, ElementKind kind, SourceSpan span) {
    if (!labels_.insert(label).second)
      throw ElaborationError("duplicate element label '" + label + "'");
    Element e;
    e.label = label;
    e.kind = kind;
    e.span = span;
    e.selectable = kind != ElementKind::Structural;
    return e;
  }

  void commit(Element&& e) {
    e.id = static_cast<ElementId>(ts_.elements.size());
    ts_.elements.push_back(std::move(e));
  }

  std::string declare_in_scope(Scope& scope, const std::string& ast_name, Sort sort) {
    std::string qualified = scope.prefix + "." + ast_name;
    declare_var(qualified, sort);
    scope.vars[ast_name] = {qualified, sort};
    return qualified;
  }

  // --- expression translation --------------------------------------------

  // Rewrites nested `pre` so that every remaining pre wraps a plain
  // identifier, introducing memory variables defined by extra conjuncts on
  // the owning element.
  ExprPtr normalize_pres(const ExprPtr& e, Scope& scope, Element& owner) {
    ExprPtr out = std::make_shared<Expr>(*e);
    for (auto& c : out->children) c = normalize_pres(c, scope, owner);
    if (out->kind == ExprKind::Unary && out->unary_op == ast::UnaryOp::Pre &&
        out->children[0]->kind != ExprKind::Ident) {
      Sort s = sort_of(out->children[0]->type);
      std::string mem = scope.prefix + ".mem!" + std::to_string(mem_counter_++);
      declare_var(mem, s);
      // mem tracks the operand: mem@0 = operand_init, mem' = operand_cur
      TermPtr init_v = translate(*out->children[0], scope, Mode::Init);
      TermPtr trans_v = translate(*out->children[0], scope, Mode::TransCur);
      owner.init_conjuncts.push_back(mk_eq(mk_var(mem, s, false), init_v));
      owner.trans_conjuncts.push_back(mk_eq(mk_var(mem, s, true), trans_v));
      ExprPtr ident = ast::mk_ident(mem, out->span);
      ident->type = out->children[0]->type;
      scope.vars[mem] = {mem, s};  // already qualified
      out->children[0] = ident;
    }
    return out;
  }

  TermPtr translate(const Expr& e, const Scope& scope, Mode mode) {
    switch (e.kind) {
      case ExprKind::BoolLit:
        return mk_bool(e.bool_value);
      case ExprKind::NumLit:
        return e.num_is_real ? mk_real(e.num_value)
                             : mk_int(boost::multiprecision::numerator(e.num_value));
      case ExprKind::Ident: {
        const auto& [name, sort] = scope.resolve(e.name);
        return mk_var(name, sort, mode == Mode::TransCur);
      }
      case ExprKind::Unary:
        switch (e.unary_op) {
          case ast::UnaryOp::Neg:
            return mk_neg(translate(*e.children[0], scope, mode));
          case ast::UnaryOp::Not:
            return mk_not(translate(*e.children[0], scope, mode));
          case ast::UnaryOp::Pre: {
            const Expr& v = *e.children[0];
            if (v.kind != ExprKind::Ident)
              throw ElaborationError("internal: pre over non-identifier after normalization");
            if (mode == Mode::Init) {
              // undefined at step 0: a fresh, never-constrained variable
              Sort s = sort_of(v.type);
              std::string fresh = scope.prefix + ".pre!" + std::to_string(pre_counter_++);
              declare_var(fresh, s);
              return mk_var(fresh, s, false);
            }
            const auto& [name, sort] = scope.resolve(v.name);
            return mk_var(name, sort, false);
          }
        }
        break;
      case ExprKind::Binary: {
        using ast::BinaryOp;
        if (e.binary_op == BinaryOp::Arrow)
          return translate(*e.children[mode == Mode::Init ? 0 : 1], scope, mode);
        TermPtr a = translate(*e.children[0], scope, mode);
        TermPtr b = translate(*e.children[1], scope, mode);
        switch (e.binary_op) {
          case BinaryOp::Add: return mk_add(a, b);
          case BinaryOp::Sub: return mk_sub(a, b);
          case BinaryOp::Mul: return mk_mul(a, b);
          case BinaryOp::Div: return mk_div(a, b);
          case BinaryOp::And: return mk_and({a, b});
          case BinaryOp::Or: return mk_or({a, b});
          case BinaryOp::Implies: return mk_implies(a, b);
          case BinaryOp::Eq: return mk_eq(a, b);
          case BinaryOp::Neq: return mk_not(mk_eq(a, b));
          case BinaryOp::Lt: return mk_lt(a, b);
          case BinaryOp::Le: return mk_le(a, b);
          case BinaryOp::Gt: return mk_lt(b, a);
          case BinaryOp::Ge: return mk_le(b, a);
          case BinaryOp::Arrow: break;
        }
        break;
      }
      case ExprKind::Ite:
        return mk_ite(translate(*e.children[0], scope, mode),
                      translate(*e.children[1], scope, mode),
                      translate(*e.children[2], scope, mode));
      case ExprKind::Call: {
        if (e.name == "abs") {
          TermPtr a = translate(*e.children[0], scope, mode);
          TermPtr zero = e.children[0]->type == ast::Type::Int ? mk_int(0) : mk_real(0);
          return mk_ite(mk_le(zero, a), a, mk_neg(a));
        }
        if (e.name == "min") {
          TermPtr a = translate(*e.children[0], scope, mode);
          TermPtr b = translate(*e.children[1], scope, mode);
          return mk_ite(mk_le(a, b), a, b);
        }
        throw ElaborationError("internal: node call survived call lifting");
      }
    }
    throw ElaborationError("internal: unhandled expression during translation");
  }

  // Adds both split versions of `lhs_var = rhs` to an element.
  void add_equation_conjuncts(Element& elem, const std::string& lhs, Sort sort,
                              const ExprPtr& rhs, Scope& scope) {
    ExprPtr norm = normalize_pres(rhs, scope, elem);
    elem.init_conjuncts.push_back(
        mk_eq(mk_var(lhs, sort, false), translate(*norm, scope, Mode::Init)));
    elem.trans_conjuncts.push_back(
        mk_eq(mk_var(lhs, sort, true), translate(*norm, scope, Mode::TransCur)));
  }

  // Adds both split versions of a Boolean constraint, dropping conjuncts
  // that reduce to `true`.
  void add_constraint_conjuncts(Element& elem, const ExprPtr& expr, Scope& scope) {
    ExprPtr norm = normalize_pres(expr, scope, elem);
    TermPtr init_t = translate(*norm, scope, Mode::Init);
    TermPtr trans_t = translate(*norm, scope, Mode::TransCur);
    if (!is_literal_true(init_t)) elem.init_conjuncts.push_back(init_t);
    if (!is_literal_true(trans_t)) elem.trans_conjuncts.push_back(trans_t);
  }

  // --- node instances -----------------------------------------------------

  struct LiftedCall {
    std::string result_var;  // qualified
    Sort result_sort;
    const NodeDecl* callee;
    std::vector<ExprPtr> args;
    SourceSpan span;
  };

  // Replaces every node-call subexpression by a fresh identifier and
  // records the call for later processing.
  ExprPtr lift_calls(const ExprPtr& e, Scope& scope, std::vector<LiftedCall>& out) {
    ExprPtr cur = std::make_shared<Expr>(*e);
    for (auto& c : cur->children) c = lift_calls(c, scope, out);
    if (cur->kind == ExprKind::Call && !is_builtin(*cur)) {
      const NodeDecl* callee = model_.find_node(cur->name);
      if (!callee) throw ElaborationError("unknown node '" + cur->name + "'");
      Sort s = sort_of(callee->returns[0].type);
      std::string fresh = scope.prefix + ".call!" + std::to_string(call_counter_++);
      declare_var(fresh, s);
      scope.vars[fresh] = {fresh, s};
      out.push_back({fresh, s, callee, cur->children, cur->span});
      ExprPtr ident = ast::mk_ident(fresh, cur->span);
      ident->type = callee->returns[0].type;
      return ident;
    }
    return cur;
  }

  // A call site: bind inputs and the output in a NodeCall element, then
  // inline the callee (guarantees for imported nodes, the body otherwise).
  void process_call(const LiftedCall& call, Scope& caller_scope) {
    const NodeDecl& callee = *call.callee;
    int ordinal = ++instance_counter_[callee.name];
    std::string instance = caller_scope.prefix + "." + callee.name + std::to_string(ordinal);
    std::string label_prefix =
        ordinal == 1 ? callee.name : callee.name + "@" + std::to_string(ordinal);

    if (callee.contract && !callee.contract->assumes.empty())
      throw ElaborationError(
          "called node '" + callee.name +
          "' has contract assumptions, which are not supported at call sites");
    if (!callee.imported && callee.equations.empty())
      throw ElaborationError("non-imported node '" + callee.name + "' has no body");

    Scope scope;
    scope.prefix = instance;
    for (const auto& p : callee.params) declare_in_scope(scope, p.name, sort_of(p.type));
    for (const auto& r : callee.returns) declare_in_scope(scope, r.name, sort_of(r.type));

    Element glue = make_element(instance, ElementKind::NodeCall, call.span);

    // input bindings evaluated in the caller's scope
    for (size_t i = 0; i < callee.params.size(); ++i) {
      const auto& [formal, fsort] = scope.resolve(callee.params[i].name);
      ExprPtr actual = normalize_pres(call.args[i], caller_scope, glue);
      glue.init_conjuncts.push_back(
          mk_eq(mk_var(formal, fsort, false), translate(*actual, caller_scope, Mode::Init)));
      glue.trans_conjuncts.push_back(
          mk_eq(mk_var(formal, fsort, true), translate(*actual, caller_scope, Mode::TransCur)));
    }
    // output binding
    {
      const auto& [ret, rsort] = scope.resolve(callee.returns[0].name);
      glue.init_conjuncts.push_back(
          mk_eq(mk_var(call.result_var, call.result_sort, false), mk_var(ret, rsort, false)));
      glue.trans_conjuncts.push_back(
          mk_eq(mk_var(call.result_var, call.result_sort, true), mk_var(ret, rsort, true)));
    }

    std::vector<Element> guarantee_elems;
    if (callee.contract) {
      for (const auto& c : callee.contract->consts) {
        std::string q = declare_in_scope(scope, c.name, sort_of(c.type));
        add_equation_conjuncts(glue, q, sort_of(c.type), c.value, scope);
      }
      if (callee.imported) {
        for (const auto& g : callee.contract->guarantees) {
          Element elem = make_element(label_prefix + "." + g.label, ElementKind::Guarantee, g.span);
          add_constraint_conjuncts(elem, g.expr, scope);
          guarantee_elems.push_back(std::move(elem));
        }
      }
      // Contracts of non-imported callees are not abstracted: the body
      // provides the semantics.
    }

    commit(std::move(glue));
    for (auto& e : guarantee_elems) commit(std::move(e));

    if (!callee.imported) {
      for (const auto& l : callee.locals) declare_in_scope(scope, l.name, sort_of(l.type));
      process_equations(callee, scope);
    }
  }

  void process_equations(const NodeDecl& node, Scope& scope) {
    for (const auto& eq : node.equations) {
      const auto& [lhs, sort] = scope.resolve(eq.lhs);
      // An equation whose right-hand side is exactly one call is the call
      // itself: its binding lives in the NodeCall element.
      if (eq.rhs->kind == ExprKind::Call && !is_builtin(*eq.rhs)) {
        const NodeDecl* callee = model_.find_node(eq.rhs->name);
        if (!callee) throw ElaborationError("unknown node '" + eq.rhs->name + "'");
        LiftedCall direct{lhs, sort, callee, eq.rhs->children, eq.rhs->span};
        process_call(direct, scope);
        continue;
      }
      std::vector<LiftedCall> lifted;
      ExprPtr rhs = lift_calls(eq.rhs, scope, lifted);
      Element elem = make_element(scope.prefix + "." + eq.lhs, ElementKind::Equation, eq.span);
      add_equation_conjuncts(elem, lhs, sort, rhs, scope);
      commit(std::move(elem));
      for (const auto& call : lifted) process_call(call, scope);
    }
  }

  void elaborate_main(const NodeDecl& node) {
    Scope scope;
    scope.prefix = node.name;
    for (const auto& p : node.params) {
      std::string q = declare_in_scope(scope, p.name, sort_of(p.type));
      if (p.is_const) {
        // symbolic constants stay rigid across steps
        Element rigid = make_element(q + ".rigid", ElementKind::Structural, p.span);
        rigid.trans_conjuncts.push_back(
            mk_eq(mk_var(q, sort_of(p.type), true), mk_var(q, sort_of(p.type), false)));
        commit(std::move(rigid));
      }
    }
    for (const auto& r : node.returns) declare_in_scope(scope, r.name, sort_of(r.type));

    if (node.contract) {
      for (const auto& c : node.contract->consts) {
        std::string q = declare_in_scope(scope, c.name, sort_of(c.type));
        Element def = make_element(q + ".def", ElementKind::Structural, c.span);
        add_equation_conjuncts(def, q, sort_of(c.type), c.value, scope);
        commit(std::move(def));
      }
      for (const auto& a : node.contract->assumes) {
        Element elem = make_element(node.name + "." + a.label, ElementKind::Assumption, a.span);
        add_constraint_conjuncts(elem, a.expr, scope);
        commit(std::move(elem));
      }
      for (const auto& g : node.contract->guarantees) {
        Property prop;
        prop.label = node.name + "." + g.label;
        prop.span = g.span;
        Element scratch;  // collects memory-chain conjuncts of nested pres
        scratch.label = prop.label;
        ExprPtr norm = normalize_pres(g.expr, scope, scratch);
        prop.init_form = translate(*norm, scope, Mode::Init);
        prop.trans_form = translate(*norm, scope, Mode::TransCur);
        if (!scratch.init_conjuncts.empty() || !scratch.trans_conjuncts.empty()) {
          Element mem = make_element(prop.label + ".memory", ElementKind::Structural, g.span);
          mem.init_conjuncts = scratch.init_conjuncts;
          mem.trans_conjuncts = scratch.trans_conjuncts;
          commit(std::move(mem));
        }
        ts_.properties.push_back(std::move(prop));
      }
    }

    for (const auto& l : node.locals) declare_in_scope(scope, l.name, sort_of(l.type));
    process_equations(node, scope);
  }

  // Multiplication needs a constant factor and division a constant divisor;
  // anything else leaves the solver's linear fragment.
  void check_linear_term(const Term& t, const std::string& where) {
    if (t.kind == TermKind::Mul) {
      if (contains_value_vars(*t.children[0]) && contains_value_vars(*t.children[1]))
        throw ElaborationError("nonlinear multiplication in " + where + ": " + print_plain(t));
    }
    if (t.kind == TermKind::Div) {
      if (contains_value_vars(*t.children[1]))
        throw ElaborationError("division by a non-constant in " + where + ": " + print_plain(t));
      Value v = eval_term(*t.children[1], nullptr, {});
      if (std::holds_alternative<Rational>(v) && std::get<Rational>(v) == 0)
        throw ElaborationError("division by zero in " + where);
    }
    for (const auto& c : t.children) check_linear_term(*c, where);
  }

  void check_linearity() {
    for (const auto& e : ts_.elements) {
      for (const auto& c : e.init_conjuncts) check_linear_term(*c, e.label);
      for (const auto& c : e.trans_conjuncts) check_linear_term(*c, e.label);
    }
    for (const auto& p : ts_.properties) {
      check_linear_term(*p.init_form, p.label);
      check_linear_term(*p.trans_form, p.label);
    }
  }

  const ast::SourceModel& model_;
  std::string main_;
  TransitionSystem ts_;
  std::set<std::string> labels_;
  std::map<std::string, int> instance_counter_;
  int pre_counter_ = 0;
  int mem_counter_ = 0;
  int call_counter_ = 0;
};

}  // namespace

TransitionSystem elaborate(const TypedModel& model, const std::string& main) {
  return Elaborator(model, main).run();
}

}  // namespace mivc
