#include "mivc/type_checker.hpp"

#include <functional>
#include <map>
#include <set>
#include <unordered_map>

namespace mivc {

using namespace ast;

namespace {

enum class SymbolClass { Input, ConstInput, Output, Local, ContractConst };

struct Symbol {
  Type type;
  SymbolClass cls;
};

bool is_numeric(Type t) { return t == Type::Int || t == Type::Real; }

class Checker {
 public:
  explicit Checker(SourceModel& model) : model_(model) {
    for (auto& n : model_.nodes) {
      if (n.name == "abs" || n.name == "min")
        throw TypeError(n.span, "'" + n.name + "' is a builtin and cannot be declared");
      if (nodes_.count(n.name))
        throw TypeError(n.span, "duplicate node '" + n.name + "'");
      nodes_[n.name] = &n;
    }
  }

  void run() {
    for (auto& n : model_.nodes) check_node(n);
    check_call_graph();
  }

 private:
  // --- expression typing ------------------------------------------------

  Type check_expr(Expr& e, const std::map<std::string, Symbol>& scope, bool in_contract) {
    Type t = infer(e, scope, in_contract);
    e.type = t;
    return t;
  }

  Type infer(Expr& e, const std::map<std::string, Symbol>& scope, bool in_contract) {
    switch (e.kind) {
      case ExprKind::BoolLit:
        return Type::Bool;
      case ExprKind::NumLit:
        return e.num_is_real ? Type::Real : Type::Int;
      case ExprKind::Ident: {
        auto it = scope.find(e.name);
        if (it == scope.end())
          throw TypeError(e.span, "unknown identifier '" + e.name + "'");
        return it->second.type;
      }
      case ExprKind::Unary: {
        Type a = check_expr(*e.children[0], scope, in_contract);
        switch (e.unary_op) {
          case UnaryOp::Neg:
            if (!is_numeric(a))
              throw TypeError(e.span, "operator '-' expects a numeric operand, got " + type_name(a));
            return a;
          case UnaryOp::Not:
            if (a != Type::Bool)
              throw TypeError(e.span, "operator 'not' expects bool, got " + type_name(a));
            return Type::Bool;
          case UnaryOp::Pre:
            if (contains_node_call(*e.children[0]))
              throw TypeError(e.span, "'pre' cannot be applied to an expression containing a node call");
            return a;
        }
        return a;
      }
      case ExprKind::Binary: {
        Type a = check_expr(*e.children[0], scope, in_contract);
        Type b = check_expr(*e.children[1], scope, in_contract);
        switch (e.binary_op) {
          case BinaryOp::Add:
          case BinaryOp::Sub:
          case BinaryOp::Mul:
            if (!is_numeric(a) || a != b)
              throw TypeError(e.span, "operator '" + binary_op_name(e.binary_op) +
                                          "' expects matching numeric operands, got " +
                                          type_name(a) + " and " + type_name(b));
            return a;
          case BinaryOp::Div:
            if (a != Type::Real || b != Type::Real)
              throw TypeError(e.span, "operator '/' expects real operands, got " + type_name(a) +
                                          " and " + type_name(b));
            return Type::Real;
          case BinaryOp::And:
          case BinaryOp::Or:
          case BinaryOp::Implies:
            if (a != Type::Bool || b != Type::Bool)
              throw TypeError(e.span, "operator '" + binary_op_name(e.binary_op) +
                                          "' expects bool operands, got " + type_name(a) +
                                          " and " + type_name(b));
            return Type::Bool;
          case BinaryOp::Arrow:
            if (a != b)
              throw TypeError(e.span, "operator '->' expects matching operand types, got " +
                                          type_name(a) + " and " + type_name(b));
            return a;
          case BinaryOp::Eq:
          case BinaryOp::Neq:
            if (a != b)
              throw TypeError(e.span, "comparison expects matching operand types, got " +
                                          type_name(a) + " and " + type_name(b));
            return Type::Bool;
          case BinaryOp::Lt:
          case BinaryOp::Le:
          case BinaryOp::Gt:
          case BinaryOp::Ge:
            if (!is_numeric(a) || a != b)
              throw TypeError(e.span, "comparison expects matching numeric operands, got " +
                                          type_name(a) + " and " + type_name(b));
            return Type::Bool;
        }
        return a;
      }
      case ExprKind::Ite: {
        Type c = check_expr(*e.children[0], scope, in_contract);
        if (c != Type::Bool)
          throw TypeError(e.children[0]->span, "if condition must be bool, got " + type_name(c));
        Type a = check_expr(*e.children[1], scope, in_contract);
        Type b = check_expr(*e.children[2], scope, in_contract);
        if (a != b)
          throw TypeError(e.span, "if branches have different types: " + type_name(a) + " and " +
                                      type_name(b));
        return a;
      }
      case ExprKind::Call: {
        if (e.name == "abs" || e.name == "min") {
          size_t want = e.name == "abs" ? 1 : 2;
          if (e.children.size() != want)
            throw TypeError(e.span, "'" + e.name + "' expects " + std::to_string(want) +
                                        " argument(s)");
          Type a = check_expr(*e.children[0], scope, in_contract);
          if (!is_numeric(a))
            throw TypeError(e.span, "'" + e.name + "' expects numeric arguments");
          if (want == 2) {
            Type b = check_expr(*e.children[1], scope, in_contract);
            if (b != a)
              throw TypeError(e.span, "'min' expects matching argument types");
          }
          return a;
        }
        if (in_contract)
          throw TypeError(e.span, "node calls are not allowed inside contracts");
        auto it = nodes_.find(e.name);
        if (it == nodes_.end())
          throw TypeError(e.span, "unknown node '" + e.name + "'");
        const NodeDecl& callee = *it->second;
        if (callee.returns.size() != 1)
          throw TypeError(e.span, "node '" + e.name +
                                      "' used in an expression must have exactly one return value");
        if (e.children.size() != callee.params.size())
          throw TypeError(e.span, "node '" + e.name + "' expects " +
                                      std::to_string(callee.params.size()) + " argument(s), got " +
                                      std::to_string(e.children.size()));
        for (size_t i = 0; i < e.children.size(); ++i) {
          Type a = check_expr(*e.children[i], scope, in_contract);
          if (a != callee.params[i].type)
            throw TypeError(e.children[i]->span,
                            "argument " + std::to_string(i + 1) + " of '" + e.name + "' has type " +
                                type_name(a) + ", expected " + type_name(callee.params[i].type));
          if (callee.params[i].is_const && !is_const_expr(*e.children[i], scope))
            throw TypeError(e.children[i]->span,
                            "argument " + std::to_string(i + 1) + " of '" + e.name +
                                "' must be a constant expression");
        }
        return callee.returns[0].type;
      }
    }
    throw TypeError(e.span, "unreachable expression kind");
  }

  static bool contains_node_call(const Expr& e) {
    if (e.kind == ExprKind::Call && e.name != "abs" && e.name != "min") return true;
    for (const auto& c : e.children)
      if (contains_node_call(*c)) return true;
    return false;
  }

  bool is_const_expr(const Expr& e, const std::map<std::string, Symbol>& scope) const {
    switch (e.kind) {
      case ExprKind::BoolLit:
      case ExprKind::NumLit:
        return true;
      case ExprKind::Ident: {
        auto it = scope.find(e.name);
        return it != scope.end() && (it->second.cls == SymbolClass::ConstInput ||
                                     it->second.cls == SymbolClass::ContractConst);
      }
      case ExprKind::Unary:
        return e.unary_op == UnaryOp::Neg && is_const_expr(*e.children[0], scope);
      case ExprKind::Binary:
        if (e.binary_op == BinaryOp::Arrow) return false;
        return is_const_expr(*e.children[0], scope) && is_const_expr(*e.children[1], scope);
      default:
        return false;
    }
  }

  // --- contract reference discipline -------------------------------------

  // Assumptions may mention current inputs and pre'd inputs/outputs;
  // guarantees additionally current outputs and contract constants.
  void check_contract_refs(const Expr& e, const std::map<std::string, Symbol>& scope,
                           bool is_assume, int pre_depth) const {
    if (e.kind == ExprKind::Ident) {
      auto it = scope.find(e.name);
      if (it == scope.end()) return;  // already reported by typing
      const Symbol& sym = it->second;
      switch (sym.cls) {
        case SymbolClass::Input:
        case SymbolClass::ConstInput:
          return;
        case SymbolClass::Output:
          if (is_assume && pre_depth == 0)
            throw TypeError(e.span, "assumption refers to current value of output '" + e.name +
                                        "'; only previous output values are allowed");
          return;
        case SymbolClass::ContractConst:
          if (is_assume)
            throw TypeError(e.span,
                            "assumption refers to contract constant '" + e.name + "'");
          return;
        case SymbolClass::Local:
          throw TypeError(e.span, "contract refers to local variable '" + e.name + "'");
      }
      return;
    }
    int d = pre_depth + (e.kind == ExprKind::Unary && e.unary_op == UnaryOp::Pre ? 1 : 0);
    for (const auto& c : e.children) check_contract_refs(*c, scope, is_assume, d);
  }

  // --- node-level checks --------------------------------------------------

  void check_node(NodeDecl& n) {
    std::map<std::string, Symbol> body_scope;
    auto declare = [&](const VarDecl& v, SymbolClass cls, std::map<std::string, Symbol>& scope) {
      if (!scope.emplace(v.name, Symbol{v.type, cls}).second)
        throw TypeError(v.span, "duplicate declaration of '" + v.name + "' in node " + n.name);
    };
    for (const auto& p : n.params)
      declare(p, p.is_const ? SymbolClass::ConstInput : SymbolClass::Input, body_scope);
    for (const auto& r : n.returns) declare(r, SymbolClass::Output, body_scope);

    if (n.contract) {
      std::map<std::string, Symbol> contract_scope = body_scope;
      for (auto& c : n.contract->consts) {
        Type t = check_expr(*c.value, contract_scope, /*in_contract=*/true);
        if (t != c.type)
          throw TypeError(c.span, "contract constant '" + c.name + "' declared " +
                                      type_name(c.type) + " but defined as " + type_name(t));
        if (!is_const_expr(*c.value, contract_scope))
          throw TypeError(c.span, "contract constant '" + c.name +
                                      "' must be defined by a constant expression");
        if (!contract_scope.emplace(c.name, Symbol{c.type, SymbolClass::ContractConst}).second)
          throw TypeError(c.span, "duplicate declaration of '" + c.name + "'");
      }
      for (auto& a : n.contract->assumes) {
        Type t = check_expr(*a.expr, contract_scope, /*in_contract=*/true);
        if (t != Type::Bool)
          throw TypeError(a.span, "assumption '" + a.label + "' must be bool, got " + type_name(t));
        check_contract_refs(*a.expr, contract_scope, /*is_assume=*/true, 0);
      }
      for (auto& g : n.contract->guarantees) {
        Type t = check_expr(*g.expr, contract_scope, /*in_contract=*/true);
        if (t != Type::Bool)
          throw TypeError(g.span, "guarantee '" + g.label + "' must be bool, got " + type_name(t));
        check_contract_refs(*g.expr, contract_scope, /*is_assume=*/false, 0);
      }
    }

    if (n.imported) return;

    for (const auto& l : n.locals) declare(l, SymbolClass::Local, body_scope);

    std::map<std::string, int> defined;
    for (auto& eq : n.equations) {
      auto it = body_scope.find(eq.lhs);
      if (it == body_scope.end())
        throw TypeError(eq.span, "equation defines unknown variable '" + eq.lhs + "'");
      if (it->second.cls != SymbolClass::Output && it->second.cls != SymbolClass::Local)
        throw TypeError(eq.span, "equation cannot define input '" + eq.lhs + "'");
      Type t = check_expr(*eq.rhs, body_scope, /*in_contract=*/false);
      if (t != it->second.type)
        throw TypeError(eq.span, "equation for '" + eq.lhs + "' has type " + type_name(t) +
                                     ", expected " + type_name(it->second.type));
      if (++defined[eq.lhs] > 1)
        throw TypeError(eq.span, "variable '" + eq.lhs + "' is defined by more than one equation");
    }
    for (const auto& r : n.returns)
      if (!defined.count(r.name))
        throw TypeError(n.span, "output '" + r.name + "' of node " + n.name +
                                    " has no defining equation");
    for (const auto& l : n.locals)
      if (!defined.count(l.name))
        throw TypeError(l.span, "local '" + l.name + "' of node " + n.name +
                                    " has no defining equation");
  }

  void check_call_graph() {
    enum State { White, Grey, Black };
    std::map<std::string, State> state;
    std::function<void(const NodeDecl&)> visit = [&](const NodeDecl& n) {
      state[n.name] = Grey;
      std::function<void(const Expr&)> scan = [&](const Expr& e) {
        if (e.kind == ExprKind::Call && e.name != "abs" && e.name != "min") {
          auto it = nodes_.find(e.name);
          if (it != nodes_.end()) {
            State s = state.count(e.name) ? state[e.name] : White;
            if (s == Grey)
              throw TypeError(e.span, "recursive node call involving '" + e.name + "'");
            if (s == White) visit(*it->second);
          }
        }
        for (const auto& c : e.children) scan(*c);
      };
      for (const auto& eq : n.equations) scan(*eq.rhs);
      state[n.name] = Black;
    };
    for (const auto& n : model_.nodes)
      if (!state.count(n.name)) visit(n);
  }

  SourceModel& model_;
  std::unordered_map<std::string, NodeDecl*> nodes_;
};

}  // namespace

TypedModel type_check(SourceModel model) {
  TypedModel tm{std::move(model)};
  Checker(tm.model).run();
  return tm;
}

std::string resolve_main(const SourceModel& model, const std::optional<std::string>& cli_main) {
  if (cli_main) {
    const NodeDecl* n = model.find_node(*cli_main);
    if (!n) throw ElaborationError("main node '" + *cli_main + "' not found");
    if (n->imported) throw ElaborationError("main node '" + *cli_main + "' is imported");
    return *cli_main;
  }
  for (const auto& n : model.nodes)
    if (!n.imported) return n.name;
  throw ElaborationError("model has no non-imported node to analyze");
}

}  // namespace mivc
