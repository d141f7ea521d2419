#include "mivc/ast.hpp"

#include <sstream>

namespace mivc::ast {

std::string type_name(Type t) {
  switch (t) {
    case Type::Bool: return "bool";
    case Type::Int: return "int";
    case Type::Real: return "real";
    default: return "?";
  }
}

std::string unary_op_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Not: return "not";
    case UnaryOp::Pre: return "pre";
  }
  return "?";
}

std::string binary_op_name(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
    case BinaryOp::Implies: return "=>";
    case BinaryOp::Arrow: return "->";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Neq: return "<>";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
  }
  return "?";
}

ExprPtr mk_bool(bool v, SourceSpan s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::BoolLit;
  e->bool_value = v;
  e->span = s;
  return e;
}

ExprPtr mk_num(Rational v, bool is_real, SourceSpan s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::NumLit;
  e->num_value = std::move(v);
  e->num_is_real = is_real;
  e->span = s;
  return e;
}

ExprPtr mk_ident(std::string name, SourceSpan s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Ident;
  e->name = std::move(name);
  e->span = s;
  return e;
}

ExprPtr mk_unary(UnaryOp op, ExprPtr operand, SourceSpan s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Unary;
  e->unary_op = op;
  e->children = {std::move(operand)};
  e->span = s;
  return e;
}

ExprPtr mk_binary(BinaryOp op, ExprPtr a, ExprPtr b, SourceSpan s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Binary;
  e->binary_op = op;
  e->children = {std::move(a), std::move(b)};
  e->span = s;
  return e;
}

ExprPtr mk_ite(ExprPtr c, ExprPtr t, ExprPtr f, SourceSpan s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Ite;
  e->children = {std::move(c), std::move(t), std::move(f)};
  e->span = s;
  return e;
}

ExprPtr mk_call(std::string callee, std::vector<ExprPtr> args, SourceSpan s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Call;
  e->name = std::move(callee);
  e->children = std::move(args);
  e->span = s;
  return e;
}

const NodeDecl* SourceModel::find_node(const std::string& name) const {
  for (const auto& n : nodes)
    if (n.name == name) return &n;
  return nullptr;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case ExprKind::BoolLit:
      if (a.bool_value != b.bool_value) return false;
      break;
    case ExprKind::NumLit:
      if (a.num_value != b.num_value || a.num_is_real != b.num_is_real) return false;
      break;
    case ExprKind::Ident:
    case ExprKind::Call:
      if (a.name != b.name) return false;
      break;
    case ExprKind::Unary:
      if (a.unary_op != b.unary_op) return false;
      break;
    case ExprKind::Binary:
      if (a.binary_op != b.binary_op) return false;
      break;
    case ExprKind::Ite:
      break;
  }
  for (size_t i = 0; i < a.children.size(); ++i)
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  return true;
}

namespace {

bool vars_equal(const std::vector<VarDecl>& a, const std::vector<VarDecl>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name || a[i].type != b[i].type || a[i].is_const != b[i].is_const)
      return false;
  return true;
}

bool clauses_equal(const std::vector<ContractClause>& a, const std::vector<ContractClause>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].label != b[i].label || a[i].description != b[i].description) return false;
    if (!structurally_equal(*a[i].expr, *b[i].expr)) return false;
  }
  return true;
}

}  // namespace

bool structurally_equal(const SourceModel& a, const SourceModel& b) {
  if (a.nodes.size() != b.nodes.size()) return false;
  for (size_t i = 0; i < a.nodes.size(); ++i) {
    const auto& x = a.nodes[i];
    const auto& y = b.nodes[i];
    if (x.name != y.name || x.imported != y.imported) return false;
    if (!vars_equal(x.params, y.params) || !vars_equal(x.returns, y.returns) ||
        !vars_equal(x.locals, y.locals))
      return false;
    if (x.contract.has_value() != y.contract.has_value()) return false;
    if (x.contract) {
      const auto& c = *x.contract;
      const auto& d = *y.contract;
      if (c.consts.size() != d.consts.size()) return false;
      for (size_t j = 0; j < c.consts.size(); ++j) {
        if (c.consts[j].name != d.consts[j].name || c.consts[j].type != d.consts[j].type)
          return false;
        if (!structurally_equal(*c.consts[j].value, *d.consts[j].value)) return false;
      }
      if (!clauses_equal(c.assumes, d.assumes) || !clauses_equal(c.guarantees, d.guarantees))
        return false;
    }
    if (x.equations.size() != y.equations.size()) return false;
    for (size_t j = 0; j < x.equations.size(); ++j) {
      if (x.equations[j].lhs != y.equations[j].lhs) return false;
      if (!structurally_equal(*x.equations[j].rhs, *y.equations[j].rhs)) return false;
    }
  }
  return true;
}

namespace {

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Arrow: return 1;
    case BinaryOp::Implies: return 2;
    case BinaryOp::Or: return 3;
    case BinaryOp::And: return 4;
    case BinaryOp::Eq:
    case BinaryOp::Neq:
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 6;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 7;
    case BinaryOp::Mul:
    case BinaryOp::Div: return 8;
  }
  return 0;
}

void print_expr(std::ostream& os, const Expr& e, int parent_prec) {
  switch (e.kind) {
    case ExprKind::BoolLit:
      os << (e.bool_value ? "true" : "false");
      return;
    case ExprKind::NumLit: {
      Integer num = boost::multiprecision::numerator(e.num_value);
      Integer den = boost::multiprecision::denominator(e.num_value);
      if (!e.num_is_real) {
        os << num.str();
      } else if (den == 1) {
        os << num.str() << ".0";
      } else {
        // Exact decimal when the denominator is a power of ten times the
        // numerator scale; otherwise fall back to a division expression.
        Integer scaled = num;
        Integer d = den;
        int digits = 0;
        while (d % 10 == 0) {
          d /= 10;
          ++digits;
        }
        if (d == 1) {
          bool neg = scaled < 0;
          if (neg) scaled = -scaled;
          std::string s = scaled.str();
          while ((int)s.size() <= digits) s = "0" + s;
          std::string head = s.substr(0, s.size() - digits);
          std::string tail = digits == 0 ? "0" : s.substr(s.size() - digits);
          os << (neg ? "-" : "") << head << "." << (digits == 0 ? "0" : tail);
        } else {
          os << "(" << num.str() << ".0 / " << den.str() << ".0)";
        }
      }
      return;
    }
    case ExprKind::Ident:
      os << e.name;
      return;
    case ExprKind::Unary: {
      const bool need = parent_prec > 9;
      if (need) os << "(";
      os << unary_op_name(e.unary_op) << (e.unary_op == UnaryOp::Neg ? "" : " ");
      // "--" would lex as a comment, so a negated negation is parenthesized.
      print_expr(os, *e.children[0], e.unary_op == UnaryOp::Neg ? 10 : 9);
      if (need) os << ")";
      return;
    }
    case ExprKind::Binary: {
      int p = precedence(e.binary_op);
      const bool right_assoc =
          e.binary_op == BinaryOp::Arrow || e.binary_op == BinaryOp::Implies;
      const bool non_assoc = p == 6;  // comparisons do not chain
      const bool need = p < parent_prec;
      if (need) os << "(";
      print_expr(os, *e.children[0], (right_assoc || non_assoc) ? p + 1 : p);
      os << " " << binary_op_name(e.binary_op) << " ";
      print_expr(os, *e.children[1], right_assoc ? p : p + 1);
      if (need) os << ")";
      return;
    }
    case ExprKind::Ite: {
      const bool need = parent_prec > 0;
      if (need) os << "(";
      os << "if ";
      print_expr(os, *e.children[0], 0);
      os << " then ";
      print_expr(os, *e.children[1], 0);
      os << " else ";
      print_expr(os, *e.children[2], 0);
      if (need) os << ")";
      return;
    }
    case ExprKind::Call: {
      os << e.name << "(";
      for (size_t i = 0; i < e.children.size(); ++i) {
        if (i) os << ", ";
        print_expr(os, *e.children[i], 0);
      }
      os << ")";
      return;
    }
  }
}

void print_var_group(std::ostream& os, const std::vector<VarDecl>& vars) {
  for (size_t i = 0; i < vars.size(); ++i) {
    if (i) os << "; ";
    if (vars[i].is_const) os << "const ";
    os << vars[i].name << ": " << type_name(vars[i].type);
  }
}

void print_clause(std::ostream& os, const char* kw, const ContractClause& c) {
  os << "  " << kw << " \"" << c.label;
  if (!c.description.empty()) os << ":" << c.description;
  os << "\" ";
  print_expr(os, *c.expr, 0);
  os << ";\n";
}

}  // namespace

std::string pretty_print(const Expr& expr) {
  std::ostringstream os;
  print_expr(os, expr, 0);
  return os.str();
}

std::string pretty_print(const SourceModel& model) {
  std::ostringstream os;
  for (const auto& n : model.nodes) {
    os << "node " << (n.imported ? "imported " : "") << n.name << " (";
    print_var_group(os, n.params);
    os << ") returns (";
    print_var_group(os, n.returns);
    os << ");\n";
    if (n.contract) {
      os << "(*@contract\n";
      for (const auto& c : n.contract->consts) {
        os << "  const " << c.name << ": " << type_name(c.type) << " = ";
        print_expr(os, *c.value, 0);
        os << ";\n";
      }
      for (const auto& a : n.contract->assumes) print_clause(os, "assume", a);
      for (const auto& g : n.contract->guarantees) print_clause(os, "guarantee", g);
      os << "*)\n";
    }
    if (!n.imported) {
      if (!n.locals.empty()) {
        os << "  var ";
        for (size_t i = 0; i < n.locals.size(); ++i) {
          if (i) os << "; ";
          os << n.locals[i].name << ": " << type_name(n.locals[i].type);
        }
        os << ";\n";
      }
      os << "let\n";
      for (const auto& eq : n.equations) {
        os << "  " << eq.lhs << " = ";
        print_expr(os, *eq.rhs, 0);
        os << ";\n";
      }
      os << "tel\n";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace mivc::ast
