#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mivc/diagnostics.hpp"
#include "mivc/rational.hpp"

namespace mivc::ast {

enum class Type { Unknown, Bool, Int, Real };

std::string type_name(Type t);

enum class UnaryOp { Neg, Not, Pre };
enum class BinaryOp {
  Add, Sub, Mul, Div,
  And, Or, Implies, Arrow,
  Eq, Neq, Lt, Le, Gt, Ge,
};

std::string unary_op_name(UnaryOp op);
std::string binary_op_name(BinaryOp op);

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

enum class ExprKind { BoolLit, NumLit, Ident, Unary, Binary, Ite, Call };

struct Expr {
  ExprKind kind;
  SourceSpan span;
  Type type = Type::Unknown;  // filled in by the type checker

  bool bool_value = false;              // BoolLit
  Rational num_value;                   // NumLit
  bool num_is_real = false;             // NumLit: written with a decimal point
  std::string name;                     // Ident, Call (callee)
  UnaryOp unary_op = UnaryOp::Neg;      // Unary
  BinaryOp binary_op = BinaryOp::Add;   // Binary
  std::vector<ExprPtr> children;        // operands / ite parts / call args
};

ExprPtr mk_bool(bool v, SourceSpan s);
ExprPtr mk_num(Rational v, bool is_real, SourceSpan s);
ExprPtr mk_ident(std::string name, SourceSpan s);
ExprPtr mk_unary(UnaryOp op, ExprPtr e, SourceSpan s);
ExprPtr mk_binary(BinaryOp op, ExprPtr a, ExprPtr b, SourceSpan s);
ExprPtr mk_ite(ExprPtr c, ExprPtr t, ExprPtr e, SourceSpan s);
ExprPtr mk_call(std::string callee, std::vector<ExprPtr> args, SourceSpan s);

struct VarDecl {
  std::string name;
  Type type = Type::Unknown;
  bool is_const = false;
  SourceSpan span;
};

struct ContractConst {
  std::string name;
  Type type = Type::Unknown;
  ExprPtr value;
  SourceSpan span;
};

// One assume or guarantee. `label` is the short name before the first colon
// of the annotation string ("C1"); `description` is the rest.
struct ContractClause {
  std::string label;
  std::string description;
  ExprPtr expr;
  SourceSpan span;
};

struct Contract {
  std::vector<ContractConst> consts;
  std::vector<ContractClause> assumes;
  std::vector<ContractClause> guarantees;
  SourceSpan span;
};

struct Equation {
  std::string lhs;
  ExprPtr rhs;
  SourceSpan span;
};

struct NodeDecl {
  std::string name;
  bool imported = false;
  std::vector<VarDecl> params;
  std::vector<VarDecl> returns;
  std::optional<Contract> contract;
  std::vector<VarDecl> locals;
  std::vector<Equation> equations;
  SourceSpan span;
};

struct SourceModel {
  std::vector<NodeDecl> nodes;

  const NodeDecl* find_node(const std::string& name) const;
};

// Structural equality ignoring spans and inferred types; used by the
// print/re-parse round-trip tests.
bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const SourceModel& a, const SourceModel& b);

// Renders a model back to concrete syntax that re-parses to an equal AST.
std::string pretty_print(const SourceModel& model);
std::string pretty_print(const Expr& expr);

}  // namespace mivc::ast
