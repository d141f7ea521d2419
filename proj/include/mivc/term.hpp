#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mivc/rational.hpp"

namespace mivc {

enum class Sort { Bool, Int, Real };

std::string sort_name(Sort s);
std::string smt_sort(Sort s);

// Solver-level term over state variables. A variable is either unprimed
// (previous step in a transition formula, step 0 in an initial formula) or
// primed (current step in a transition formula).
enum class TermKind {
  True, False, RealConst, IntConst, Var,
  Not, And, Or, Implies, Ite,
  Eq, Le, Lt,
  Add, Sub, Neg, Mul, Div,
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind;
  Rational value;          // RealConst / IntConst
  std::string var_name;    // Var
  Sort var_sort = Sort::Bool;
  bool primed = false;
  std::vector<TermPtr> children;
};

TermPtr mk_true();
TermPtr mk_false();
TermPtr mk_bool(bool b);
TermPtr mk_real(Rational r);
TermPtr mk_int(Integer n);
TermPtr mk_var(std::string name, Sort sort, bool primed);
TermPtr mk_not(TermPtr a);
TermPtr mk_and(std::vector<TermPtr> args);
TermPtr mk_or(std::vector<TermPtr> args);
TermPtr mk_implies(TermPtr a, TermPtr b);
TermPtr mk_ite(TermPtr c, TermPtr t, TermPtr e);
TermPtr mk_eq(TermPtr a, TermPtr b);
TermPtr mk_le(TermPtr a, TermPtr b);
TermPtr mk_lt(TermPtr a, TermPtr b);
TermPtr mk_add(TermPtr a, TermPtr b);
TermPtr mk_sub(TermPtr a, TermPtr b);
TermPtr mk_neg(TermPtr a);
TermPtr mk_mul(TermPtr a, TermPtr b);
TermPtr mk_div(TermPtr a, TermPtr b);

bool is_literal_true(const TermPtr& t);
bool is_literal_false(const TermPtr& t);

// Structural identity; used by determinism tests.
bool term_equal(const Term& a, const Term& b);

// Prints as SMT-LIB with frame-indexed variable names: an unprimed variable
// prints as name@base, a primed one as name@(base+1).
std::string print_smt(const Term& t, int base_frame);

// Prints with bare variable names (primed as name'); used by --dump-ts.
std::string print_plain(const Term& t);

// A concrete value: Booleans or exact rationals (Int values are rationals
// with denominator one).
using Value = std::variant<bool, Rational>;

std::string value_to_string(const Value& v);
bool value_equal(const Value& a, const Value& b);

}  // namespace mivc
