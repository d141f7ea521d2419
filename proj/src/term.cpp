#include "mivc/term.hpp"

#include <sstream>

namespace mivc {

std::string sort_name(Sort s) {
  switch (s) {
    case Sort::Bool: return "bool";
    case Sort::Int: return "int";
    case Sort::Real: return "real";
  }
  return "?";
}

std::string smt_sort(Sort s) {
  switch (s) {
    case Sort::Bool: return "Bool";
    case Sort::Int: return "Int";
    case Sort::Real: return "Real";
  }
  return "?";
}

namespace {

TermPtr make(TermKind k, std::vector<TermPtr> children = {}) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->children = std::move(children);
  return t;
}

}  // namespace

TermPtr mk_true() {
  static TermPtr t = make(TermKind::True);
  return t;
}

TermPtr mk_false() {
  static TermPtr t = make(TermKind::False);
  return t;
}

TermPtr mk_bool(bool b) { return b ? mk_true() : mk_false(); }

TermPtr mk_real(Rational r) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::RealConst;
  t->value = std::move(r);
  return t;
}

TermPtr mk_int(Integer n) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::IntConst;
  t->value = Rational(std::move(n));
  return t;
}

TermPtr mk_var(std::string name, Sort sort, bool primed) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Var;
  t->var_name = std::move(name);
  t->var_sort = sort;
  t->primed = primed;
  return t;
}

bool is_literal_true(const TermPtr& t) { return t && t->kind == TermKind::True; }
bool is_literal_false(const TermPtr& t) { return t && t->kind == TermKind::False; }

TermPtr mk_not(TermPtr a) {
  if (is_literal_true(a)) return mk_false();
  if (is_literal_false(a)) return mk_true();
  return make(TermKind::Not, {std::move(a)});
}

TermPtr mk_and(std::vector<TermPtr> args) {
  std::vector<TermPtr> kept;
  for (auto& a : args) {
    if (is_literal_false(a)) return mk_false();
    if (is_literal_true(a)) continue;
    if (a->kind == TermKind::And) {
      for (const auto& c : a->children) kept.push_back(c);
    } else {
      kept.push_back(std::move(a));
    }
  }
  if (kept.empty()) return mk_true();
  if (kept.size() == 1) return kept[0];
  return make(TermKind::And, std::move(kept));
}

TermPtr mk_or(std::vector<TermPtr> args) {
  std::vector<TermPtr> kept;
  for (auto& a : args) {
    if (is_literal_true(a)) return mk_true();
    if (is_literal_false(a)) continue;
    if (a->kind == TermKind::Or) {
      for (const auto& c : a->children) kept.push_back(c);
    } else {
      kept.push_back(std::move(a));
    }
  }
  if (kept.empty()) return mk_false();
  if (kept.size() == 1) return kept[0];
  return make(TermKind::Or, std::move(kept));
}

TermPtr mk_implies(TermPtr a, TermPtr b) {
  if (is_literal_true(a)) return b;
  if (is_literal_false(a) || is_literal_true(b)) return mk_true();
  return make(TermKind::Implies, {std::move(a), std::move(b)});
}

TermPtr mk_ite(TermPtr c, TermPtr t, TermPtr e) {
  if (is_literal_true(c)) return t;
  if (is_literal_false(c)) return e;
  return make(TermKind::Ite, {std::move(c), std::move(t), std::move(e)});
}

TermPtr mk_eq(TermPtr a, TermPtr b) { return make(TermKind::Eq, {std::move(a), std::move(b)}); }
TermPtr mk_le(TermPtr a, TermPtr b) { return make(TermKind::Le, {std::move(a), std::move(b)}); }
TermPtr mk_lt(TermPtr a, TermPtr b) { return make(TermKind::Lt, {std::move(a), std::move(b)}); }
TermPtr mk_add(TermPtr a, TermPtr b) { return make(TermKind::Add, {std::move(a), std::move(b)}); }
TermPtr mk_sub(TermPtr a, TermPtr b) { return make(TermKind::Sub, {std::move(a), std::move(b)}); }
TermPtr mk_neg(TermPtr a) { return make(TermKind::Neg, {std::move(a)}); }
TermPtr mk_mul(TermPtr a, TermPtr b) { return make(TermKind::Mul, {std::move(a), std::move(b)}); }
TermPtr mk_div(TermPtr a, TermPtr b) { return make(TermKind::Div, {std::move(a), std::move(b)}); }

bool term_equal(const Term& a, const Term& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case TermKind::RealConst:
    case TermKind::IntConst:
      if (a.value != b.value) return false;
      break;
    case TermKind::Var:
      if (a.var_name != b.var_name || a.primed != b.primed || a.var_sort != b.var_sort)
        return false;
      break;
    default:
      break;
  }
  for (size_t i = 0; i < a.children.size(); ++i)
    if (!term_equal(*a.children[i], *b.children[i])) return false;
  return true;
}

namespace {

const char* smt_op(TermKind k) {
  switch (k) {
    case TermKind::Not: return "not";
    case TermKind::And: return "and";
    case TermKind::Or: return "or";
    case TermKind::Implies: return "=>";
    case TermKind::Ite: return "ite";
    case TermKind::Eq: return "=";
    case TermKind::Le: return "<=";
    case TermKind::Lt: return "<";
    case TermKind::Add: return "+";
    case TermKind::Sub: return "-";
    case TermKind::Neg: return "-";
    case TermKind::Mul: return "*";
    case TermKind::Div: return "/";
    default: return "?";
  }
}

void print_rec(std::ostream& os, const Term& t, int base_frame, bool frames) {
  switch (t.kind) {
    case TermKind::True:
      os << "true";
      return;
    case TermKind::False:
      os << "false";
      return;
    case TermKind::RealConst:
      os << to_smt_real(t.value);
      return;
    case TermKind::IntConst:
      os << to_smt_int(boost::multiprecision::numerator(t.value));
      return;
    case TermKind::Var:
      if (frames)
        os << t.var_name << "@" << (base_frame + (t.primed ? 1 : 0));
      else
        os << t.var_name << (t.primed ? "'" : "");
      return;
    default: {
      os << "(" << smt_op(t.kind);
      for (const auto& c : t.children) {
        os << " ";
        print_rec(os, *c, base_frame, frames);
      }
      os << ")";
      return;
    }
  }
}

}  // namespace

std::string print_smt(const Term& t, int base_frame) {
  std::ostringstream os;
  print_rec(os, t, base_frame, /*frames=*/true);
  return os.str();
}

std::string print_plain(const Term& t) {
  std::ostringstream os;
  print_rec(os, t, 0, /*frames=*/false);
  return os.str();
}

std::string value_to_string(const Value& v) {
  if (std::holds_alternative<bool>(v)) return std::get<bool>(v) ? "true" : "false";
  return to_display(std::get<Rational>(v));
}

bool value_equal(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<bool>(a)) return std::get<bool>(a) == std::get<bool>(b);
  return std::get<Rational>(a) == std::get<Rational>(b);
}

}  // namespace mivc
