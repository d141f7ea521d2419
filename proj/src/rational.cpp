#include "mivc/rational.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace mivc {

std::optional<Rational> parse_decimal(const std::string& text) {
  if (text.empty()) return std::nullopt;
  size_t i = 0;
  bool neg = false;
  if (text[i] == '-' || text[i] == '+') {
    neg = text[i] == '-';
    ++i;
  }
  std::string int_part, frac_part;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) int_part += text[i++];
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) frac_part += text[i++];
  }
  if (i != text.size() || (int_part.empty() && frac_part.empty())) return std::nullopt;
  Integer num = int_part.empty() ? Integer(0) : Integer(int_part);
  Integer den = 1;
  for (char c : frac_part) {
    num = num * 10 + (c - '0');
    den *= 10;
  }
  Rational r(num, den);
  if (neg) r = -r;
  return r;
}

namespace {

// Minimal s-expression tokenizer for solver value terms.
std::vector<std::string> tokenize_sexpr(const std::string& text) {
  std::vector<std::string> toks;
  std::string cur;
  for (char c : text) {
    if (c == '(' || c == ')') {
      if (!cur.empty()) {
        toks.push_back(cur);
        cur.clear();
      }
      toks.push_back(std::string(1, c));
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        toks.push_back(cur);
        cur.clear();
      }
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) toks.push_back(cur);
  return toks;
}

std::optional<Rational> parse_tokens(const std::vector<std::string>& toks, size_t& pos) {
  if (pos >= toks.size()) return std::nullopt;
  if (toks[pos] == "(") {
    ++pos;
    if (pos >= toks.size()) return std::nullopt;
    std::string op = toks[pos++];
    if (op == "-") {
      auto arg = parse_tokens(toks, pos);
      if (!arg || pos >= toks.size() || toks[pos] != ")") return std::nullopt;
      ++pos;
      return -*arg;
    }
    if (op == "/") {
      auto num = parse_tokens(toks, pos);
      auto den = parse_tokens(toks, pos);
      if (!num || !den || *den == 0 || pos >= toks.size() || toks[pos] != ")") return std::nullopt;
      ++pos;
      return *num / *den;
    }
    return std::nullopt;
  }
  return parse_decimal(toks[pos++]);
}

}  // namespace

std::optional<Rational> parse_smt_numeral(const std::string& text) {
  auto toks = tokenize_sexpr(text);
  size_t pos = 0;
  auto r = parse_tokens(toks, pos);
  if (!r || pos != toks.size()) return std::nullopt;
  return r;
}

std::string to_smt_real(const Rational& r) {
  if (r < 0) return "(- " + to_smt_real(-r) + ")";
  Integer num = boost::multiprecision::numerator(r);
  Integer den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str() + ".0";
  return "(/ " + num.str() + ".0 " + den.str() + ".0)";
}

std::string to_smt_int(const Integer& n) {
  if (n < 0) return "(- " + Integer(-n).str() + ")";
  return n.str();
}

std::string to_display(const Rational& r) {
  Integer num = boost::multiprecision::numerator(r);
  Integer den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace mivc
