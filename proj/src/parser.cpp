#include "mivc/parser.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <unordered_set>

namespace mivc {

using namespace ast;

namespace {

enum class Tok {
  Eof, Ident, Number, String, Keyword, Symbol,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  SourceSpan span;
};

const std::unordered_set<std::string> kKeywords = {
    "node", "imported", "returns", "var", "let", "tel", "const",
    "real", "bool", "int", "true", "false", "if", "then", "else",
    "pre", "not", "and", "or", "assume", "guarantee", "contract",
};

// Multi-character symbols first so "<=" does not lex as "<" "=".
const char* kSymbols[] = {"->", "=>", "<>", "<=", ">=", "(", ")", ";", ":", ",",
                          "=", "<", ">", "+", "-", "*", "/"};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  // Produces the token stream. Contract openers "(*@contract" surface as a
  // Keyword token "(*@contract"; the matching "*)" surfaces as Symbol "*)".
  // All other comments are skipped.
  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      Token t = next_token();
      out.push_back(t);
      if (t.kind == Tok::Eof) break;
    }
    return out;
  }

 private:
  SourceSpan here(size_t begin) const {
    SourceSpan s;
    s.begin = begin;
    s.end = pos_;
    s.line = line_at(begin);
    s.column = col_at(begin);
    return s;
  }

  int line_at(size_t p) const {
    int line = 1;
    for (size_t i = 0; i < p && i < text_.size(); ++i)
      if (text_[i] == '\n') ++line;
    return line;
  }

  int col_at(size_t p) const {
    int col = 1;
    for (size_t i = 0; i < p && i < text_.size(); ++i) {
      if (text_[i] == '\n')
        col = 1;
      else
        ++col;
    }
    return col;
  }

  bool starts_with(const char* s) const {
    return text_.compare(pos_, std::string(s).size(), s) == 0;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (starts_with("--")) {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (starts_with("(*@contract")) {
        return;  // contract block, not a comment
      } else if (starts_with("(*")) {
        size_t close = text_.find("*)", pos_ + 2);
        if (close == std::string::npos)
          throw ParseError(here(pos_), "unterminated comment");
        pos_ = close + 2;
      } else {
        return;
      }
    }
  }

  Token next_token() {
    if (pos_ >= text_.size()) return {Tok::Eof, "", here(pos_)};
    size_t begin = pos_;
    char c = text_[pos_];

    if (starts_with("(*@contract")) {
      pos_ += 11;
      return {Tok::Keyword, "(*@contract", here(begin)};
    }
    if (starts_with("*)")) {
      pos_ += 2;
      return {Tok::Symbol, "*)", here(begin)};
    }
    if (c == '"') {
      ++pos_;
      std::string value;
      while (pos_ < text_.size() && text_[pos_] != '"') value += text_[pos_++];
      if (pos_ >= text_.size()) throw ParseError(here(begin), "unterminated string");
      ++pos_;
      return {Tok::String, value, here(begin)};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
        if (text_[pos_] == '.' &&
            (pos_ + 1 >= text_.size() ||
             !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))))
          break;
        ++pos_;
      }
      return {Tok::Number, text_.substr(begin, pos_ - begin), here(begin)};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string word = text_.substr(begin, pos_ - begin);
      return {kKeywords.count(word) ? Tok::Keyword : Tok::Ident, word, here(begin)};
    }
    for (const char* sym : kSymbols) {
      if (starts_with(sym)) {
        pos_ += std::string(sym).size();
        return {Tok::Symbol, sym, here(begin)};
      }
    }
    throw ParseError(here(begin), std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(Lexer(text).run()) {}

  SourceModel parse_model() {
    SourceModel m;
    while (!at_eof()) m.nodes.push_back(parse_node());
    if (m.nodes.empty()) throw ParseError(peek().span, "expected at least one node");
    return m;
  }

  ExprPtr parse_single_expr() {
    ExprPtr e = parse_expr();
    expect_eof();
    return e;
  }

 private:
  const Token& peek(size_t ahead = 0) const {
    size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  bool at_eof() const { return peek().kind == Tok::Eof; }

  Token advance() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  bool accept_symbol(const std::string& s) {
    if (peek().kind == Tok::Symbol && peek().text == s) {
      advance();
      return true;
    }
    return false;
  }

  bool accept_keyword(const std::string& s) {
    if (peek().kind == Tok::Keyword && peek().text == s) {
      advance();
      return true;
    }
    return false;
  }

  Token expect_symbol(const std::string& s) {
    if (peek().kind == Tok::Symbol && peek().text == s) return advance();
    throw ParseError(peek().span, "expected '" + s + "', found '" + describe(peek()) + "'");
  }

  Token expect_keyword(const std::string& s) {
    if (peek().kind == Tok::Keyword && peek().text == s) return advance();
    throw ParseError(peek().span, "expected '" + s + "', found '" + describe(peek()) + "'");
  }

  Token expect_ident() {
    if (peek().kind == Tok::Ident) return advance();
    throw ParseError(peek().span, "expected identifier, found '" + describe(peek()) + "'");
  }

  void expect_eof() {
    if (!at_eof())
      throw ParseError(peek().span, "expected end of input, found '" + describe(peek()) + "'");
  }

  static std::string describe(const Token& t) {
    return t.kind == Tok::Eof ? "end of input" : t.text;
  }

  Type parse_type() {
    if (accept_keyword("real")) return Type::Real;
    if (accept_keyword("bool")) return Type::Bool;
    if (accept_keyword("int")) return Type::Int;
    throw ParseError(peek().span, "expected type (real, bool, int), found '" +
                                      describe(peek()) + "'");
  }

  // Parses "a, b: real; const c: int" style groups until the closing paren.
  std::vector<VarDecl> parse_param_list() {
    std::vector<VarDecl> vars;
    if (peek().kind == Tok::Symbol && peek().text == ")") return vars;
    while (true) {
      bool is_const = accept_keyword("const");
      std::vector<Token> names;
      names.push_back(expect_ident());
      while (accept_symbol(",")) names.push_back(expect_ident());
      expect_symbol(":");
      Type t = parse_type();
      for (auto& n : names) vars.push_back({n.text, t, is_const, n.span});
      if (!accept_symbol(";")) break;
    }
    return vars;
  }

  Contract parse_contract(SourceSpan open_span) {
    Contract c;
    std::set<std::string> labels;
    while (true) {
      if (peek().kind == Tok::Symbol && peek().text == "*)") {
        SourceSpan close = advance().span;
        c.span = open_span;
        c.span.end = close.end;
        return c;
      }
      if (accept_keyword("const")) {
        Token name = expect_ident();
        expect_symbol(":");
        Type t = parse_type();
        expect_symbol("=");
        ExprPtr value = parse_expr();
        expect_symbol(";");
        SourceSpan s = name.span;
        s.end = value->span.end;
        c.consts.push_back({name.text, t, value, s});
        continue;
      }
      bool is_assume = false;
      if (accept_keyword("assume")) {
        is_assume = true;
      } else if (accept_keyword("guarantee")) {
        is_assume = false;
      } else {
        throw ParseError(peek().span,
                         "expected 'assume', 'guarantee', 'const' or '*)' in contract, found '" +
                             describe(peek()) + "'");
      }
      if (peek().kind != Tok::String)
        throw ParseError(peek().span, "expected quoted label string");
      Token str = advance();
      auto colon = str.text.find(':');
      std::string label = colon == std::string::npos ? str.text : str.text.substr(0, colon);
      std::string description = colon == std::string::npos ? "" : str.text.substr(colon + 1);
      // trim the short label
      while (!label.empty() && std::isspace(static_cast<unsigned char>(label.front())))
        label.erase(label.begin());
      while (!label.empty() && std::isspace(static_cast<unsigned char>(label.back())))
        label.pop_back();
      if (label.empty()) throw ParseError(str.span, "empty contract label");
      if (!labels.insert(label).second)
        throw ParseError(str.span, "duplicate label '" + label + "' in contract");
      ExprPtr body = parse_expr();
      expect_symbol(";");
      SourceSpan s = str.span;
      s.end = body->span.end;
      ContractClause clause{label, description, body, s};
      (is_assume ? c.assumes : c.guarantees).push_back(std::move(clause));
    }
  }

  NodeDecl parse_node() {
    Token kw = expect_keyword("node");
    NodeDecl n;
    n.span = kw.span;
    n.imported = accept_keyword("imported");
    n.name = expect_ident().text;
    expect_symbol("(");
    n.params = parse_param_list();
    expect_symbol(")");
    expect_keyword("returns");
    expect_symbol("(");
    n.returns = parse_param_list();
    expect_symbol(")");
    expect_symbol(";");
    for (const auto& r : n.returns)
      if (r.is_const)
        throw ParseError(r.span, "return values cannot be const");

    if (peek().kind == Tok::Keyword && peek().text == "(*@contract") {
      Token open = advance();
      n.contract = parse_contract(open.span);
    }

    if (n.imported) {
      if (peek().kind == Tok::Keyword && (peek().text == "var" || peek().text == "let"))
        throw ParseError(peek().span, "imported node '" + n.name + "' cannot have a body");
      n.span.end = peek().span.begin;
      return n;
    }

    if (accept_keyword("var")) {
      while (peek().kind == Tok::Ident) {
        std::vector<Token> names;
        names.push_back(expect_ident());
        while (accept_symbol(",")) names.push_back(expect_ident());
        expect_symbol(":");
        Type t = parse_type();
        expect_symbol(";");
        for (auto& nm : names) n.locals.push_back({nm.text, t, false, nm.span});
      }
    }
    expect_keyword("let");
    while (!accept_keyword("tel")) {
      Token lhs = expect_ident();
      expect_symbol("=");
      ExprPtr rhs = parse_expr();
      expect_symbol(";");
      SourceSpan s = lhs.span;
      s.end = rhs->span.end;
      n.equations.push_back({lhs.text, rhs, s});
    }
    accept_symbol(";");
    n.span.end = peek().span.begin;
    return n;
  }

  // Precedence climbing; level numbers match docs/grammar.md.
  ExprPtr parse_expr() { return parse_arrow(); }

  ExprPtr parse_arrow() {
    ExprPtr lhs = parse_implies();
    if (accept_symbol("->")) {
      ExprPtr rhs = parse_arrow();  // right associative
      SourceSpan s = lhs->span;
      s.end = rhs->span.end;
      return mk_binary(BinaryOp::Arrow, lhs, rhs, s);
    }
    return lhs;
  }

  ExprPtr parse_implies() {
    ExprPtr lhs = parse_or();
    if (accept_symbol("=>")) {
      ExprPtr rhs = parse_implies();  // right associative
      SourceSpan s = lhs->span;
      s.end = rhs->span.end;
      return mk_binary(BinaryOp::Implies, lhs, rhs, s);
    }
    return lhs;
  }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (accept_keyword("or")) {
      ExprPtr rhs = parse_and();
      SourceSpan s = lhs->span;
      s.end = rhs->span.end;
      lhs = mk_binary(BinaryOp::Or, lhs, rhs, s);
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (accept_keyword("and")) {
      ExprPtr rhs = parse_not();
      SourceSpan s = lhs->span;
      s.end = rhs->span.end;
      lhs = mk_binary(BinaryOp::And, lhs, rhs, s);
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (peek().kind == Tok::Keyword && peek().text == "not") {
      Token t = advance();
      ExprPtr e = parse_not();
      SourceSpan s = t.span;
      s.end = e->span.end;
      return mk_unary(UnaryOp::Not, e, s);
    }
    return parse_comparison();
  }

  ExprPtr parse_comparison() {
    ExprPtr lhs = parse_additive();
    static const std::pair<const char*, BinaryOp> cmps[] = {
        {"=", BinaryOp::Eq},  {"<>", BinaryOp::Neq}, {"<=", BinaryOp::Le},
        {">=", BinaryOp::Ge}, {"<", BinaryOp::Lt},   {">", BinaryOp::Gt}};
    for (auto& [sym, op] : cmps) {
      if (accept_symbol(sym)) {
        ExprPtr rhs = parse_additive();
        SourceSpan s = lhs->span;
        s.end = rhs->span.end;
        return mk_binary(op, lhs, rhs, s);  // comparisons do not chain
      }
    }
    return lhs;
  }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_multiplicative();
    while (true) {
      BinaryOp op;
      if (accept_symbol("+"))
        op = BinaryOp::Add;
      else if (accept_symbol("-"))
        op = BinaryOp::Sub;
      else
        return lhs;
      ExprPtr rhs = parse_multiplicative();
      SourceSpan s = lhs->span;
      s.end = rhs->span.end;
      lhs = mk_binary(op, lhs, rhs, s);
    }
  }

  ExprPtr parse_multiplicative() {
    ExprPtr lhs = parse_unary();
    while (true) {
      BinaryOp op;
      if (accept_symbol("*"))
        op = BinaryOp::Mul;
      else if (accept_symbol("/"))
        op = BinaryOp::Div;
      else
        return lhs;
      ExprPtr rhs = parse_unary();
      SourceSpan s = lhs->span;
      s.end = rhs->span.end;
      lhs = mk_binary(op, lhs, rhs, s);
    }
  }

  ExprPtr parse_unary() {
    if (accept_symbol("-")) {
      SourceSpan s = toks_[pos_ - 1].span;
      ExprPtr e = parse_unary();
      s.end = e->span.end;
      return mk_unary(UnaryOp::Neg, e, s);
    }
    if (peek().kind == Tok::Keyword && peek().text == "pre") {
      SourceSpan s = advance().span;
      ExprPtr e = parse_unary();
      s.end = e->span.end;
      return mk_unary(UnaryOp::Pre, e, s);
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      advance();
      auto r = parse_decimal(t.text);
      if (!r) throw ParseError(t.span, "malformed numeric literal '" + t.text + "'");
      bool is_real = t.text.find('.') != std::string::npos;
      return mk_num(*r, is_real, t.span);
    }
    if (t.kind == Tok::Keyword && (t.text == "true" || t.text == "false")) {
      advance();
      return mk_bool(t.text == "true", t.span);
    }
    if (t.kind == Tok::Keyword && t.text == "if") {
      SourceSpan s = advance().span;
      ExprPtr c = parse_expr();
      expect_keyword("then");
      ExprPtr a = parse_expr();
      expect_keyword("else");
      ExprPtr b = parse_expr();
      s.end = b->span.end;
      return mk_ite(c, a, b, s);
    }
    if (t.kind == Tok::Symbol && t.text == "(") {
      advance();
      ExprPtr e = parse_expr();
      expect_symbol(")");
      return e;
    }
    if (t.kind == Tok::Ident) {
      Token name = advance();
      if (accept_symbol("(")) {
        std::vector<ExprPtr> args;
        if (!(peek().kind == Tok::Symbol && peek().text == ")")) {
          args.push_back(parse_expr());
          while (accept_symbol(",")) args.push_back(parse_expr());
        }
        Token close = expect_symbol(")");
        SourceSpan s = name.span;
        s.end = close.span.end;
        return mk_call(name.text, std::move(args), s);
      }
      return mk_ident(name.text, name.span);
    }
    throw ParseError(t.span, "expected expression, found '" + describe(t) + "'");
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace

ast::SourceModel parse_program(const std::string& source_text) {
  return Parser(source_text).parse_model();
}

ast::ExprPtr parse_expression(const std::string& source_text) {
  return Parser(source_text).parse_single_expr();
}

}  // namespace mivc
