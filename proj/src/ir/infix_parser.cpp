#include "texcas/ir/emit.hpp"
#include "texcas/ir/functions.hpp"

#include <cctype>

namespace texcas::ir {

InfixParseError::InfixParseError(std::size_t offset, const std::string& what)
    : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

namespace {

struct Tok {
  enum Kind { Int, Decimal, Ident, Const, Sym, End } kind;
  std::string text;
  std::size_t offset;
};

std::vector<Tok> lex(std::string_view s) {
  std::vector<Tok> out;
  std::size_t i = 0;
  auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i + 1 < s.size() && s[i] == '.' && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        out.push_back({Tok::Decimal, std::string(s.substr(start, i - start)), start});
      } else {
        out.push_back({Tok::Int, std::string(s.substr(start, i - start)), start});
      }
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && ident_char(s[i])) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (c == '%') {
      ++i;
      while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::Const, std::string(s.substr(start, i - start)), start});
      continue;
    }
    static const char* two[] = {"<>", "<=", ">=", "->", "=="};
    bool matched = false;
    for (const char* t : two) {
      if (s.substr(i, 2) == t) {
        out.push_back({Tok::Sym, t, start});
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("+-*/^()[],=<>").find(c) == std::string_view::npos)
      throw InfixParseError(i, std::string("unexpected character '") + c + "'");
    out.push_back({Tok::Sym, std::string(1, c), start});
    ++i;
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

Rational decimal_value(const std::string& text) {
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(BigInt(text));
  const auto frac = text.substr(dot + 1);
  BigInt scale = 1;
  for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
  return Rational(BigInt(text.substr(0, dot) + frac), scale);
}

class InfixParser {
public:
  explicit InfixParser(std::string_view s) : toks_(lex(s)) {}

  Expr parse_expression_only() {
    auto e = expr();
    expect_end();
    return e;
  }

  Relation parse_relation() {
    Relation r;
    r.lhs = expr();
    const auto& t = peek();
    if (t.kind != Tok::Sym) fail("expected relation");
    if (t.text == "=") r.kind = RelationKind::Eq;
    else if (t.text == "<") r.kind = RelationKind::Lt;
    else if (t.text == ">") r.kind = RelationKind::Gt;
    else if (t.text == "<>") r.kind = RelationKind::Ne;
    else if (t.text == "<=") r.kind = RelationKind::Le;
    else if (t.text == ">=") r.kind = RelationKind::Ge;
    else if (t.text == "->") r.kind = RelationKind::To;
    else if (t.text == "==") r.kind = RelationKind::Equiv;
    else fail("expected relation");
    ++pos_;
    r.rhs = expr();
    expect_end();
    return r;
  }

private:
  std::vector<Tok> toks_;
  std::size_t pos_ = 0;

  const Tok& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool sym(std::string_view s, std::size_t k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
  [[noreturn]] void fail(const std::string& what) const { throw InfixParseError(peek().offset, what); }
  void expect(std::string_view s) {
    if (!sym(s)) fail("expected '" + std::string(s) + "'");
    ++pos_;
  }
  void expect_end() const {
    if (peek().kind != Tok::End) fail("unexpected trailing input '" + peek().text + "'");
  }

  Expr expr() {
    std::vector<Expr> terms{signed_term()};
    while (sym("+") || sym("-")) {
      const bool minus = sym("-");
      ++pos_;
      auto t = signed_term();
      terms.push_back(minus ? neg(t) : t);
    }
    return add(std::move(terms));
  }

  Expr signed_term() {
    if (sym("-")) {
      ++pos_;
      return neg(signed_term());
    }
    return term();
  }

  Expr term() {
    std::vector<Expr> factors{factor()};
    while (sym("*") || sym("/")) {
      const bool divide = sym("/");
      ++pos_;
      auto f = factor();
      factors.push_back(divide ? pow(f, num(-1)) : f);
    }
    return mul(std::move(factors));
  }

  Expr factor() {
    auto base = atom();
    if (sym("^")) {
      ++pos_;
      auto e = atom();
      if (sym("^")) fail("chained '^' needs parentheses");
      return pow(base, e);
    }
    return base;
  }

  // (-3), (1/2), (-1/2): parenthesized literals are numbers
  std::optional<Expr> paren_literal() {
    std::size_t k = 1;
    bool negative = false;
    if (sym("-", k)) {
      negative = true;
      ++k;
    }
    if (peek(k).kind != Tok::Int && peek(k).kind != Tok::Decimal) return std::nullopt;
    Rational v = decimal_value(peek(k).text);
    ++k;
    if (sym("/", k) && peek(k + 1).kind == Tok::Int && sym(")", k + 2)) {
      const BigInt d(peek(k + 1).text);
      if (d == 0) fail("zero denominator");
      v /= Rational(d);
      k += 2;
    }
    if (!sym(")", k)) return std::nullopt;
    pos_ += k + 1;
    return num(negative ? Rational(-v) : v);
  }

  std::vector<Expr> list_until(std::string_view close) {
    std::vector<Expr> xs;
    if (sym(close)) {
      ++pos_;
      return xs;
    }
    while (true) {
      xs.push_back(expr());
      if (sym(",")) {
        ++pos_;
        continue;
      }
      expect(close);
      return xs;
    }
  }

  std::string ident() {
    if (peek().kind != Tok::Ident) fail("expected a variable name");
    return toks_[pos_++].text;
  }

  Expr atom() {
    const auto t = peek();
    switch (t.kind) {
      case Tok::Int:
      case Tok::Decimal: ++pos_; return num(decimal_value(t.text));
      case Tok::Const: {
        ++pos_;
        if (t.text == "%i") return constant(ConstantKind::ImaginaryUnit);
        if (t.text == "%e") return constant(ConstantKind::EulerE);
        if (t.text == "%pi") return constant(ConstantKind::Pi);
        if (t.text == "%gamma") return constant(ConstantKind::EulerGamma);
        if (t.text == "%inf") return constant(ConstantKind::Infinity);
        --pos_;
        fail("unknown constant " + t.text);
      }
      case Tok::Ident: return identifier();
      case Tok::Sym:
        if (t.text == "(") {
          if (auto lit = paren_literal()) return *lit;
          ++pos_;
          auto e = expr();
          expect(")");
          return e;
        }
        fail("unexpected '" + t.text + "'");
      case Tok::End: fail("unexpected end of input");
    }
    fail("unexpected token");
  }

  Expr identifier() {
    const auto name = toks_[pos_++].text;
    if (!sym("(") && !sym("[")) return var(name);
    if (name == "diff") {
      expect("(");
      auto body = expr();
      expect(",");
      auto v = ident();
      expect(",");
      if (peek().kind != Tok::Int) fail("derivative order must be an integer");
      const int order = std::stoi(toks_[pos_++].text);
      expect(")");
      if (order < 1) fail("derivative order must be at least 1");
      return derivative(body, v, order);
    }
    if (name == "sum" || name == "product" || name == "int") {
      expect("(");
      auto body = expr();
      expect(",");
      auto v = ident();
      expect(",");
      auto lo = expr();
      expect(",");
      auto hi = expr();
      expect(")");
      if (name == "sum") return sum(body, v, lo, hi);
      if (name == "product") return product(body, v, lo, hi);
      return integral(body, v, lo, hi);
    }
    if (name == "limit") {
      expect("(");
      auto body = expr();
      expect(",");
      auto v = ident();
      expect(",");
      auto target = expr();
      expect(")");
      return limit(body, v, target);
    }
    if (name == "antider") {
      expect("(");
      auto body = expr();
      expect(",");
      auto v = ident();
      expect(")");
      return antiderivative(body, v);
    }
    const auto* info = find_function(name);
    if (!info) fail("unknown function " + name);
    std::vector<Expr> params;
    if (sym("[")) {
      ++pos_;
      params = list_until("]");
    }
    expect("(");
    auto args = list_until(")");
    if (info->num_params >= 0 && static_cast<int>(params.size()) != info->num_params)
      fail(name + ": wrong number of parameters");
    if (info->num_args >= 0 && static_cast<int>(args.size()) != info->num_args)
      fail(name + ": wrong number of arguments");
    return fn(name, std::move(params), std::move(args));
  }
};

}  // namespace

Expr parse_infix(std::string_view text) { return InfixParser(text).parse_expression_only(); }

Relation parse_infix_relation(std::string_view text) { return InfixParser(text).parse_relation(); }

}  // namespace texcas::ir
