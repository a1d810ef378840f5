#include "texcas/ir/functions.hpp"
#include "texcas/ir/translate.hpp"

#include <array>
#include <set>

namespace texcas::ir {

namespace {

using parser::ParseNode;
using parser::ParseTree;
using parser::TokenCategory;
using Kind = TranslationError::Kind;

const std::set<std::string, std::less<>> kGreek = {
    "alpha", "beta",  "gamma",   "delta",  "epsilon", "varepsilon", "zeta",  "eta",    "theta",
    "vartheta", "iota", "kappa", "lambda", "mu",      "nu",         "xi",    "rho",    "varrho",
    "sigma", "varsigma", "tau",  "upsilon", "phi",    "varphi",     "chi",   "psi",    "omega",
    "Gamma", "Delta", "Theta",   "Lambda", "Xi",      "Pi",         "Sigma", "Upsilon", "Phi",
    "Psi",   "Omega", "ell"};

struct RelationSpelling {
  std::string_view text;
  RelationKind kind;
};

constexpr std::array kRelations{
    RelationSpelling{"=", RelationKind::Eq},        RelationSpelling{"<", RelationKind::Lt},
    RelationSpelling{"\\lt", RelationKind::Lt},     RelationSpelling{">", RelationKind::Gt},
    RelationSpelling{"\\gt", RelationKind::Gt},     RelationSpelling{"\\ne", RelationKind::Ne},
    RelationSpelling{"\\neq", RelationKind::Ne},    RelationSpelling{"\\le", RelationKind::Le},
    RelationSpelling{"\\leq", RelationKind::Le},    RelationSpelling{"\\leqslant", RelationKind::Le},
    RelationSpelling{"\\ge", RelationKind::Ge},     RelationSpelling{"\\geq", RelationKind::Ge},
    RelationSpelling{"\\geqslant", RelationKind::Ge}, RelationSpelling{"\\to", RelationKind::To},
    RelationSpelling{"\\equiv", RelationKind::Equiv}};

[[noreturn]] void fail(Kind k, std::string detail) { throw TranslationError(k, std::move(detail)); }

bool leaf_is(const ParseTree& t, TokenCategory c, std::string_view text) {
  return t && t->kind == ParseNode::Kind::Leaf && t->token->is(c, text);
}

bool is_relation_leaf(const ParseTree& t) {
  return t && t->kind == ParseNode::Kind::Leaf &&
         (t->token->category == TokenCategory::Relation ||
          (t->token->category == TokenCategory::ControlSequence && parser::is_relation_command(t->token->text)));
}

std::optional<std::string> greek_name(const ParseTree& t) {
  if (!t || t->kind != ParseNode::Kind::Leaf || t->token->category != TokenCategory::ControlSequence)
    return std::nullopt;
  return variable_base_name(*t->token);
}

// A plain letter or Greek letter usable as a variable name.
std::optional<std::string> letter_name(const ParseTree& t) {
  if (!t || t->kind != ParseNode::Kind::Leaf) return std::nullopt;
  return variable_base_name(*t->token);
}

std::string sanitize_subscript(const ParseTree& sub) { return subscript_suffix(parser::flatten_tokens(sub)); }

Rational parse_decimal(const std::string& text) {
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(BigInt(text));
  const auto whole = text.substr(0, dot);
  const auto frac = text.substr(dot + 1);
  BigInt scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  const BigInt w = whole.empty() ? BigInt(0) : BigInt(whole);
  const BigInt f = frac.empty() ? BigInt(0) : BigInt(frac);
  return Rational(w * scale + f, scale);
}

bool closes_bracket(const ParseTree& t) {
  return leaf_is(t, TokenCategory::Other, ")") || leaf_is(t, TokenCategory::Other, "]");
}

bool opens_bracket(const ParseTree& t) {
  return leaf_is(t, TokenCategory::Other, "(") || leaf_is(t, TokenCategory::Other, "[");
}

// The closing bracket of an item, looking through a script wrapper.
bool item_closes(const ParseTree& t) {
  if (closes_bracket(t)) return true;
  return t && t->kind == ParseNode::Kind::SubSup && closes_bracket(t->base);
}

class Translator {
public:
  explicit Translator(const TranslationTable& table) : table_(table) {}

  Relation relation(const ParseTree& root) {
    const auto& items = root->children;
    std::vector<std::size_t> at;
    for (std::size_t i = 0; i < items.size(); ++i)
      if (is_relation_leaf(items[i])) at.push_back(i);
    if (at.size() != 1)
      fail(Kind::UnsupportedGrammar, at.empty() ? "no relation" : "more than one relation");
    const auto& text = items[at[0]]->token->text;
    std::optional<RelationKind> kind;
    for (const auto& r : kRelations)
      if (r.text == text) kind = r.kind;
    if (!kind) fail(Kind::UnsupportedGrammar, "relation " + text);
    Relation rel;
    rel.kind = *kind;
    rel.lhs = sequence(items, 0, at[0]);
    rel.rhs = sequence(items, at[0] + 1, items.size());
    return rel;
  }

  Expr expression(const ParseTree& root) {
    if (root->kind == ParseNode::Kind::Row || root->kind == ParseNode::Kind::Group)
      return sequence(root->children, 0, root->children.size());
    return operand(root);
  }

private:
  const TranslationTable& table_;
  int macro_depth_ = 0;

  struct Cursor {
    const std::vector<ParseTree>& items;
    std::size_t pos;
    std::size_t end;
    int abs_depth = 0;

    bool done() const { return pos >= end; }
    const ParseTree& cur() const { return items[pos]; }
  };

  struct MacroScope {
    int& depth;
    explicit MacroScope(int& d) : depth(d) { ++depth; }
    ~MacroScope() { --depth; }
  };

  Expr sequence(const std::vector<ParseTree>& items, std::size_t b, std::size_t e) {
    Cursor c{items, b, e};
    if (c.done()) fail(Kind::UnsupportedGrammar, "empty expression");
    Expr r = expr(c);
    if (!c.done()) {
      const auto& t = c.cur();
      if (t->kind == ParseNode::Kind::Leaf && t->token->category == TokenCategory::Comma)
        fail(Kind::UnsupportedGrammar, "comma-separated list");
      fail(Kind::UnsupportedGrammar, "unexpected '" + parser::render_latex(t) + "'");
    }
    return r;
  }

  // A parameter, argument or script operand.
  Expr operand(const ParseTree& t) {
    if (t->kind == ParseNode::Kind::Group || t->kind == ParseNode::Kind::Row)
      return sequence(t->children, 0, t->children.size());
    std::vector<ParseTree> one{t};
    return sequence(one, 0, 1);
  }

  static bool is_op(const Cursor& c, std::string_view text) {
    return !c.done() && leaf_is(c.cur(), TokenCategory::Operator, text);
  }

  Expr expr(Cursor& c) {
    std::vector<Expr> terms;
    terms.push_back(signed_term(c));
    while (!c.done()) {
      if (is_op(c, "+")) {
        ++c.pos;
        terms.push_back(signed_term(c));
      } else if (is_op(c, "-")) {
        ++c.pos;
        terms.push_back(neg(signed_term(c)));
      } else if (is_op(c, "\\pm") || is_op(c, "\\mp")) {
        fail(Kind::UnsupportedGrammar, "uncorrelated plus-minus");
      } else {
        break;
      }
    }
    return add(std::move(terms));
  }

  Expr signed_term(Cursor& c) {
    if (c.done()) fail(Kind::UnsupportedGrammar, "missing operand");
    if (is_op(c, "-")) {
      ++c.pos;
      return neg(signed_term(c));
    }
    if (is_op(c, "+")) {
      ++c.pos;
      return signed_term(c);
    }
    return term(c);
  }

  bool starts_factor(const Cursor& c) const {
    if (c.done()) return false;
    const auto& t = c.cur();
    if (t->kind != ParseNode::Kind::Leaf) return true;
    const auto& tok = *t->token;
    switch (tok.category) {
      case TokenCategory::Letter:
      case TokenCategory::Digit:
      case TokenCategory::ControlSequence: return !parser::is_relation_command(tok.text);
      case TokenCategory::Other:
        if (tok.text == "(" || tok.text == "[") return true;
        // an opening bar only when not closing an enclosing one
        return tok.text == "|" && c.abs_depth == 0;
      default: return false;
    }
  }

  Expr term(Cursor& c) {
    std::vector<Expr> factors;
    factors.push_back(factor(c));
    while (!c.done()) {
      if (is_op(c, "*") || is_op(c, "\\cdot") || is_op(c, "\\times")) {
        ++c.pos;
        factors.push_back(signed_factor(c));
      } else if (is_op(c, "/")) {
        ++c.pos;
        factors.push_back(pow(signed_factor(c), num(-1)));
      } else if (starts_factor(c)) {
        factors.push_back(factor(c));
      } else {
        break;
      }
    }
    return mul(std::move(factors));
  }

  Expr signed_factor(Cursor& c) {
    if (is_op(c, "-")) {
      ++c.pos;
      return neg(signed_factor(c));
    }
    return factor(c);
  }

  Expr factor(Cursor& c) {
    std::optional<std::string> name;
    Expr p = primary(c, name);
    while (!c.done()) {
      const auto& t = c.cur();
      if (leaf_is(t, TokenCategory::Operator, "!")) {
        ++c.pos;
        p = fn("factorial", {p});
        name.reset();
      } else if (leaf_is(t, TokenCategory::Other, "'")) {
        if (!name || macro_depth_ == 0) fail(Kind::InsufficientSemantics, "prime notation");
        ++c.pos;
        *name += "'";
        p = var(*name);
      } else {
        break;
      }
    }
    return p;
  }

  Expr primary(Cursor& c, std::optional<std::string>& name) {
    if (c.done()) fail(Kind::UnsupportedGrammar, "missing operand");
    const ParseTree t = c.cur();
    switch (t->kind) {
      case ParseNode::Kind::Group:
        ++c.pos;
        return sequence(t->children, 0, t->children.size());
      case ParseNode::Kind::Row:
        ++c.pos;
        return sequence(t->children, 0, t->children.size());
      case ParseNode::Kind::MacroApp:
        ++c.pos;
        return macro(t);
      case ParseNode::Kind::SubSup:
        if (closes_bracket(t->base)) fail(Kind::UnsupportedGrammar, "unbalanced bracket");
        ++c.pos;
        return scripted(t, name);
      case ParseNode::Kind::Leaf: break;
    }
    const auto& tok = *t->token;
    switch (tok.category) {
      case TokenCategory::Digit:
        ++c.pos;
        if (tok.text == ".") fail(Kind::UnsupportedGrammar, "stray '.'");
        return num(parse_decimal(tok.text));
      case TokenCategory::Letter:
        ++c.pos;
        name = tok.text;
        return var(tok.text);
      case TokenCategory::ControlSequence:
        ++c.pos;
        return control_word(t, name);
      case TokenCategory::Other:
        if (tok.text == "(" || tok.text == "[") return bracketed(c);
        if (tok.text == "|") return absolute(c);
        break;
      default: break;
    }
    fail(Kind::UnsupportedGrammar, "unexpected '" + tok.text + "'");
  }

  Expr control_word(const ParseTree& t, std::optional<std::string>& name) {
    const auto& text = t->token->text;
    if (auto g = greek_name(t)) {
      name = *g;
      return var(*g);
    }
    if (text == "\\infty") return constant(ConstantKind::Infinity);
    if (text == "\\pm" || text == "\\mp") fail(Kind::UnsupportedGrammar, "uncorrelated plus-minus");
    static const std::set<std::string, std::less<>> decorations = {
        "\\overline", "\\bar",   "\\hat",   "\\tilde", "\\widetilde", "\\widehat", "\\dot",  "\\ddot",
        "\\vec",      "\\check", "\\breve", "\\acute", "\\grave",     "\\underline", "\\prime", "\\dots",
        "\\ldots",    "\\cdots", "\\mathrm", "\\text", "\\operatorname"};
    if (decorations.contains(text)) fail(Kind::UnsupportedGrammar, text);
    fail(Kind::UnknownMacro, text);
  }

  Expr bracketed(Cursor& c) {
    const std::size_t open = c.pos;
    int depth = 0;
    std::size_t close = c.end;
    for (std::size_t i = open; i < c.end; ++i) {
      if (opens_bracket(c.items[i])) ++depth;
      if (item_closes(c.items[i]) && --depth == 0) {
        close = i;
        break;
      }
    }
    if (close == c.end) fail(Kind::UnsupportedGrammar, "unbalanced bracket");
    Expr inner = sequence(c.items, open + 1, close);
    const auto& closer = c.items[close];
    c.pos = close + 1;
    if (closer->kind == ParseNode::Kind::SubSup) {
      if (closer->sub) fail(Kind::UnsupportedGrammar, "subscript on a bracket");
      inner = pow(inner, exponent_of(closer->sup));
    }
    return inner;
  }

  Expr absolute(Cursor& c) {
    ++c.pos;
    Cursor inner{c.items, c.pos, c.end, c.abs_depth + 1};
    Expr body = expr(inner);
    if (inner.done() || !leaf_is(inner.cur(), TokenCategory::Other, "|"))
      fail(Kind::UnsupportedGrammar, "unbalanced '|'");
    c.pos = inner.pos + 1;
    return fn("abs", {body});
  }

  Expr exponent_of(const ParseTree& sup) {
    for (const auto& tok : parser::flatten_tokens(sup))
      if (tok.text == "'" || tok.text == "\\prime") fail(Kind::InsufficientSemantics, "prime notation");
    return operand(sup);
  }

  Expr scripted(const ParseTree& t, std::optional<std::string>& name) {
    if (!t->base) fail(Kind::UnsupportedGrammar, "script without a base");
    Expr b;
    if (auto n = letter_name(t->base)) {
      std::string full = *n;
      if (t->sub) {
        const auto s = sanitize_subscript(t->sub);
        if (s.empty()) fail(Kind::UnsupportedGrammar, "empty subscript");
        full += "_" + s;
      }
      b = var(full);
      if (!t->sup) name = full;
    } else {
      if (t->sub) fail(Kind::UnsupportedGrammar, "subscript on a non-variable");
      std::optional<std::string> ignored;
      std::vector<ParseTree> one{t->base};
      Cursor c{one, 0, 1};
      b = primary(c, ignored);
      if (!c.done()) fail(Kind::UnsupportedGrammar, "script base");
    }
    if (t->sup) b = pow(b, exponent_of(t->sup));
    return b;
  }

  std::string binder(const ParseTree& t, const char* role) {
    Expr v = operand(t);
    if (!v.is(ExprKind::Variable)) fail(Kind::UnsupportedGrammar, std::string(role) + " must be a variable");
    return v.name();
  }

  std::vector<Expr> comma_list(const ParseTree& t) {
    std::vector<Expr> out;
    const auto& items = (t->kind == ParseNode::Kind::Group) ? t->children : std::vector<ParseTree>{t};
    std::size_t start = 0;
    if (items.empty()) return out;
    for (std::size_t i = 0; i <= items.size(); ++i) {
      const bool sep = i == items.size() ||
                       (items[i]->kind == ParseNode::Kind::Leaf && items[i]->token->category == TokenCategory::Comma);
      if (!sep) continue;
      out.push_back(sequence(items, start, i));
      start = i + 1;
    }
    return out;
  }

  long small_integer(const ParseTree& t, const char* role) {
    Expr v = operand(t);
    if (!v.is_integer() || v.value() < 0 || v.value() > 64)
      fail(Kind::UnsupportedGrammar, std::string(role) + " must be a small nonnegative integer");
    return static_cast<long>(numerator(v.value()));
  }

  Expr macro(const ParseTree& t) {
    const auto* entry = table_.find(t->macro);
    if (!entry) fail(Kind::UnknownMacro, t->token->text);
    MacroScope scope(macro_depth_);
    Expr r = apply(*entry, t);
    if (t->sup) {
      Expr e = exponent_of(t->sup);
      if (r.is(ExprKind::Function) && e.is_number(-1))
        fail(Kind::UnsupportedGrammar, "inverse-function superscript");
      r = pow(r, e);
    }
    return r;
  }

  std::vector<Expr> operands(const std::vector<ParseTree>& list) {
    std::vector<Expr> out;
    for (const auto& p : list) out.push_back(operand(p));
    return out;
  }

  Expr apply(const TranslationEntry& e, const ParseTree& t) {
    const auto& rw = e.rewrite;
    const auto& ps = t->params;
    const auto& as = t->args;
    if (rw == "constant") {
      for (auto k : {ConstantKind::Pi, ConstantKind::EulerE, ConstantKind::ImaginaryUnit, ConstantKind::EulerGamma,
                     ConstantKind::Infinity})
        if (to_string(k) == e.ir_id) return constant(k);
    }
    if (rw == "set") fail(Kind::UnsupportedGrammar, "set symbol " + t->token->text);
    if (rw == "unsupported_grammar") fail(Kind::UnsupportedGrammar, t->token->text);
    if (rw == "fraction") return div(operand(ps[0]), operand(ps[1]));
    if (rw == "sqrt") {
      Expr x = operand(ps[0]);
      if (t->optional_params.empty()) return pow(x, num(1, 2));
      Expr n = operand(t->optional_params[0]);
      if (n.is_number() && n.value() != 0) return pow(x, num(Rational(1) / n.value()));
      return pow(x, pow(n, num(-1)));
    }
    if (rw == "params_as_args") return fn(e.ir_id, operands(ps));
    if (rw == "function") {
      auto params = operands(t->optional_params);
      for (auto& p : operands(ps)) params.push_back(std::move(p));
      return fn(e.ir_id, std::move(params), operands(as));
    }
    if (rw == "function_opt0") {
      std::vector<Expr> params;
      params.push_back(t->optional_params.empty() ? num(0) : operand(t->optional_params[0]));
      for (auto& p : operands(ps)) params.push_back(std::move(p));
      return fn(e.ir_id, std::move(params), operands(as));
    }
    if (rw == "power_of_e") return pow(constant(ConstantKind::EulerE), operand(as[0]));
    if (rw == "genhyper") {
      const long p = small_integer(ps[0], "numerator count");
      const long q = small_integer(ps[1], "denominator count");
      auto a = comma_list(as[0]);
      auto b = comma_list(as[1]);
      if (static_cast<long>(a.size()) != p || static_cast<long>(b.size()) != q)
        fail(Kind::UnsupportedGrammar, "parameter list length disagrees with the declared counts");
      std::vector<Expr> args = std::move(a);
      for (auto& x : b) args.push_back(std::move(x));
      for (std::size_t k = 2; k < as.size(); ++k) args.push_back(operand(as[k]));
      return fn(e.ir_id, {num(p), num(q)}, std::move(args));
    }
    if (rw == "deriv") {
      int order = 1;
      if (!t->optional_params.empty()) {
        const long n = small_integer(t->optional_params[0], "derivative order");
        if (n < 1) fail(Kind::UnsupportedGrammar, "derivative order must be positive");
        order = static_cast<int>(n);
      }
      return derivative(operand(ps[0]), binder(ps[1], "differentiation variable"), order);
    }
    if (rw == "wronskian") {
      const auto z = binder(ps[0], "Wronskian variable");
      Expr f = operand(as[0]);
      Expr g = operand(as[1]);
      return sub(mul(f, derivative(g, z, 1)), mul(derivative(f, z, 1), g));
    }
    if (rw == "sum" || rw == "prod") {
      const auto k = binder(ps[0], "index");
      Expr lo = operand(ps[1]);
      Expr hi = operand(ps[2]);
      Expr body = operand(as[0]);
      return rw == "sum" ? sum(body, k, lo, hi) : product(body, k, lo, hi);
    }
    if (rw == "int") return integral(operand(as[1]), binder(as[0], "integration variable"), operand(ps[0]), operand(ps[1]));
    if (rw == "lim") return limit(operand(as[0]), binder(ps[0], "limit variable"), operand(ps[1]));
    if (rw == "antider") return antiderivative(operand(as[1]), binder(as[0], "integration variable"));
    fail(Kind::UnsupportedGrammar, "no rewrite for " + e.meaning_id);
  }
};

}  // namespace

std::optional<std::string> variable_base_name(const parser::Token& t) {
  if (t.category == TokenCategory::Letter) return t.text;
  if (t.category == TokenCategory::ControlSequence && t.text.size() > 1) {
    auto name = t.text.substr(1);
    if (kGreek.contains(name)) return name;
  }
  return std::nullopt;
}

std::string subscript_suffix(const std::vector<parser::Token>& sub) {
  std::string out;
  for (const auto& tok : sub) {
    if (tok.category == TokenCategory::ControlSequence) {
      for (char c : tok.text.substr(1))
        if (std::isalnum(static_cast<unsigned char>(c))) out += c;
      continue;
    }
    for (char c : tok.text) {
      if (std::isalnum(static_cast<unsigned char>(c)))
        out += c;
      else if (c == '+')
        out += 'p';
      else if (c == '-')
        out += 'm';
    }
  }
  return out;
}

Relation to_relation(const parser::ParseTree& tree, const TranslationTable& table) {
  return Translator(table).relation(tree);
}

Expr to_expr(const parser::ParseTree& tree, const TranslationTable& table) {
  return Translator(table).expression(tree);
}

Relation translate_latex(std::string_view latex, const parser::MacroTable& macros, const TranslationTable& table) {
  parser::ParseTree tree;
  try {
    tree = parser::parse_latex(latex, macros);
  } catch (const parser::ParseError& e) {
    throw TranslationError(Kind::UnsupportedGrammar, e.what());
  }
  return to_relation(tree, table);
}

}  // namespace texcas::ir
