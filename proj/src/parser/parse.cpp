#include "texcas/parser.hpp"

#include <array>

namespace texcas::parser {

namespace {

constexpr std::array kIgnoredCommands{"\\left",  "\\right", "\\big",   "\\Big",  "\\bigl",
                                      "\\bigr",  "\\Bigl",  "\\Bigr",  "\\biggl", "\\biggr",
                                      "\\middle", "\\displaystyle", "\\textstyle"};

bool ignored(std::string_view cs) {
  for (auto c : kIgnoredCommands)
    if (cs == c) return true;
  return false;
}

class Parser {
public:
  Parser(std::vector<Token> tokens, const MacroTable& table)
      : toks_(std::move(tokens)), table_(table) {}

  ParseTree parse_all() {
    auto row = std::make_shared<ParseNode>();
    row->kind = ParseNode::Kind::Row;
    row->children = parse_items(false);
    return row;
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const MacroTable& table_;

  bool at_end() const { return pos_ >= toks_.size(); }
  const Token& peek() const { return toks_[pos_]; }
  std::size_t offset() const { return at_end() ? (toks_.empty() ? 0 : toks_.back().byte_offset) : peek().byte_offset; }

  [[noreturn]] void arity_error(const std::string& what) const {
    throw ParseError(ParseError::Kind::ArityMismatch, offset(), what);
  }

  // Splits a multi-character digit run so that a script or bare parameter
  // takes only its first character, as TeX does.
  void split_digit_run() {
    auto& t = toks_[pos_];
    if (t.category != TokenCategory::Digit || t.text.size() == 1) return;
    Token rest{t.text.substr(1), TokenCategory::Digit, t.byte_offset + 1};
    if (rest.text.front() == '.') rest.category = TokenCategory::Other;
    t.text.resize(1);
    toks_.insert(toks_.begin() + static_cast<std::ptrdiff_t>(pos_) + 1, std::move(rest));
  }

  std::vector<ParseTree> parse_items(bool inside_group) {
    std::vector<ParseTree> items;
    // an unknown macro may be followed by its own groups and `@` separators;
    // those stay opaque leaves for the translator to reject
    bool after_unresolved = false;
    while (!at_end()) {
      const auto& t = peek();
      if (t.category == TokenCategory::GroupClose) {
        if (inside_group) return items;
        throw ParseError(ParseError::Kind::UnbalancedBraces, t.byte_offset, "unexpected '}'");
      }
      if (t.category == TokenCategory::ControlSequence && ignored(t.text)) {
        ++pos_;
        continue;
      }
      if (t.category == TokenCategory::ArgSeparatorAt) {
        if (!after_unresolved)
          throw ParseError(ParseError::Kind::StrayArgSeparator, t.byte_offset,
                           "'" + t.text + "' does not follow a semantic macro");
        items.push_back(leaf(t));
        ++pos_;
        continue;
      }
      const bool group = t.category == TokenCategory::GroupOpen;
      ParseTree item;
      if (t.category == TokenCategory::Subscript || t.category == TokenCategory::Superscript)
        item = nullptr;  // script without a base
      else
        item = parse_single();
      if (item && item->kind == ParseNode::Kind::Leaf && item->unresolved)
        after_unresolved = true;
      else if (!group)
        after_unresolved = false;
      items.push_back(parse_scripts(std::move(item)));
    }
    if (inside_group)
      throw ParseError(ParseError::Kind::UnbalancedBraces, offset(), "unclosed '{'");
    return items;
  }

  ParseTree leaf(const Token& t, bool unresolved = false) {
    auto n = std::make_shared<ParseNode>();
    n->kind = ParseNode::Kind::Leaf;
    n->token = t;
    n->unresolved = unresolved;
    return n;
  }

  ParseTree parse_group() {
    ++pos_;  // '{'
    auto g = std::make_shared<ParseNode>();
    g->kind = ParseNode::Kind::Group;
    g->children = parse_items(true);
    ++pos_;  // '}'
    return g;
  }

  ParseTree parse_single() {
    const Token t = peek();
    if (t.category == TokenCategory::GroupOpen) return parse_group();
    if (t.category == TokenCategory::ControlSequence) {
      if (const auto* def = table_.find(t.text)) return parse_macro(*def);
      ++pos_;
      return leaf(t, true);
    }
    ++pos_;
    return leaf(t);
  }

  ParseTree parse_scripts(ParseTree base) {
    std::shared_ptr<ParseNode> ss;
    while (!at_end() && (peek().category == TokenCategory::Subscript ||
                         peek().category == TokenCategory::Superscript)) {
      const bool is_sub = peek().category == TokenCategory::Subscript;
      ++pos_;
      auto operand = parse_script_operand();
      if (!ss || (is_sub ? ss->sub != nullptr : ss->sup != nullptr)) {
        auto wrapped = std::make_shared<ParseNode>();
        wrapped->kind = ParseNode::Kind::SubSup;
        wrapped->base = ss ? ParseTree(ss) : base;
        ss = wrapped;
      }
      (is_sub ? ss->sub : ss->sup) = std::move(operand);
    }
    return ss ? ParseTree(ss) : base;
  }

  ParseTree parse_script_operand() {
    while (!at_end() && peek().category == TokenCategory::ControlSequence && ignored(peek().text)) ++pos_;
    if (at_end()) arity_error("missing script operand");
    const auto c = peek().category;
    if (c == TokenCategory::GroupClose || c == TokenCategory::ArgSeparatorAt ||
        c == TokenCategory::Subscript || c == TokenCategory::Superscript)
      arity_error("missing script operand");
    split_digit_run();
    return parse_single();
  }

  // A macro parameter or argument: a braced group, or a single bare token.
  ParseTree parse_operand(const std::string& macro) {
    if (at_end()) arity_error(macro + ": too few parameter groups");
    const auto c = peek().category;
    if (c == TokenCategory::GroupOpen) return parse_group();
    if (c == TokenCategory::GroupClose || c == TokenCategory::ArgSeparatorAt ||
        c == TokenCategory::Relation || c == TokenCategory::Comma ||
        c == TokenCategory::Subscript || c == TokenCategory::Superscript)
      arity_error(macro + ": too few parameter groups");
    split_digit_run();
    return parse_single();
  }

  ParseTree parse_bracket(const std::string& macro) {
    ++pos_;  // '['
    std::size_t start = pos_;
    int depth = 0;
    while (!at_end()) {
      const auto& t = peek();
      if (t.category == TokenCategory::GroupOpen) ++depth;
      if (t.category == TokenCategory::GroupClose) --depth;
      if (depth == 0 && t.is(TokenCategory::Other, "]")) break;
      ++pos_;
    }
    if (at_end()) arity_error(macro + ": unclosed optional parameter");
    std::vector<Token> inner(toks_.begin() + static_cast<std::ptrdiff_t>(start),
                             toks_.begin() + static_cast<std::ptrdiff_t>(pos_));
    ++pos_;  // ']'
    Parser sub(std::move(inner), table_);
    return sub.parse_all();
  }

  ParseTree parse_macro(const SemanticMacroDef& def) {
    auto node = std::make_shared<ParseNode>();
    node->kind = ParseNode::Kind::MacroApp;
    node->token = peek();
    node->macro = def.meaning_id;
    ++pos_;
    for (int k = 0; k < def.num_optional_params; ++k) {
      if (at_end() || !peek().is(TokenCategory::Other, "[")) break;
      node->optional_params.push_back(parse_bracket(def.name));
    }
    for (int k = 0; k < def.num_params; ++k) node->params.push_back(parse_operand(def.name));
    if (def.num_args == 0) return node;

    if (!at_end() && peek().category == TokenCategory::Superscript) {
      const auto saved = pos_;
      const auto saved_toks = toks_;
      ++pos_;
      auto power = parse_script_operand();
      if (!at_end() && peek().category == TokenCategory::ArgSeparatorAt) {
        node->sup = std::move(power);
      } else {
        pos_ = saved;
        toks_ = saved_toks;
      }
    }

    if (!at_end() && peek().category == TokenCategory::ArgSeparatorAt) {
      node->at_used = peek().text.size() == 1 ? AtArity::Single : AtArity::Double;
      ++pos_;
      for (int k = 0; k < def.num_args; ++k) node->args.push_back(parse_operand(def.name));
      return node;
    }
    if (!at_end() && peek().category == TokenCategory::GroupOpen) {
      for (int k = 0; k < def.num_args; ++k) {
        if (at_end() || peek().category != TokenCategory::GroupOpen)
          arity_error(def.name + ": too few argument groups");
        node->args.push_back(parse_group());
      }
      return node;
    }
    if (def.num_args == 1 && !node->sup) {
      node->args.push_back(parse_operand(def.name));
      return node;
    }
    arity_error(def.name + ": missing arguments");
  }
};

void flatten_into(const ParseTree& t, std::vector<Token>& out) {
  if (!t) return;
  auto sym = [&](TokenCategory c, const char* text) { out.push_back(Token{text, c, 0}); };
  switch (t->kind) {
    case ParseNode::Kind::Leaf: out.push_back(*t->token); break;
    case ParseNode::Kind::Group:
      sym(TokenCategory::GroupOpen, "{");
      for (const auto& c : t->children) flatten_into(c, out);
      sym(TokenCategory::GroupClose, "}");
      break;
    case ParseNode::Kind::Row:
      for (const auto& c : t->children) flatten_into(c, out);
      break;
    case ParseNode::Kind::MacroApp:
      out.push_back(*t->token);
      for (const auto& o : t->optional_params) {
        sym(TokenCategory::Other, "[");
        flatten_into(o, out);
        sym(TokenCategory::Other, "]");
      }
      for (const auto& p : t->params) flatten_into(p, out);
      if (t->sup) {
        sym(TokenCategory::Superscript, "^");
        flatten_into(t->sup, out);
      }
      if (t->at_used == AtArity::Single) sym(TokenCategory::ArgSeparatorAt, "@");
      if (t->at_used == AtArity::Double) sym(TokenCategory::ArgSeparatorAt, "@@");
      for (const auto& a : t->args) flatten_into(a, out);
      break;
    case ParseNode::Kind::SubSup:
      flatten_into(t->base, out);
      if (t->sub) {
        sym(TokenCategory::Subscript, "_");
        flatten_into(t->sub, out);
      }
      if (t->sup) {
        sym(TokenCategory::Superscript, "^");
        flatten_into(t->sup, out);
      }
      break;
  }
}

bool equal_lists(const std::vector<ParseTree>& a, const std::vector<ParseTree>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!structurally_equal(a[i], b[i])) return false;
  return true;
}

}  // namespace

ParseTree parse(const std::vector<Token>& tokens, const MacroTable& table) {
  Parser p(tokens, table);
  return p.parse_all();
}

ParseTree parse_latex(std::string_view latex, const MacroTable& table) {
  return parse(tokenize(latex), table);
}

std::vector<Token> flatten_tokens(const ParseTree& tree) {
  std::vector<Token> out;
  flatten_into(tree, out);
  return out;
}

std::string render_latex(const ParseTree& tree) { return render_tokens(flatten_tokens(tree)); }

bool structurally_equal(const ParseTree& a, const ParseTree& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind || a->unresolved != b->unresolved || a->macro != b->macro ||
      a->at_used != b->at_used)
    return false;
  if (a->token.has_value() != b->token.has_value()) return false;
  if (a->token && !same_token(*a->token, *b->token)) return false;
  return equal_lists(a->optional_params, b->optional_params) && equal_lists(a->params, b->params) &&
         equal_lists(a->args, b->args) && equal_lists(a->children, b->children) &&
         structurally_equal(a->base, b->base) && structurally_equal(a->sub, b->sub) &&
         structurally_equal(a->sup, b->sup);
}

}  // namespace texcas::parser
