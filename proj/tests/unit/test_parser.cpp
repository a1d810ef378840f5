#include "doctest.h"

#include "texcas/parser.hpp"

#include <functional>
#include <random>

using namespace texcas::parser;

namespace {

const MacroTable& table() {
  static const MacroTable t = load_macro_table_file(std::string(TEXCAS_DATA_DIR) + "/macro_table.txt");
  return t;
}

std::string strip_ws(std::string_view s) {
  std::string out;
  for (char c : s)
    if (c != ' ' && c != '\t' && c != '\n') out += c;
  return out;
}

void check_macro_arity(const ParseTree& t) {
  if (!t) return;
  if (t->kind == ParseNode::Kind::MacroApp) {
    const auto* def = table().find(t->token->text);
    REQUIRE(def != nullptr);
    CHECK(static_cast<int>(t->params.size()) == def->num_params);
    CHECK(static_cast<int>(t->args.size()) == def->num_args);
  }
  if (t->kind == ParseNode::Kind::Leaf) CHECK(t->children.empty());
  for (const auto* list : {&t->optional_params, &t->params, &t->args, &t->children})
    for (const auto& c : *list) check_macro_arity(c);
  check_macro_arity(t->base);
  check_macro_arity(t->sub);
  check_macro_arity(t->sup);
}

const std::vector<std::string> kSamples = {
    R"(\Lim{\beta}{\infty}@{\JacobiP{\alpha}{\beta}{n}@{1-(\ifrac{2x}\beta)}}=\LaguerreL[\alpha]{n}@{x})",
    R"(\CompEllIntKk@@{k}=\CompEllIntCK@@{k'})",
    R"(\sin^{2}@{x}+\cos^{2}@{x}=1)",
    R"(\expe^{\iunit x}=\cos@{x}+\iunit\sin@{x})",
    R"(\Sum{k}{0}{n}@{\binom{n}{k}}=2^{n})",
    R"(\Int{0}{x}@{t}{\cos@{t}}=\sin@{x})",
    R"(\Wron{z}@{\BesselJ{\nu}@{z}}{\BesselY{\nu}@{z}}=\frac{2}{\cpi z})",
    R"(\sqrt[3]{x^{12}}=x^4)",
    R"(a_{n+1}^{2}\le\left(b_1+c\right)^{-1})",
    R"(\hyperF@{a}{b}{c}{z}=(1-z)^{-a})",
    R"(\overline{z}\ne x_1^2)",
    R"(\genhyperF{2}{1}@{a,b}{c}{z}=0)",
};

}  // namespace

TEST_CASE("tokenize: blueprint constraint has five tokens") {
  const auto toks = tokenize("0 < x < 1");
  REQUIRE(toks.size() == 5);
  CHECK(toks[0].is(TokenCategory::Digit, "0"));
  CHECK(toks[1].is(TokenCategory::Relation, "<"));
  CHECK(toks[2].is(TokenCategory::Letter, "x"));
  CHECK(toks[3].is(TokenCategory::Relation, "<"));
  CHECK(toks[4].is(TokenCategory::Digit, "1"));
  CHECK(toks[2].byte_offset == 4);
}

TEST_CASE("tokenize: empty input and control words") {
  CHECK(tokenize("").empty());
  const auto toks = tokenize(R"(\cpi^2)");
  REQUIRE(toks.size() == 3);
  CHECK(toks[0].is(TokenCategory::ControlSequence, "\\cpi"));
  CHECK(toks[1].is(TokenCategory::Superscript, "^"));
  CHECK(toks[2].is(TokenCategory::Digit, "2"));

  const auto single = tokenize(R"(a\,b\!c)");
  REQUIRE(single.size() == 5);
  CHECK(single[1].text == "\\,");
  CHECK(single[3].text == "\\!");
}

TEST_CASE("tokenize: categories for relations, separators, decimals") {
  const auto toks = tokenize(R"(\CompEllIntKk@@{k}\le 0.5, \pm x)");
  CHECK(toks[1].is(TokenCategory::ArgSeparatorAt, "@@"));
  CHECK(toks[5].is(TokenCategory::Relation, "\\le"));
  CHECK(toks[6].is(TokenCategory::Digit, "0.5"));
  CHECK(toks[7].category == TokenCategory::Comma);
  CHECK(toks[8].is(TokenCategory::Operator, "\\pm"));
}

TEST_CASE("tokenize: errors") {
  auto kind_of = [](std::string_view s) {
    try {
      tokenize(s);
    } catch (const ParseError& e) {
      return static_cast<int>(e.kind());
    }
    return -1;
  };
  CHECK(kind_of("{x") == static_cast<int>(ParseError::Kind::UnbalancedBraces));
  CHECK(kind_of("x}") == static_cast<int>(ParseError::Kind::UnbalancedBraces));
  CHECK(kind_of("x % comment") == static_cast<int>(ParseError::Kind::IllegalCharacter));
  CHECK(kind_of("\xc3\xa9") == static_cast<int>(ParseError::Kind::IllegalCharacter));
  CHECK(kind_of("x\\") == static_cast<int>(ParseError::Kind::IllegalCharacter));
}

TEST_CASE("tokenize: concatenation reproduces the input modulo whitespace") {
  for (const auto& s : kSamples) {
    std::string joined;
    for (const auto& t : tokenize(s)) joined += t.text;
    CHECK(joined == strip_ws(s));
  }
}

TEST_CASE("macro table: accepted entries and violations") {
  const auto t = load_macro_table_text(
      "\\JacobiP 0 3 1 @ JacobiP 18.5.7\n"
      "\\Wron 0 1 2 @ Wron 1.13.4   # Wronskian with explicit variable\n");
  REQUIRE(t.size() == 2);
  const auto* j = t.find("\\JacobiP");
  REQUIRE(j);
  CHECK(j->num_params == 3);
  CHECK(j->num_args == 1);
  CHECK(j->at_arity == AtArity::Single);
  CHECK(j->dlmf_ref == std::optional<std::string>("18.5.7"));
  CHECK(t.find("\\Wron")->num_args == 2);

  auto kind_of = [](const char* text) {
    try {
      load_macro_table_text(text);
    } catch (const MacroTableError& e) {
      return static_cast<int>(e.kind());
    }
    return -1;
  };
  CHECK(kind_of("\\expe 0 0 0 - expe\n\\expe 0 0 0 - expe2\n") ==
        static_cast<int>(MacroTableError::Kind::DuplicateMacroName));
  CHECK(kind_of("\\a 0 0 0 - same\n\\b 0 0 0 - same\n") ==
        static_cast<int>(MacroTableError::Kind::DuplicateMeaningId));
  CHECK(kind_of("\\sin 0 0 1 - sin\n") == static_cast<int>(MacroTableError::Kind::MalformedEntry));
  CHECK(kind_of("\\sin 0 x 1 @ sin\n") == static_cast<int>(MacroTableError::Kind::MalformedEntry));
  CHECK(kind_of("sin 0 0 1 @ sin\n") == static_cast<int>(MacroTableError::Kind::MalformedEntry));
}

TEST_CASE("macro table: bundled table covers the named macros") {
  for (const char* name : {"\\JacobiP", "\\Wron", "\\Lim", "\\Sum", "\\Prod", "\\Int", "\\Antider",
                           "\\iunit", "\\expe", "\\cpi", "\\EulerConstant", "\\CompEllIntKk",
                           "\\CompEllIntCK", "\\LaguerreL", "\\Real", "\\BigO", "\\qHyperrphis"})
    CHECK_MESSAGE(table().find(name) != nullptr, name);
}

TEST_CASE("parse: semantic limit macro") {
  const auto tree = parse_latex(R"(\Lim{\beta}{\infty}@{f})", table());
  REQUIRE(tree->children.size() == 1);
  const auto& lim = tree->children[0];
  CHECK(lim->kind == ParseNode::Kind::MacroApp);
  CHECK(lim->macro == "Lim");
  REQUIRE(lim->params.size() == 2);
  REQUIRE(lim->args.size() == 1);
  CHECK(render_latex(lim->params[0]) == "{\\beta}");
  CHECK(render_latex(lim->params[1]) == "{\\infty}");
  CHECK(render_latex(lim->args[0]) == "{f}");
  CHECK(lim->params[0]->children[0]->unresolved);
}

TEST_CASE("parse: single letter and arity mismatch") {
  const auto x = parse_latex("x", table());
  REQUIRE(x->children.size() == 1);
  CHECK(x->children[0]->kind == ParseNode::Kind::Leaf);
  CHECK(x->children[0]->children.empty());

  try {
    parse_latex(R"(\JacobiP{\alpha}{\beta})", table());
    FAIL("expected ArityMismatch");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::ArityMismatch);
  }
  CHECK_THROWS_AS(parse_latex("x @{y}", table()), ParseError);
}

TEST_CASE("parse: @ and @@ give the same structural split") {
  const auto a = parse_latex(R"(\CompEllIntKk@{k})", table())->children[0];
  const auto b = parse_latex(R"(\CompEllIntKk@@{k})", table())->children[0];
  CHECK(a->at_used == AtArity::Single);
  CHECK(b->at_used == AtArity::Double);
  CHECK(structurally_equal(a->args[0], b->args[0]));
}

TEST_CASE("parse: bare-token parameters, optional parameters and powers") {
  const auto f = parse_latex(R"(\ifrac{2x}\beta)", table())->children[0];
  REQUIRE(f->params.size() == 2);
  CHECK(f->params[1]->kind == ParseNode::Kind::Leaf);

  const auto l = parse_latex(R"(\LaguerreL[\alpha]{n}@{x})", table())->children[0];
  CHECK(l->optional_params.size() == 1);
  CHECK(l->params.size() == 1);

  const auto s = parse_latex(R"(\sin^{2}@{x})", table())->children[0];
  REQUIRE(s->sup);
  CHECK(s->args.size() == 1);

  const auto p = parse_latex("x^12", table());
  REQUIRE(p->children.size() == 2);
  CHECK(render_latex(p->children[0]->sup) == "1");
}

TEST_CASE("parse: round trip through render is structural identity") {
  for (const auto& s : kSamples) {
    const auto tree = parse_latex(s, table());
    const auto again = parse_latex(render_latex(tree), table());
    CHECK_MESSAGE(structurally_equal(tree, again), s);
    check_macro_arity(tree);
  }
}

TEST_CASE("parse: random token soup either parses with correct arity or throws ParseError") {
  const std::vector<std::string> pieces = {"x", "2", "+", "-", "=", "{", "}", "^", "_", "\\sin",
                                           "@", "\\BesselJ", "\\cpi", "\\alpha", "(", ")", ",",
                                           "\\frac", "\\LaguerreL", "[", "]", "\\Sum", "'"};
  std::mt19937 rng(7);
  int parsed = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    std::string s;
    const int len = 1 + static_cast<int>(rng() % 12);
    for (int k = 0; k < len; ++k) s += pieces[rng() % pieces.size()] + " ";
    try {
      const auto tree = parse_latex(s, table());
      check_macro_arity(tree);
      const auto again = parse_latex(render_latex(tree), table());
      CHECK_MESSAGE(structurally_equal(tree, again), s);
      ++parsed;
    } catch (const ParseError&) {
    }
  }
  CHECK(parsed > 100);
}
