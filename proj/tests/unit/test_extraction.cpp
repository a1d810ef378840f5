#include "doctest.h"

#include "texcas/extraction.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

using namespace texcas::extraction;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const SubstitutionConfig& subst() {
  static const auto s = load_substitutions_file(std::string(TEXCAS_DATA_DIR) + "/substitutions.txt");
  return s;
}

FormulaRecord rec(std::string id, std::string latex) {
  FormulaRecord r;
  r.id = std::move(id);
  r.chapter_code = "EF";
  r.latex = std::move(latex);
  return r;
}

std::vector<std::string> latex_of(const std::vector<FormulaRecord>& rs) {
  std::vector<std::string> out;
  for (const auto& r : rs) out.push_back(r.latex);
  return out;
}

std::vector<FormulaRecord> synthetic_first() {
  const auto src = make_chapter_source("EF", read_file(std::string(TEXCAS_DATA_DIR) + "/corpus/synthetic_chapter.tex"));
  return scan_first(src, subst());
}

}  // namespace

TEST_CASE("chapter table has the 36 two-letter codes") {
  CHECK(chapters().size() == 36);
  std::set<std::string> codes;
  for (const auto& c : chapters()) {
    CHECK(c.code.size() == 2);
    codes.insert(c.code);
  }
  CHECK(codes.size() == 36);
  CHECK(find_chapter("EF")->number == 4);
  CHECK(find_chapter("ZZ") == nullptr);
}

TEST_CASE("scan_first: one equation with a constraint") {
  ChapterSource src{"EF", "\\begin{equation}\n\\sqrt{x^2}=x\n\\constraint{$x>0$}\n\\end{equation}\n", {}};
  const auto rs = scan_first(src, {});
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].latex == "\\sqrt{x^2}=x");
  CHECK(rs[0].constraints == std::vector<std::string>{"x>0"});
  CHECK(rs[0].source_line == 1);
  CHECK(rs[0].id == "EF.1");
}

TEST_CASE("scan_first: errors") {
  ChapterSource unclosed{"EF", "\\begin{equation}\nx=1\n", {}};
  try {
    scan_first(unclosed, {});
    FAIL("expected UnclosedEnvironment");
  } catch (const ExtractionError& e) {
    CHECK(e.kind() == ExtractionError::Kind::UnclosedEnvironment);
  }
  ChapterSource bad{"EF", "\\begin{equation}x=1\\constraint{$x>0}\\end{equation}", {}};
  try {
    scan_first(bad, {});
    FAIL("expected MalformedConstraintEnvironment");
  } catch (const ExtractionError& e) {
    CHECK(e.kind() == ExtractionError::Kind::MalformedConstraintEnvironment);
  }
  ChapterSource unknown{"XX", "", {}};
  CHECK_THROWS_AS(scan_first(unknown, {}), ExtractionError);
}

TEST_CASE("scan_first: synthetic chapter") {
  const auto rs = synthetic_first();
  REQUIRE(rs.size() == 18);
  CHECK(rs[0].latex == "a=b=c");
  CHECK(rs[0].label == std::optional<std::string>("eq:chain"));
  CHECK(rs[0].source_line == 4);
  CHECK(rs[1].latex == "\\sin@{x}^{2}+\\cos@{x}^{2}=1");
  CHECK(rs[2].latex == "x=\\pm y");
  CHECK(rs[2].constraints == std::vector<std::string>{"y>0"});
  // group label and constraint are inherited by both members
  CHECK(rs[7].latex == "\\GammaFn@{z+1}=z\\GammaFn@{z}");
  CHECK(rs[7].label == std::optional<std::string>("eq:group"));
  CHECK(rs[8].label == std::optional<std::string>("eq:group"));
  CHECK(rs[8].constraints == std::vector<std::string>{"z\\ne0,-1,-2,\\dots"});
  CHECK(rs[9].latex == "u=v");
  CHECK(rs[10].latex == "w=\\etpipm{3}");
  CHECK(rs[11].latex == "p\\le q");
  CHECK(rs[15].latex == "\\tan@{\\cpi/4}=1");
  CHECK(rs[16].latex == "0<x\\le y<1");
  for (const auto& r : rs) {
    for (const auto& cmd : stripped_commands()) {
      CHECK_MESSAGE(r.latex.find(cmd) == std::string::npos, r.latex);
      for (const auto& c : r.constraints) CHECK(c.find(cmd) == std::string::npos);
    }
    CHECK(r.latex.find('\n') == std::string::npos);
    CHECK(r.latex.find('%') == std::string::npos);
  }
}

TEST_CASE("substitutions are chapter specific and respect longer patterns") {
  CHECK(apply_substitutions("\\gamma+1", "AI", subst()) == "\\EulerConstant+1");
  CHECK(apply_substitutions("\\gamma+1", "EF", subst()) == "\\gamma+1");
  CHECK(apply_substitutions("K'+K", "EL", subst()) == "\\CompEllIntCK@@{k}+\\CompEllIntKk@@{k}");
  CHECK(apply_substitutions("\\pi x", "BS", subst()) == "\\cpi x");
  CHECK(apply_substitutions("2\\pi i", "EF", subst()) == "2\\cpi \\iunit");
  CHECK(apply_substitutions("\\text{if }i", "EF", subst()) == "\\text{if }\\iunit");
  CHECK_THROWS(load_substitutions_text("EF | x\n"));
  CHECK_THROWS(load_substitutions_text("QQ | x | y\n"));
}

TEST_CASE("split_relations: first-member pairing") {
  CHECK(latex_of(split_relations(rec("EF.1", "a=b=c"))) == std::vector<std::string>{"a=b", "a=c"});
  CHECK(latex_of(split_relations(rec("EF.1", "a=b"))) == std::vector<std::string>{"a=b"});
  CHECK(latex_of(split_relations(rec("EF.1", "a \\le b = c"))) == std::vector<std::string>{"a\\le b", "a=c"});
  const auto kids = split_relations(rec("EF.7", "a=b=c"));
  CHECK(kids[0].id == "EF.7-1");
  CHECK(kids[1].split_origin == std::optional<std::string>("EF.7"));
  // relations inside groups are not chain links
  CHECK(split_relations(rec("EF.1", "f_{n=1}=2")).size() == 1);
}

TEST_CASE("split_plus_minus: correlated signs") {
  CHECK(latex_of(split_plus_minus(rec("EF.1", "x=\\pm y"))) == std::vector<std::string>{"x=+y", "x=-y"});
  CHECK(latex_of(split_plus_minus(rec("EF.1", "\\expe^{\\pm a}=c \\mp d"))) ==
        std::vector<std::string>{"\\expe^{+a}=c-d", "\\expe^{-a}=c+d"});
  const auto same = split_plus_minus(rec("EF.1", "x=y"));
  REQUIRE(same.size() == 1);
  CHECK(same[0].id == "EF.1");
  CHECK(!same[0].split_origin);
}

TEST_CASE("scan_second: culling and relation filter") {
  CHECK(scan_second({rec("EF.1", "a+b")}).empty());
  CHECK(scan_second({rec("EF.1", "\\Sum{k}{0}{n}@{k}=\\frac{n(n+1)}{2}")}).size() == 1);
  CHECK(scan_second({rec("EF.1", "\\sum_{k=0}^n k=1")}).empty());
  CHECK(scan_second({rec("EF.1", "x=\\begin{pmatrix}1\\end{pmatrix}")}).empty());
  CHECK(scan_second({rec("EF.1", "f\\sim g")}).empty());
  for (const char* dots : {"\\dots", "\\ldots", "\\cdots", "\\vdots", "\\ddots"})
    CHECK(scan_second({rec("EF.1", std::string("x=1,2,") + dots)}).empty());
  CHECK(is_culled("\\BigO{x}=y"));
  CHECK(has_relation("x\\to 0"));
  CHECK(!has_relation("x\\in\\Real"));
}

TEST_CASE("scan_second: synthetic chapter") {
  const auto src = make_chapter_source("EF", read_file(std::string(TEXCAS_DATA_DIR) + "/corpus/synthetic_chapter.tex"));
  REQUIRE(src.preamble_macros.size() == 1);
  CHECK(src.preamble_macros[0].command == "\\etpipm");
  CHECK(src.preamble_macros[0].num_args == 1);

  const auto first = scan_first(src, subst());
  const auto second = extract_chapter(src, subst());
  CHECK(second.size() == 19);
  const auto latex = latex_of(second);
  CHECK(latex[0] == "a=b");
  CHECK(latex[1] == "a=c");
  CHECK(std::count(latex.begin(), latex.end(), "a+b") == 0);
  CHECK(std::find(latex.begin(), latex.end(), "w={\\expe^{+2\\cpi\\iunit/{3}}}") != latex.end());
  CHECK(std::find(latex.begin(), latex.end(), "w={\\expe^{-2\\cpi\\iunit/{3}}}") != latex.end());

  std::set<std::string> first_ids;
  for (const auto& r : first) first_ids.insert(r.id);
  for (const auto& r : second) {
    CHECK(has_relation(r.latex));
    if (r.split_origin) CHECK(first_ids.contains(*r.split_origin));
    CHECK(r.latex.find("\\pm") == std::string::npos);
  }
  CHECK(scan_second(second) == second);
}

TEST_CASE("scan_second is idempotent on random formulas") {
  const std::vector<std::string> pieces = {"a", "b", "=", "<", "\\le", "\\pm", "\\mp", "+", "x",
                                           "{", "}", "\\dots", "1", "\\sin@{x}", "\\ne", "-"};
  std::mt19937 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<FormulaRecord> rs;
    for (int k = 0; k < 4; ++k) {
      std::string s;
      int depth = 0;
      const int len = 1 + static_cast<int>(rng() % 8);
      for (int t = 0; t < len; ++t) {
        auto p = pieces[rng() % pieces.size()];
        if (p == "}" && depth == 0) continue;
        if (p == "{") ++depth;
        if (p == "}") --depth;
        s += p;
      }
      s += std::string(static_cast<std::size_t>(depth), '}');
      rs.push_back(rec("EF." + std::to_string(k + 1), s));
    }
    const auto once = scan_second(rs);
    CHECK(scan_second(once) == once);
    for (const auto& r : once) CHECK(has_relation(r.latex));
  }
}

TEST_CASE("preamble expansion") {
  std::vector<PreambleMacro> ms = {{"\\half", 0, "\\frac{1}{2}"}, {"\\sq", 1, "#1^2"}};
  CHECK(expand_preamble_macros("\\half x=\\sq{y}", ms) == "{\\frac{1}{2}} x={{y}^2}");
  CHECK(expand_preamble_macros("\\halfway", ms) == "\\halfway");
}

TEST_CASE("corpus lines round trip") {
  FormulaRecord r = rec("EF.3-2", "x=-y");
  r.constraints = {"y>0", "y\\in\\Real"};
  r.label = "eq:\"quoted\"";
  r.source_line = 12;
  r.split_origin = "EF.3";
  std::stringstream ss;
  write_corpus(ss, {r, rec("EF.4", "a=b")});
  const auto back = read_corpus(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == r);
  CHECK(!back[1].label);
  CHECK_THROWS(record_from_json(R"({"id":"x","chapter_code":"QQ","latex":"a=b"})"));
}
