#include "doctest.h"

#include "texcas/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace texcas;
using namespace texcas::report;

namespace {

const std::string kData = TEXCAS_DATA_DIR;

const Resources& resources() {
  static const Resources r = load_resources(default_config(kData));
  return r;
}

const std::vector<extraction::FormulaRecord>& mini() {
  static const auto r = extraction::read_corpus_file(kData + "/corpus/mini_corpus.jsonl");
  return r;
}

const Report& mini_report() {
  static const Report r = run_pipeline(mini(), resources(), default_config(kData));
  return r;
}

extraction::FormulaRecord record(std::string id, std::string chapter, std::string latex,
                                 std::vector<std::string> constraints = {}) {
  extraction::FormulaRecord r;
  r.id = std::move(id);
  r.chapter_code = std::move(chapter);
  r.latex = std::move(latex);
  r.constraints = std::move(constraints);
  return r;
}

const FormulaOutcome& find(const Report& r, const std::string& id) {
  auto it = std::find_if(r.outcomes.begin(), r.outcomes.end(), [&](const auto& o) { return o.id == id; });
  REQUIRE(it != r.outcomes.end());
  return *it;
}

void check_invariants(const Report& r) {
  ChapterReport sum;
  for (const auto& row : r.chapters) {
    CHECK(row.TVs <= row.T);
    CHECK(row.T <= row.F2);
    CHECK(row.TVn <= row.T - row.TVs);
    CHECK(row.F2 == row.T + row.failures.at("UnknownMacro") + row.failures.at("InsufficientSemantics") +
                        row.failures.at("UnsupportedGrammar"));
    sum.F2 += row.F2;
    sum.T += row.T;
    sum.TVs += row.TVs;
    sum.TVn += row.TVn;
    for (const auto& [k, n] : row.failures) sum.failures[k] += n;
  }
  CHECK(r.total.F2 == sum.F2);
  CHECK(r.total.T == sum.T);
  CHECK(r.total.TVs == sum.TVs);
  CHECK(r.total.TVn == sum.TVn);
  for (const auto& [k, n] : sum.failures) CHECK(r.total.failures.at(k) == n);
  CHECK(r.total.F2 == static_cast<int>(r.outcomes.size()));
}

}  // namespace

TEST_CASE("table row formatting with recomputed percentages") {
  ChapterReport ef;
  ef.chapter_code = "EF";
  ef.chapter_number = 4;
  ef.F2 = 466;
  ef.T = 406;
  ef.TVs = 182;
  ef.TVn = 61;
  CHECK(table_row(ef) == "EF, 4, 466, 406 (87.1%), 182 (39.1%), 61 (21.5%)");

  ChapterReport empty;
  empty.chapter_code = "Σ";
  CHECK(table_row(empty) == "Σ, -, 0, 0 (0.0%), 0 (0.0%), 0 (0.0%)");
}

TEST_CASE("empty corpus gives an all-zero report") {
  const auto r = run_pipeline({}, resources(), default_config(kData));
  CHECK(r.chapters.empty());
  CHECK(r.outcomes.empty());
  CHECK(r.total.F2 == 0);
  CHECK(r.total.T == 0);
  CHECK(r.total.TVs == 0);
  CHECK(r.total.TVn == 0);
  for (const auto& c : failure_categories()) CHECK(r.total.failures.at(c) == 0);
  CHECK(list_flagged(r).empty());
  const auto text = render_report(r, Format::Text);
  CHECK(text.find("Σ, -, 0, 0 (0.0%), 0 (0.0%), 0 (0.0%)") != std::string::npos);
}

TEST_CASE("single chapter renders one data row and the total row") {
  const std::vector<extraction::FormulaRecord> recs{record("EF.1", "EF", "\\sin^{2}@{z}+\\cos^{2}@{z}=1"),
                                                    record("EF.2", "EF", "\\AiryAi@{z}=0")};
  const auto r = run_pipeline(recs, resources(), default_config(kData));
  REQUIRE(r.chapters.size() == 1);
  CHECK(table_row(r.chapters[0]) == "EF, 4, 2, 1 (50.0%), 1 (50.0%), 0 (0.0%)");

  std::istringstream csv(render_report(r, Format::CSV));
  std::vector<std::string> lines;
  for (std::string l; std::getline(csv, l);) lines.push_back(l);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0].rfind("chapter_code,chapter_number,F2,T,T_percent,TVs,TVs_percent,TVn,TVn_percent,UnknownMacro", 0) == 0);
  CHECK(lines[1] == "EF,4,2,1,50.0,1,50.0,0,0.0,1,0,0,0,0,0,0");
  CHECK(lines[2] == "Σ,,2,1,50.0,1,50.0,0,0.0,1,0,0,0,0,0,0");
}

TEST_CASE("mini corpus totals") {
  const auto& r = mini_report();
  CHECK(r.total.F2 == 40);
  CHECK(r.total.T == 38);
  CHECK(r.total.failures.at("UnknownMacro") == 2);
  CHECK(r.total.failures.at("AboveThreshold") == 2);
  CHECK(r.total.TVs >= 25);
  CHECK(r.total.TVs + r.total.TVn == 36);
  check_invariants(r);

  CHECK(find(r, "EF.13").numeric->classification == numeric::NumericClass::AboveThreshold);
  CHECK(find(r, "OP.4").numeric->classification == numeric::NumericClass::AboveThreshold);
  CHECK(find(r, "OP.4").symbolic->classification == symbolic::SymbolicClass::OtherNumeric);
  CHECK(find(r, "AI.1").translation == TranslationStatus::UnknownMacro);
  CHECK(find(r, "ST.1").translation == TranslationStatus::UnknownMacro);
  // symbolically verified formulae never reach the numeric stage
  for (const auto& o : r.outcomes)
    if (o.symbolically_verified()) CHECK_FALSE(o.numeric.has_value());
}

TEST_CASE("aggregation is independent of corpus order and worker count") {
  auto shuffled = mini();
  std::mt19937 rng(7);
  for (int round = 0; round < 3; ++round) {
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto config = default_config(kData);
    config.jobs = 1 + round * 3;
    const auto r = run_pipeline(shuffled, resources(), config);
    CHECK(r.chapters == mini_report().chapters);
    CHECK(r.total == mini_report().total);
    CHECK(r.outcomes == mini_report().outcomes);
  }
}

TEST_CASE("invariants hold on random sub-corpora") {
  std::vector<FormulaOutcome> all = mini_report().outcomes;
  std::mt19937 rng(11);
  for (int round = 0; round < 50; ++round) {
    std::vector<FormulaOutcome> pick;
    for (const auto& o : all)
      if (rng() % 2) pick.push_back(o);
    check_invariants(aggregate(pick));
  }
}

TEST_CASE("structured lines round trip") {
  const auto& r = mini_report();
  std::istringstream in(render_report(r, Format::StructuredLines));
  const auto back = read_structured_lines(in);
  REQUIRE(back.size() == r.outcomes.size());
  CHECK(back == r.outcomes);
  const auto again = aggregate(back);
  CHECK(again.chapters == r.chapters);
  CHECK(again.total == r.total);
  CHECK_THROWS(outcome_from_json("{\"id\": \"x\"}"));
}

TEST_CASE("flagged cases") {
  const auto flags = list_flagged(mini_report());
  int numeric = 0, symbolic = 0, constraint = 0;
  for (const auto& f : flags) {
    numeric += f.stage == FlagStage::Numeric;
    symbolic += f.stage == FlagStage::Symbolic;
    constraint += f.stage == FlagStage::Constraint;
  }
  // one per AboveThreshold and one per OtherNumeric outcome
  int above = 0, other = 0;
  for (const auto& o : mini_report().outcomes) {
    above += o.numeric && o.numeric->classification == numeric::NumericClass::AboveThreshold;
    other += o.symbolic && o.symbolic->classification == symbolic::SymbolicClass::OtherNumeric;
  }
  CHECK(numeric == above);
  CHECK(symbolic == other);
  CHECK(constraint == 1);
  for (std::size_t i = 1; i < flags.size(); ++i) CHECK(flags[i - 1].discrepancy >= flags[i].discrepancy);

  const auto bs = std::find_if(flags.begin(), flags.end(), [](const auto& f) { return f.stage == FlagStage::Constraint; });
  REQUIRE(bs != flags.end());
  CHECK(bs->formula_id == "BS.1");
  CHECK(bs->detail.find("2\\nu=-1, -2 -3, \\ldots") != std::string::npos);

  const auto sign = std::find_if(flags.begin(), flags.end(), [](const auto& f) { return f.formula_id == "EF.13"; });
  REQUIRE(sign != flags.end());
  CHECK(sign->stage == FlagStage::Numeric);
  CHECK(sign->discrepancy > 1e-3);

  const std::vector<extraction::FormulaRecord> clean{record("EF.1", "EF", "\\sin^{2}@{z}+\\cos^{2}@{z}=1"),
                                                     record("EF.2", "EF", "\\atan@{x}+\\atan@{\\frac{1}{x}}=\\frac{\\cpi}{2}",
                                                            {"0 < x < 1"})};
  CHECK(list_flagged(run_pipeline(clean, resources(), default_config(kData))).empty());
}

TEST_CASE("stage selection") {
  auto config = default_config(kData);
  const auto rec = record("EF.9", "EF", "\\sin@{2z}=2\\sin@{z}\\cos@{z}");

  config.stages = VerifyStages::Symbolic;
  auto o = process_formula(rec, resources(), config);
  CHECK(o.symbolically_verified());
  CHECK_FALSE(o.numeric.has_value());

  config.stages = VerifyStages::Numeric;
  o = process_formula(rec, resources(), config);
  CHECK_FALSE(o.symbolic.has_value());
  CHECK(o.numerically_verified());

  // inequalities skip the symbolic stage
  config.stages = VerifyStages::Both;
  o = process_formula(record("EF.20", "EF", "\\expe^{x}>0", {"x \\in \\Real"}), resources(), config);
  CHECK_FALSE(o.symbolic.has_value());
  CHECK(o.numerically_verified());
  CHECK(o.relation == "%e^x > 0");
}

TEST_CASE("chapter filter") {
  auto config = default_config(kData);
  config.chapter = "BS";
  const auto r = run_pipeline(mini(), resources(), config);
  REQUIRE(r.chapters.size() == 1);
  CHECK(r.chapters[0].chapter_code == "BS");
  CHECK(r.total.F2 == 6);
}

TEST_CASE("config parsing") {
  const auto defaults = default_config(kData);
  std::istringstream ini(
      "[paths]\n"
      "corpus = corpus/other.jsonl\n"
      "[verify]\n"
      "stages = numeric\n"
      "chapter = GA\n"
      "jobs = 3\n"
      "[symbolic]\n"
      "mode = Quotient\n"
      "preprocessors = None, Expand\n"
      "rewrite_step_budget = 50\n"
      "[numeric]\n"
      "test_values = -1/2, 0.25, 2i\n"
      "threshold = 1e-6\n"
      "precision_digits = 12\n"
      "timeout_seconds = 9\n"
      "comparison_mode = relative\n");
  const auto c = load_config(ini, "/base", defaults);
  CHECK(c.corpus == "/base/corpus/other.jsonl");
  CHECK(c.macro_table == defaults.macro_table);
  CHECK(c.stages == VerifyStages::Numeric);
  CHECK(c.chapter == std::optional<std::string>("GA"));
  CHECK(c.jobs == 3);
  CHECK(c.symbolic.mode == symbolic::SimplifyMode::Quotient);
  CHECK(c.symbolic.preprocessors ==
        std::vector<symbolic::Preprocessor>{symbolic::Preprocessor::None, symbolic::Preprocessor::Expand});
  CHECK(c.symbolic.rewrite_step_budget == 50);
  REQUIRE(c.numeric.test_values.size() == 3);
  CHECK(c.numeric.test_values[0] == numeric::TestValue{ir::Rational(-1, 2), 0});
  CHECK(c.numeric.test_values[1] == numeric::TestValue{ir::Rational(1, 4), 0});
  CHECK(c.numeric.test_values[2] == numeric::TestValue{0, 2});
  CHECK(c.numeric.threshold == doctest::Approx(1e-6));
  CHECK(c.numeric.precision_digits == 12);
  CHECK(c.numeric.timeout_seconds == 9);
  CHECK(c.numeric.comparison_mode == numeric::ComparisonMode::RelativeDifference);

  auto fails = [&](const std::string& text) {
    std::istringstream in(text);
    try {
      load_config(in, "", defaults);
    } catch (const PipelineError& e) {
      return e.kind() == PipelineError::Kind::ConfigParseError;
    }
    return false;
  };
  CHECK(fails("[paths]\nunknown = 1\n"));
  CHECK(fails("[colours]\nred = 1\n"));
  CHECK(fails("orphan = 1\n"));
  CHECK(fails("[verify]\nstages = sometimes\n"));
  CHECK(fails("[verify]\njobs = 0\n"));
  CHECK(fails("[verify]\nchapter = XX\n"));
  CHECK(fails("[symbolic]\npreprocessors = None, Magic\n"));
  CHECK(fails("[numeric]\nthreshold = small\n"));
  CHECK(fails("[numeric]\nprecision_digits = 40\n"));
  CHECK(fails("[numeric]\ntest_values = x\n"));
  CHECK(fails("[paths\n"));

  // bundled config reproduces the defaults
  const auto bundled = load_config_file(kData + "/config.ini", defaults);
  CHECK(std::filesystem::equivalent(bundled.corpus, defaults.corpus));
  CHECK(bundled.numeric.threshold == defaults.numeric.threshold);
  CHECK(bundled.numeric.test_values == defaults.numeric.test_values);
  CHECK(bundled.symbolic.preprocessors == defaults.symbolic.preprocessors);
}

TEST_CASE("missing input files") {
  auto config = default_config(kData);
  config.corpus = kData + "/corpus/does_not_exist.jsonl";
  try {
    run_pipeline(config);
    FAIL("expected MissingInputFile");
  } catch (const PipelineError& e) {
    CHECK(e.kind() == PipelineError::Kind::MissingInputFile);
  }
  config = default_config(kData);
  config.blueprints = "/nonexistent/blueprints.txt";
  CHECK_THROWS_AS(load_resources(config), PipelineError);
  CHECK_THROWS_AS(load_config_file("/nonexistent/config.ini", config), PipelineError);
}
