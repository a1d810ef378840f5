#include "texcas/report.hpp"

#include "texcas/ir/emit.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace texcas;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config_file;
  std::string corpus;
  std::string blueprints;
  std::string macro_table;
  std::string chapter;
  std::string format = "text";
  int jobs = 0;
  int timeout = 0;
};

report::PipelineConfig resolve_config(const Options& o) {
  auto c = report::default_config(TEXCAS_DATA_DIR);
  if (!o.config_file.empty()) c = report::load_config_file(o.config_file, c);
  if (!o.corpus.empty()) c.corpus = o.corpus;
  if (!o.blueprints.empty()) c.blueprints = o.blueprints;
  if (!o.macro_table.empty()) c.macro_table = o.macro_table;
  if (!o.chapter.empty()) {
    if (!extraction::find_chapter(o.chapter))
      throw report::PipelineError(report::PipelineError::Kind::ConfigParseError, "unknown chapter code " + o.chapter);
    c.chapter = o.chapter;
  }
  if (o.jobs > 0) c.jobs = o.jobs;
  if (o.timeout > 0) c.numeric.timeout_seconds = o.timeout;
  return c;
}

report::Format format_of(const Options& o) {
  if (auto f = report::format_from_string(o.format)) return *f;
  throw report::PipelineError(report::PipelineError::Kind::ConfigParseError,
                              "unknown format " + o.format + " (text, csv, jsonl)");
}

std::vector<extraction::FormulaRecord> load_corpus(const report::PipelineConfig& c) {
  if (!fs::is_regular_file(c.corpus))
    throw report::PipelineError(report::PipelineError::Kind::MissingInputFile, "missing corpus " + c.corpus);
  std::vector<extraction::FormulaRecord> out;
  for (auto& r : extraction::scan_second(extraction::read_corpus_file(c.corpus)))
    if (!c.chapter || r.chapter_code == *c.chapter) out.push_back(std::move(r));
  return out;
}

std::string rational_text(const ir::Rational& r) {
  std::ostringstream s;
  s << r;
  return s.str();
}

std::string describe(const constraints::VariableDomain& d) {
  std::string s = d.var + " in " + std::string(constraints::to_string(d.base_set));
  if (d.interval) {
    s += d.interval->lower ? (d.interval->lower_strict ? " (" : " [") + rational_text(*d.interval->lower) : " (-inf";
    s += ", ";
    s += d.interval->upper ? rational_text(*d.interval->upper) + (d.interval->upper_strict ? ")" : "]") : "inf)";
  }
  if (d.progression)
    s += " progression start " + rational_text(d.progression->start) + " step " + rational_text(d.progression->step);
  if (d.finite_set) {
    s += " {";
    for (std::size_t k = 0; k < d.finite_set->size(); ++k) s += (k ? ", " : "") + rational_text((*d.finite_set)[k]);
    s += "}";
  }
  for (const auto& e : d.exclusions) s += " \\ne " + rational_text(e);
  if (d.excluded_progression)
    s += " excluding start " + rational_text(d.excluded_progression->start) + " step " +
         rational_text(d.excluded_progression->step);
  return s;
}

int cmd_extract(const std::vector<std::string>& files, const std::string& stage, const std::string& subst_path,
                const std::string& output, const Options& o) {
  const auto subst = extraction::load_substitutions_file(subst_path);
  std::vector<extraction::FormulaRecord> all;
  for (const auto& f : files) {
    std::string code = o.chapter;
    if (code.empty()) code = fs::path(f).stem().string();
    if (!extraction::find_chapter(code))
      throw report::PipelineError(report::PipelineError::Kind::ConfigParseError,
                                  "cannot tell the chapter of " + f + "; pass --chapter");
    std::ifstream in(f);
    if (!in) throw report::PipelineError(report::PipelineError::Kind::MissingInputFile, "missing input file " + f);
    std::stringstream buf;
    buf << in.rdbuf();
    const auto source = extraction::make_chapter_source(code, buf.str());
    auto recs = stage == "first" ? extraction::scan_first(source, subst) : extraction::extract_chapter(source, subst);
    all.insert(all.end(), recs.begin(), recs.end());
  }
  if (output.empty()) {
    extraction::write_corpus(std::cout, all);
  } else {
    std::ofstream out(output);
    extraction::write_corpus(out, all);
  }
  std::cerr << all.size() << " records\n";
  return 0;
}

int cmd_translate(const std::vector<std::string>& latex, const Options& o) {
  const auto c = resolve_config(o);
  const auto res = report::load_resources(c);
  std::vector<extraction::FormulaRecord> recs;
  if (latex.empty()) {
    recs = load_corpus(c);
  } else {
    for (std::size_t k = 0; k < latex.size(); ++k) {
      extraction::FormulaRecord r;
      r.id = "arg." + std::to_string(k + 1);
      r.latex = latex[k];
      recs.push_back(r);
    }
  }
  const bool csv = format_of(o) == report::Format::CSV;
  if (csv) std::cout << "id,status,generic,maple\n";
  for (const auto& r : recs) {
    std::string status = "Translated", generic, maple;
    try {
      const auto rel = ir::translate_latex(r.latex, res.macros, res.translations);
      generic = ir::emit_relation(rel, ir::Dialect::GenericInfix);
      try {
        maple = ir::emit_relation(rel, ir::Dialect::MapleSyntax);
      } catch (const ir::NoDialectMapping& e) {
        maple = std::string("(") + e.what() + ")";
      }
    } catch (const ir::TranslationError& e) {
      status = std::string(ir::to_string(e.kind()));
      generic = e.detail();
    }
    if (csv)
      std::cout << r.id << ',' << status << ",\"" << generic << "\",\"" << maple << "\"\n";
    else
      std::cout << r.id << '\t' << status << '\t' << generic << (maple.empty() ? "" : "\t" + maple) << '\n';
  }
  return 0;
}

int cmd_verify(const std::string& stages, const Options& o) {
  auto c = resolve_config(o);
  if (stages == "symbolic") c.stages = report::VerifyStages::Symbolic;
  else if (stages == "numeric") c.stages = report::VerifyStages::Numeric;
  const auto r = report::run_pipeline(c);
  const auto f = format_of(o);
  if (f == report::Format::StructuredLines) {
    std::cout << report::render_report(r, f);
    return 0;
  }
  for (const auto& out : r.outcomes) {
    std::cout << out.id << '\t' << report::to_string(out.translation);
    if (out.symbolic) {
      std::cout << "\tsymbolic " << symbolic::to_string(out.symbolic->classification);
      if (!out.symbolic->preprocessor.empty()) std::cout << " via " << out.symbolic->preprocessor;
      if (out.symbolic->classification == symbolic::SymbolicClass::OtherNumeric) std::cout << " = " << out.symbolic->value;
    }
    if (out.numeric) {
      std::cout << "\tnumeric " << numeric::to_string(out.numeric->classification);
      if (out.numeric->classification == numeric::NumericClass::AboveThreshold)
        std::cout << " " << out.numeric->worst_discrepancy << " at " << out.numeric->worst_assignment;
      else if (!out.numeric->detail.empty())
        std::cout << " (" << out.numeric->detail << ")";
    }
    std::cout << '\n';
  }
  return 0;
}

int cmd_blueprint_check(const std::vector<std::string>& constraint_texts, const Options& o) {
  const auto c = resolve_config(o);
  if (!fs::is_regular_file(c.blueprints))
    throw report::PipelineError(report::PipelineError::Kind::MissingInputFile, "missing blueprints " + c.blueprints);
  const auto blueprints = constraints::load_blueprint_file(c.blueprints);

  std::vector<std::pair<std::string, std::vector<std::string>>> items;
  if (constraint_texts.empty()) {
    for (const auto& r : load_corpus(c))
      if (!r.constraints.empty()) items.emplace_back(r.id, r.constraints);
  } else {
    for (const auto& t : constraint_texts) items.push_back({"-", {t}});
  }
  int gaps = 0;
  for (const auto& [id, texts] : items) {
    const auto a = constraints::analyze_constraints(texts, blueprints);
    for (const auto& t : texts) {
      std::cout << id << '\t' << t << '\n';
      if (auto m = constraints::match_constraint(t, blueprints)) {
        std::cout << "  blueprint " << m->source_blueprint;
        for (const auto& [var, v] : m->assignments) std::cout << "  " << var << "=" << v;
        std::cout << '\n';
      }
    }
    for (const auto& d : a.domains) std::cout << "  domain " << describe(d) << '\n';
    for (const auto& u : a.unmatched) std::cout << "  unmatched " << u << '\n';
    for (const auto& m : a.malformed) std::cout << "  malformed " << m << '\n';
    for (const auto& k : a.conflicts) std::cout << "  conflict " << k << '\n';
    gaps += static_cast<int>(a.unmatched.size() + a.malformed.size());
  }
  std::cout << gaps << " constraint gaps\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Translation and verification of semantic LaTeX formula corpora"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_file, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--corpus", o.corpus, "JSON-lines formula corpus");
  app.add_option("--blueprints", o.blueprints, "constraint blueprint rules");
  app.add_option("--macro-table", o.macro_table, "semantic macro table");
  app.add_option("--chapter", o.chapter, "two-letter chapter code filter");
  app.add_option("--format", o.format, "text, csv or jsonl");
  app.add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--timeout", o.timeout, "seconds per formula")->check(CLI::PositiveNumber);

  auto* extract = app.add_subcommand("extract", "harvest formulae from chapter .tex sources");
  std::vector<std::string> tex_files;
  std::string stage = "second", subst = std::string(TEXCAS_DATA_DIR) + "/substitutions.txt", output;
  extract->add_option("files", tex_files, "chapter sources (file stem names the chapter)")->required();
  extract->add_option("--stage", stage, "first or second")->check(CLI::IsMember({"first", "second"}));
  extract->add_option("--substitutions", subst, "chapter substitution rules");
  extract->add_option("-o,--output", output, "output file (default stdout)");

  auto* translate = app.add_subcommand("translate", "translate formulae to the generic and Maple syntaxes");
  std::vector<std::string> latex;
  translate->add_option("latex", latex, "formulae to translate (default: the corpus)");

  auto* verify = app.add_subcommand("verify", "verify each formula and print its outcome");
  std::string stages = "both";
  verify->add_option("--stages", stages, "symbolic, numeric or both")
      ->check(CLI::IsMember({"symbolic", "numeric", "both"}));

  auto* report_cmd = app.add_subcommand("report", "per-chapter statistics");
  auto* flags = app.add_subcommand("flags", "cases worth a closer look");

  auto* bp = app.add_subcommand("blueprint-check", "interpret constraints and list gaps");
  std::vector<std::string> constraint_texts;
  bp->add_option("constraints", constraint_texts, "constraints to check (default: the corpus)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*extract) return cmd_extract(tex_files, stage, subst, output, o);
    if (*translate) return cmd_translate(latex, o);
    if (*verify) return cmd_verify(stages, o);
    if (*report_cmd) {
      std::cout << report::render_report(report::run_pipeline(resolve_config(o)), format_of(o));
      return 0;
    }
    if (*flags) {
      const auto r = report::run_pipeline(resolve_config(o));
      std::cout << report::render_flagged(report::list_flagged(r), format_of(o));
      return 0;
    }
    if (*bp) return cmd_blueprint_check(constraint_texts, o);
  } catch (const report::PipelineError& e) {
    std::cerr << report::to_string(e.kind()) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
