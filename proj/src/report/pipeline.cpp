#include "texcas/report.hpp"

#include "texcas/ir/emit.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <sstream>
#include <thread>

namespace texcas::report {

std::string_view to_string(TranslationStatus s) {
  switch (s) {
    case TranslationStatus::Translated: return "Translated";
    case TranslationStatus::UnknownMacro: return "UnknownMacro";
    case TranslationStatus::InsufficientSemantics: return "InsufficientSemantics";
    case TranslationStatus::UnsupportedGrammar: return "UnsupportedGrammar";
  }
  return "?";
}

std::string_view to_string(FlagStage s) {
  switch (s) {
    case FlagStage::Symbolic: return "Symbolic";
    case FlagStage::Numeric: return "Numeric";
    case FlagStage::Constraint: return "Constraint";
  }
  return "?";
}

std::string_view to_string(SuspectedReason r) {
  switch (r) {
    case SuspectedReason::InvalidValues: return "InvalidValues";
    case SuspectedReason::TranslationError: return "TranslationError";
    case SuspectedReason::SourceError: return "SourceError";
    case SuspectedReason::EngineError: return "EngineError";
  }
  return "?";
}

bool FormulaOutcome::symbolically_verified() const {
  return symbolic && (symbolic->classification == symbolic::SymbolicClass::Zero ||
                      symbolic->classification == symbolic::SymbolicClass::One);
}

bool FormulaOutcome::numerically_verified() const {
  return numeric && numeric->classification == numeric::NumericClass::Verified;
}

// Timing is not part of an outcome's identity.
bool FormulaOutcome::operator==(const FormulaOutcome& o) const {
  return id == o.id && chapter == o.chapter && latex == o.latex && translation == o.translation &&
         translation_detail == o.translation_detail && relation == o.relation && cas == o.cas &&
         unmatched_constraints == o.unmatched_constraints && malformed_constraints == o.malformed_constraints &&
         symbolic == o.symbolic && numeric == o.numeric;
}

double ChapterReport::t_percent() const { return F2 == 0 ? 0.0 : 100.0 * T / F2; }
double ChapterReport::tvs_percent() const { return F2 == 0 ? 0.0 : 100.0 * TVs / F2; }
double ChapterReport::tvn_percent() const { return F2 - TVs == 0 ? 0.0 : 100.0 * TVn / (F2 - TVs); }

Resources load_resources(const PipelineConfig& config) {
  for (const auto* p : {&config.macro_table, &config.translation_table, &config.blueprints, &config.rewrite_rules})
    if (!std::filesystem::is_regular_file(*p))
      throw PipelineError(PipelineError::Kind::MissingInputFile, "missing input file " + *p);
  Resources r;
  r.macros = parser::load_macro_table_file(config.macro_table);
  r.translations = ir::load_translation_table_file(config.translation_table);
  r.blueprints = constraints::load_blueprint_file(config.blueprints);
  r.rules = symbolic::load_rule_table_file(config.rewrite_rules);
  return r;
}

namespace {

TranslationStatus status_of(ir::TranslationError::Kind k) {
  switch (k) {
    case ir::TranslationError::Kind::UnknownMacro: return TranslationStatus::UnknownMacro;
    case ir::TranslationError::Kind::InsufficientSemantics: return TranslationStatus::InsufficientSemantics;
    case ir::TranslationError::Kind::UnsupportedGrammar: return TranslationStatus::UnsupportedGrammar;
  }
  return TranslationStatus::UnsupportedGrammar;
}

std::string assignment_text(const numeric::Assignment& a) {
  std::string s;
  for (const auto& [var, v] : a) {
    if (!s.empty()) s += ", ";
    s += var + "=" + numeric::to_string(v);
  }
  return s;
}

NumericSummary summarize(const numeric::NumericOutcome& n) {
  NumericSummary s;
  s.classification = n.classification;
  s.worst_discrepancy = static_cast<double>(n.worst_discrepancy);
  if (n.worst) s.worst_assignment = assignment_text(n.worst->assignment);
  s.detail = n.detail;
  s.evaluations = static_cast<int>(n.evaluations.size());
  s.skipped = static_cast<int>(n.skipped.size());
  s.branch_sensitive = n.branch_sensitive;
  return s;
}

NumericSummary timed_out(std::string detail) {
  NumericSummary s;
  s.classification = numeric::NumericClass::Timeout;
  s.detail = std::move(detail);
  return s;
}

// Chapter order first, then numeric pieces of the id compare as numbers.
bool id_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t ei = i, ej = j;
      while (ei < a.size() && std::isdigit(static_cast<unsigned char>(a[ei]))) ++ei;
      while (ej < b.size() && std::isdigit(static_cast<unsigned char>(b[ej]))) ++ej;
      const auto na = a.substr(i, ei - i), nb = b.substr(j, ej - j);
      const auto ta = na.substr(std::min(na.find_first_not_of('0'), na.size()));
      const auto tb = nb.substr(std::min(nb.find_first_not_of('0'), nb.size()));
      if (ta.size() != tb.size()) return ta.size() < tb.size();
      if (ta != tb) return ta < tb;
      i = ei;
      j = ej;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

int chapter_number(const std::string& code) {
  const auto* c = extraction::find_chapter(code);
  return c ? c->number : 0;
}

// Known chapters in chapter order, unknown codes after them.
bool chapter_less(const std::string& a, const std::string& b) {
  const int na = chapter_number(a), nb = chapter_number(b);
  const int ka = na == 0 ? 1000 : na, kb = nb == 0 ? 1000 : nb;
  if (ka != kb) return ka < kb;
  return a < b;
}

bool outcome_less(const FormulaOutcome& a, const FormulaOutcome& b) {
  if (a.chapter != b.chapter) return chapter_less(a.chapter, b.chapter);
  if (a.id != b.id) return id_less(a.id, b.id);
  return a.latex < b.latex;
}

ChapterReport empty_row(std::string code, int number) {
  ChapterReport r;
  r.chapter_code = std::move(code);
  r.chapter_number = number;
  for (const auto& c : failure_categories()) r.failures[c] = 0;
  return r;
}

void count(ChapterReport& row, const FormulaOutcome& o) {
  ++row.F2;
  if (o.translation != TranslationStatus::Translated) {
    ++row.failures[std::string(to_string(o.translation))];
    return;
  }
  ++row.T;
  if (o.symbolically_verified()) {
    ++row.TVs;
    return;
  }
  if (o.numerically_verified()) ++row.TVn;
  if (o.numeric) {
    const std::string name(numeric::to_string(o.numeric->classification));
    if (auto it = row.failures.find(name); it != row.failures.end()) ++it->second;
  }
}

}  // namespace

FormulaOutcome process_formula(const extraction::FormulaRecord& record, const Resources& res,
                               const PipelineConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  FormulaOutcome o;
  o.id = record.id;
  o.chapter = record.chapter_code;
  o.latex = record.latex;
  auto finish = [&]() -> FormulaOutcome {
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return o;
  };

  const auto analysis = constraints::analyze_constraints(record.constraints, res.blueprints);
  o.unmatched_constraints = analysis.unmatched;
  o.malformed_constraints = analysis.malformed;

  ir::Relation rel;
  try {
    rel = ir::translate_latex(record.latex, res.macros, res.translations);
  } catch (const ir::TranslationError& e) {
    o.translation = status_of(e.kind());
    o.translation_detail = e.detail();
    return finish();
  }
  o.relation = ir::emit_relation(rel, ir::Dialect::GenericInfix);
  try {
    o.cas = ir::emit_relation(rel, ir::Dialect::MapleSyntax);
  } catch (const ir::NoDialectMapping& e) {
    o.translation_detail = e.what();
  }

  // one wall-clock budget for both stages of this formula
  const auto deadline = numeric::Deadline::after(std::chrono::seconds(config.numeric.timeout_seconds));
  numeric::DeadlineScope scope(deadline);

  const bool equation = rel.kind == ir::RelationKind::Eq || rel.kind == ir::RelationKind::Equiv;
  if (config.stages != VerifyStages::Numeric && equation) {
    auto sc = config.symbolic;
    sc.assumptions = analysis.domains;
    try {
      const auto so = symbolic::verify_symbolic(rel, analysis.domains, sc, res.rules);
      SymbolicSummary s;
      s.classification = so.classification;
      if (so.value) s.value = ir::emit_cas(*so.value, ir::Dialect::GenericInfix);
      else if (so.error) s.value = std::string(symbolic::to_string(*so.error));
      if (so.winning_preprocessor) s.preprocessor = std::string(symbolic::to_string(*so.winning_preprocessor));
      if (so.winning_mode) s.mode = std::string(symbolic::to_string(*so.winning_mode));
      s.steps = so.steps_used;
      o.symbolic = s;
    } catch (const numeric::EvalError& e) {
      if (e.kind() != numeric::EvalError::Kind::Timeout) throw;
      SymbolicSummary s;
      s.classification = symbolic::SymbolicClass::Error;
      s.value = "Timeout";
      o.symbolic = s;
      o.numeric = timed_out("symbolic stage exceeded the time budget");
      return finish();
    }
  }

  if (config.stages != VerifyStages::Symbolic && !o.symbolically_verified()) {
    try {
      o.numeric = summarize(numeric::verify_numeric(rel, analysis.domains, analysis.special_values, config.numeric));
    } catch (const numeric::EvalError& e) {
      if (e.kind() != numeric::EvalError::Kind::Timeout) throw;
      o.numeric = timed_out(e.detail());
    }
  }
  return finish();
}

Report aggregate(std::vector<FormulaOutcome> outcomes) {
  std::sort(outcomes.begin(), outcomes.end(), outcome_less);
  Report r;
  r.total = empty_row("Σ", 0);
  for (const auto& o : outcomes) {
    if (r.chapters.empty() || r.chapters.back().chapter_code != o.chapter)
      r.chapters.push_back(empty_row(o.chapter, chapter_number(o.chapter)));
    count(r.chapters.back(), o);
  }
  for (const auto& row : r.chapters) {
    r.total.F2 += row.F2;
    r.total.T += row.T;
    r.total.TVs += row.TVs;
    r.total.TVn += row.TVn;
    for (const auto& [k, n] : row.failures) r.total.failures[k] += n;
  }
  r.outcomes = std::move(outcomes);
  return r;
}

Report run_pipeline(const std::vector<extraction::FormulaRecord>& records, const Resources& res,
                    const PipelineConfig& config) {
  std::vector<extraction::FormulaRecord> work;
  for (auto& rec : extraction::scan_second(records))
    if (!config.chapter || rec.chapter_code == *config.chapter) work.push_back(std::move(rec));

  std::vector<FormulaOutcome> outcomes(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < work.size(); i = next++) outcomes[i] = process_formula(work[i], res, config);
  };
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, config.jobs)), work.size());
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return aggregate(std::move(outcomes));
}

Report run_pipeline(const PipelineConfig& config) {
  if (!std::filesystem::is_regular_file(config.corpus))
    throw PipelineError(PipelineError::Kind::MissingInputFile, "missing corpus " + config.corpus);
  const auto res = load_resources(config);
  return run_pipeline(extraction::read_corpus_file(config.corpus), res, config);
}

std::vector<FlaggedCase> list_flagged(const Report& report) {
  std::vector<FlaggedCase> out;
  for (const auto& o : report.outcomes) {
    for (const auto& c : o.malformed_constraints)
      out.push_back({o.id, FlagStage::Constraint, c, 0.0, SuspectedReason::SourceError});
    for (const auto& c : o.unmatched_constraints)
      out.push_back({o.id, FlagStage::Constraint, c, 0.0, SuspectedReason::InvalidValues});

    if (o.symbolic && o.symbolic->classification == symbolic::SymbolicClass::OtherNumeric) {
      double d = 0;
      try {
        const auto v = numeric::eval(ir::parse_infix(o.symbolic->value), numeric::Environment{});
        d = static_cast<double>(std::abs(o.symbolic->mode == "Quotient" ? v - 1.0L : v));
      } catch (const std::exception&) {
      }
      out.push_back({o.id, FlagStage::Symbolic, o.symbolic->mode + " simplifies to " + o.symbolic->value, d,
                     SuspectedReason::SourceError});
    }

    if (o.numeric && o.numeric->classification == numeric::NumericClass::AboveThreshold) {
      const auto& n = *o.numeric;
      std::ostringstream detail;
      detail << "worst discrepancy " << n.worst_discrepancy << " at " << n.worst_assignment;
      auto reason = SuspectedReason::SourceError;
      if (n.branch_sensitive) reason = SuspectedReason::EngineError;
      else if (!o.unmatched_constraints.empty() || !o.malformed_constraints.empty()) reason = SuspectedReason::InvalidValues;
      out.push_back({o.id, FlagStage::Numeric, detail.str(), n.worst_discrepancy, reason});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const FlaggedCase& a, const FlaggedCase& b) {
    if (a.discrepancy != b.discrepancy) return a.discrepancy > b.discrepancy;
    if (a.formula_id != b.formula_id) return id_less(a.formula_id, b.formula_id);
    return a.stage < b.stage;
  });
  return out;
}

}  // namespace texcas::report
