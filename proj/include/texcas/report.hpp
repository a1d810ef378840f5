#pragma once

// Pipeline orchestration: translation, symbolic and numeric verification of
// a formula corpus, per-chapter statistics and flagged cases.

#include "texcas/constraints.hpp"
#include "texcas/extraction.hpp"
#include "texcas/ir/translate.hpp"
#include "texcas/numeric.hpp"
#include "texcas/parser.hpp"
#include "texcas/symbolic.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace texcas::report {

class PipelineError : public std::runtime_error {
public:
  enum class Kind { MissingInputFile, ConfigParseError };
  PipelineError(Kind kind, const std::string& what);
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

std::string_view to_string(PipelineError::Kind k);

enum class VerifyStages { Symbolic, Numeric, Both };

struct PipelineConfig {
  std::string corpus;
  std::string macro_table;
  std::string translation_table;
  std::string blueprints;
  std::string rewrite_rules;
  std::optional<std::string> chapter;  // two-letter code filter
  VerifyStages stages = VerifyStages::Both;
  symbolic::SimplifyConfig symbolic;
  numeric::NumericConfig numeric;
  int jobs = 1;
};

// Defaults with the bundled data files from `data_dir`.
PipelineConfig default_config(const std::string& data_dir);

// INI text with sections [paths], [verify], [symbolic] and [numeric].
// Relative paths resolve against `base_dir`. Throws ConfigParseError.
PipelineConfig load_config(std::istream& in, const std::string& base_dir, PipelineConfig defaults);
PipelineConfig load_config_file(const std::string& path, PipelineConfig defaults);

enum class TranslationStatus { Translated, UnknownMacro, InsufficientSemantics, UnsupportedGrammar };
std::string_view to_string(TranslationStatus s);

enum class FlagStage { Symbolic, Numeric, Constraint };
std::string_view to_string(FlagStage s);

// Reasons a verification may fail: invalid test values, a wrong
// translation, an error in the source, or an engine (branch cut) problem.
enum class SuspectedReason { InvalidValues, TranslationError, SourceError, EngineError };
std::string_view to_string(SuspectedReason r);

struct FlaggedCase {
  std::string formula_id;
  FlagStage stage = FlagStage::Numeric;
  std::string detail;
  double discrepancy = 0;
  SuspectedReason suspected_reason = SuspectedReason::SourceError;

  bool operator==(const FlaggedCase&) const = default;
};

struct SymbolicSummary {
  symbolic::SymbolicClass classification = symbolic::SymbolicClass::Unsimplified;
  std::string value;  // OtherNumeric value or error kind
  std::string preprocessor;
  std::string mode;
  int steps = 0;

  bool operator==(const SymbolicSummary&) const = default;
};

struct NumericSummary {
  numeric::NumericClass classification = numeric::NumericClass::NoValidValues;
  double worst_discrepancy = 0;
  std::string worst_assignment;
  std::string detail;
  int evaluations = 0;
  int skipped = 0;
  bool branch_sensitive = false;

  bool operator==(const NumericSummary&) const = default;
};

struct FormulaOutcome {
  std::string id;
  std::string chapter;
  std::string latex;
  TranslationStatus translation = TranslationStatus::Translated;
  std::string translation_detail;
  std::string relation;  // generic infix
  std::string cas;       // Maple syntax
  std::vector<std::string> unmatched_constraints;
  std::vector<std::string> malformed_constraints;
  std::optional<SymbolicSummary> symbolic;
  std::optional<NumericSummary> numeric;
  double seconds = 0;

  bool symbolically_verified() const;
  bool numerically_verified() const;
  bool operator==(const FormulaOutcome& o) const;
};

// Failure categories counted per chapter.
inline const std::vector<std::string>& failure_categories() {
  static const std::vector<std::string> c = {"UnknownMacro",   "InsufficientSemantics", "UnsupportedGrammar",
                                             "AboveThreshold", "NoValidValues",         "Timeout",
                                             "NumericallyUnsupported"};
  return c;
}

struct ChapterReport {
  std::string chapter_code;
  int chapter_number = 0;
  int F2 = 0;
  int T = 0;
  int TVs = 0;
  int TVn = 0;
  std::map<std::string, int> failures;

  // T of F2, TVs of F2 and TVn of (F2 - TVs), as in the published table.
  double t_percent() const;
  double tvs_percent() const;
  double tvn_percent() const;
  bool operator==(const ChapterReport&) const = default;
};

struct Report {
  std::vector<ChapterReport> chapters;  // chapter order
  ChapterReport total;                  // code "Σ"
  std::vector<FormulaOutcome> outcomes;  // sorted by id
};

// Verification of one second-scan record.
struct Resources {
  parser::MacroTable macros;
  ir::TranslationTable translations;
  std::vector<constraints::ConstraintBlueprint> blueprints;
  symbolic::RuleTable rules;
};

Resources load_resources(const PipelineConfig& config);

FormulaOutcome process_formula(const extraction::FormulaRecord& record, const Resources& res,
                               const PipelineConfig& config);

// Deterministic fold over outcomes; independent of their order.
Report aggregate(std::vector<FormulaOutcome> outcomes);

// Applies the second scan (idempotent on second-scan input), filters by
// chapter and verifies every record on `config.jobs` worker threads.
Report run_pipeline(const std::vector<extraction::FormulaRecord>& records, const Resources& res,
                    const PipelineConfig& config);
Report run_pipeline(const PipelineConfig& config);

std::vector<FlaggedCase> list_flagged(const Report& report);

enum class Format { Text, CSV, StructuredLines };
std::optional<Format> format_from_string(std::string_view s);

// `EF, 4, 466, 406 (87.1%), 182 (39.1%), 61 (21.5%)`
std::string table_row(const ChapterReport& r);

std::string render_report(const Report& report, Format format);
std::string render_flagged(const std::vector<FlaggedCase>& flagged, Format format);

// One JSON object per line, as written by StructuredLines.
std::string outcome_to_json(const FormulaOutcome& o);
FormulaOutcome outcome_from_json(std::string_view line);
std::vector<FormulaOutcome> read_structured_lines(std::istream& in);

}  // namespace texcas::report
