#pragma once

// Formula harvesting from chapter sources: the first scan collects formula
// environments with their metadata, the second scan culls, expands and
// splits them into single-relation records.

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace texcas::extraction {

struct ChapterInfo {
  std::string code;
  int number = 0;
  std::string name;
};

// The 36 DLMF chapters in chapter order.
const std::vector<ChapterInfo>& chapters();
const ChapterInfo* find_chapter(std::string_view code);

struct FormulaRecord {
  std::string id;
  std::string chapter_code;
  std::string latex;
  std::vector<std::string> constraints;
  std::optional<std::string> label;
  int source_line = 0;
  std::optional<std::string> split_origin;

  bool operator==(const FormulaRecord&) const = default;
};

struct PreambleMacro {
  std::string command;  // e.g. "\etpipm"
  int num_args = 0;
  std::string replacement;  // body with #1..#9 placeholders
};

struct ChapterSource {
  std::string chapter_code;
  std::string body;
  std::vector<PreambleMacro> preamble_macros;
};

class ExtractionError : public std::runtime_error {
public:
  enum class Kind { UnclosedEnvironment, MalformedConstraintEnvironment, UnknownChapterCode };
  ExtractionError(Kind kind, int line, const std::string& what);
  Kind kind() const { return kind_; }
  int line() const { return line_; }

private:
  Kind kind_;
  int line_;
};

struct SubstitutionRule {
  std::vector<std::string> chapters;  // empty means every chapter
  std::string pattern;
  std::string replacement;

  bool applies_to(std::string_view chapter) const;
};

struct SubstitutionConfig {
  std::vector<SubstitutionRule> rules;
};

// Lines of the form `AI,CH | \gamma | \EulerConstant`; `*` selects all
// chapters and `#` starts a comment line.
SubstitutionConfig load_substitutions(std::istream& in);
SubstitutionConfig load_substitutions_text(std::string_view text);
SubstitutionConfig load_substitutions_file(const std::string& path);

// Builds a chapter source from a raw .tex file, collecting \newcommand,
// \renewcommand and \def replacement macros.
ChapterSource make_chapter_source(std::string chapter_code, std::string tex);

// Applies the substitution rules of one chapter at lexeme level.
std::string apply_substitutions(std::string_view latex, std::string_view chapter,
                                const SubstitutionConfig& subst);

// Canonical single-line rendering of a formula string.
std::string normalize_latex(std::string_view latex);

std::vector<FormulaRecord> scan_first(const ChapterSource& source, const SubstitutionConfig& subst);

using PreambleMap = std::map<std::string, std::vector<PreambleMacro>>;

// Preamble macros with the chapter substitutions applied to their bodies.
std::vector<PreambleMacro> substituted_preamble(const ChapterSource& source,
                                                const SubstitutionConfig& subst);

std::string expand_preamble_macros(std::string_view latex, const std::vector<PreambleMacro>& macros);

bool is_culled(std::string_view latex);
bool has_relation(std::string_view latex);

std::vector<FormulaRecord> split_relations(const FormulaRecord& record);
std::vector<FormulaRecord> split_plus_minus(const FormulaRecord& record);

std::vector<FormulaRecord> scan_second(const std::vector<FormulaRecord>& records,
                                       const PreambleMap& preamble = {});

// Both scans for one chapter.
std::vector<FormulaRecord> extract_chapter(const ChapterSource& source, const SubstitutionConfig& subst);

// Commands removed by the first scan; no output string contains them.
const std::vector<std::string>& stripped_commands();

// JSON lines, one record per line.
void write_corpus(std::ostream& out, const std::vector<FormulaRecord>& records);
std::vector<FormulaRecord> read_corpus(std::istream& in);
std::vector<FormulaRecord> read_corpus_file(const std::string& path);
std::string record_to_json(const FormulaRecord& r);
FormulaRecord record_from_json(std::string_view line);

}  // namespace texcas::extraction
