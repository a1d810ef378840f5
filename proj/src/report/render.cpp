#include "texcas/report.hpp"

#include "json.hpp"

#include <cstdio>
#include <istream>
#include <sstream>

namespace texcas::report {

using nlohmann::json;

namespace {

std::string percent(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", p);
  return buf;
}

std::string number_cell(const ChapterReport& r) {
  return r.chapter_number > 0 ? std::to_string(r.chapter_number) : "-";
}

template <class E>
std::optional<E> enum_from(std::string_view s, std::initializer_list<E> all) {
  for (auto e : all)
    if (to_string(e) == s) return e;
  return std::nullopt;
}

template <class E>
E require_enum(const json& j, const char* key, std::initializer_list<E> all) {
  const auto s = j.at(key).get<std::string>();
  if (auto e = enum_from(s, all)) return *e;
  throw std::invalid_argument(std::string(key) + ": unknown value '" + s + "'");
}

using symbolic::SymbolicClass;
using numeric::NumericClass;

const std::initializer_list<SymbolicClass> kSymbolic{SymbolicClass::Zero, SymbolicClass::One,
                                                      SymbolicClass::OtherNumeric, SymbolicClass::Unsimplified,
                                                      SymbolicClass::Error};
const std::initializer_list<NumericClass> kNumeric{NumericClass::Verified,        NumericClass::AboveThreshold,
                                                    NumericClass::NoValidValues,   NumericClass::EvaluationError,
                                                    NumericClass::Timeout,         NumericClass::NumericallyUnsupported,
                                                    NumericClass::NonVerifiable};
const std::initializer_list<TranslationStatus> kTranslation{
    TranslationStatus::Translated, TranslationStatus::UnknownMacro, TranslationStatus::InsufficientSemantics,
    TranslationStatus::UnsupportedGrammar};

json flag_json(const FlaggedCase& f) {
  return {{"id", f.formula_id},
          {"stage", to_string(f.stage)},
          {"detail", f.detail},
          {"discrepancy", f.discrepancy},
          {"suspected_reason", to_string(f.suspected_reason)}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::optional<Format> format_from_string(std::string_view s) {
  if (s == "text" || s == "Text") return Format::Text;
  if (s == "csv" || s == "CSV") return Format::CSV;
  if (s == "jsonl" || s == "lines" || s == "StructuredLines") return Format::StructuredLines;
  return std::nullopt;
}

std::string table_row(const ChapterReport& r) {
  std::ostringstream s;
  s << r.chapter_code << ", " << number_cell(r) << ", " << r.F2 << ", " << r.T << " (" << percent(r.t_percent())
    << "), " << r.TVs << " (" << percent(r.tvs_percent()) << "), " << r.TVn << " (" << percent(r.tvn_percent())
    << ")";
  return s.str();
}

std::string outcome_to_json(const FormulaOutcome& o) {
  json j;
  j["id"] = o.id;
  j["chapter"] = o.chapter;
  j["latex"] = o.latex;
  j["translation"] = to_string(o.translation);
  j["translation_detail"] = o.translation_detail;
  j["relation"] = o.relation;
  j["cas"] = o.cas;
  j["unmatched_constraints"] = o.unmatched_constraints;
  j["malformed_constraints"] = o.malformed_constraints;
  if (o.symbolic) {
    const auto& s = *o.symbolic;
    j["symbolic"] = {{"classification", symbolic::to_string(s.classification)},
                     {"value", s.value},
                     {"preprocessor", s.preprocessor},
                     {"mode", s.mode},
                     {"steps", s.steps}};
  } else {
    j["symbolic"] = nullptr;
  }
  if (o.numeric) {
    const auto& n = *o.numeric;
    j["numeric"] = {{"classification", numeric::to_string(n.classification)},
                    {"worst_discrepancy", n.worst_discrepancy},
                    {"worst_assignment", n.worst_assignment},
                    {"detail", n.detail},
                    {"evaluations", n.evaluations},
                    {"skipped", n.skipped},
                    {"branch_sensitive", n.branch_sensitive}};
  } else {
    j["numeric"] = nullptr;
  }
  j["seconds"] = o.seconds;
  Report single;
  single.outcomes = {o};
  json flags = json::array();
  for (const auto& f : list_flagged(single)) flags.push_back(flag_json(f));
  j["flags"] = flags;
  return j.dump();
}

FormulaOutcome outcome_from_json(std::string_view line) {
  const auto j = json::parse(line);
  FormulaOutcome o;
  o.id = j.at("id").get<std::string>();
  o.chapter = j.at("chapter").get<std::string>();
  o.latex = j.at("latex").get<std::string>();
  o.translation = require_enum(j, "translation", kTranslation);
  o.translation_detail = j.at("translation_detail").get<std::string>();
  o.relation = j.at("relation").get<std::string>();
  o.cas = j.at("cas").get<std::string>();
  o.unmatched_constraints = j.at("unmatched_constraints").get<std::vector<std::string>>();
  o.malformed_constraints = j.at("malformed_constraints").get<std::vector<std::string>>();
  if (const auto& s = j.at("symbolic"); !s.is_null()) {
    SymbolicSummary out;
    out.classification = require_enum(s, "classification", kSymbolic);
    out.value = s.at("value").get<std::string>();
    out.preprocessor = s.at("preprocessor").get<std::string>();
    out.mode = s.at("mode").get<std::string>();
    out.steps = s.at("steps").get<int>();
    o.symbolic = out;
  }
  if (const auto& n = j.at("numeric"); !n.is_null()) {
    NumericSummary out;
    out.classification = require_enum(n, "classification", kNumeric);
    out.worst_discrepancy = n.at("worst_discrepancy").get<double>();
    out.worst_assignment = n.at("worst_assignment").get<std::string>();
    out.detail = n.at("detail").get<std::string>();
    out.evaluations = n.at("evaluations").get<int>();
    out.skipped = n.at("skipped").get<int>();
    out.branch_sensitive = n.at("branch_sensitive").get<bool>();
    o.numeric = out;
  }
  o.seconds = j.value("seconds", 0.0);
  return o;
}

std::vector<FormulaOutcome> read_structured_lines(std::istream& in) {
  std::vector<FormulaOutcome> out;
  std::string line;
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(outcome_from_json(line));
  return out;
}

std::string render_report(const Report& report, Format format) {
  std::ostringstream s;
  const auto& cats = failure_categories();
  switch (format) {
    case Format::Text: {
      s << "2C, C#, F2, T, TVs, TVn\n";
      for (const auto& r : report.chapters) s << table_row(r) << '\n';
      s << table_row(report.total) << '\n';
      s << "\nfailures";
      for (const auto& c : cats) s << ", " << c;
      s << '\n';
      auto failure_row = [&](const ChapterReport& r) {
        s << r.chapter_code;
        for (const auto& c : cats) s << ", " << r.failures.at(c);
        s << '\n';
      };
      for (const auto& r : report.chapters) failure_row(r);
      failure_row(report.total);
      break;
    }
    case Format::CSV: {
      s << "chapter_code,chapter_number,F2,T,T_percent,TVs,TVs_percent,TVn,TVn_percent";
      for (const auto& c : cats) s << ',' << c;
      s << '\n';
      auto row = [&](const ChapterReport& r) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s,%s,%d,%d,%.1f,%d,%.1f,%d,%.1f", r.chapter_code.c_str(),
                      r.chapter_number > 0 ? std::to_string(r.chapter_number).c_str() : "", r.F2, r.T,
                      r.t_percent(), r.TVs, r.tvs_percent(), r.TVn, r.tvn_percent());
        s << buf;
        for (const auto& c : cats) s << ',' << r.failures.at(c);
        s << '\n';
      };
      for (const auto& r : report.chapters) row(r);
      row(report.total);
      break;
    }
    case Format::StructuredLines:
      for (const auto& o : report.outcomes) s << outcome_to_json(o) << '\n';
      break;
  }
  return s.str();
}

std::string render_flagged(const std::vector<FlaggedCase>& flagged, Format format) {
  std::ostringstream s;
  switch (format) {
    case Format::Text:
      for (const auto& f : flagged)
        s << f.formula_id << "  " << to_string(f.stage) << "  " << to_string(f.suspected_reason) << "  "
          << f.discrepancy << "  " << f.detail << '\n';
      break;
    case Format::CSV:
      s << "id,stage,suspected_reason,discrepancy,detail\n";
      for (const auto& f : flagged)
        s << csv_field(f.formula_id) << ',' << to_string(f.stage) << ',' << to_string(f.suspected_reason) << ','
          << f.discrepancy << ',' << csv_field(f.detail) << '\n';
      break;
    case Format::StructuredLines:
      for (const auto& f : flagged) s << flag_json(f).dump() << '\n';
      break;
  }
  return s.str();
}

}  // namespace texcas::report
