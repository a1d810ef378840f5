#include "texcas/extraction.hpp"

#include "json.hpp"

#include <fstream>
#include <istream>
#include <ostream>

namespace texcas::extraction {

using nlohmann::json;

std::string record_to_json(const FormulaRecord& r) {
  json j;
  j["id"] = r.id;
  j["chapter_code"] = r.chapter_code;
  j["latex"] = r.latex;
  j["constraints"] = r.constraints;
  j["label"] = r.label ? json(*r.label) : json(nullptr);
  j["source_line"] = r.source_line;
  j["split_origin"] = r.split_origin ? json(*r.split_origin) : json(nullptr);
  return j.dump();
}

FormulaRecord record_from_json(std::string_view line) {
  const auto j = json::parse(line);
  FormulaRecord r;
  r.id = j.at("id").get<std::string>();
  r.chapter_code = j.at("chapter_code").get<std::string>();
  r.latex = j.at("latex").get<std::string>();
  if (j.contains("constraints")) r.constraints = j.at("constraints").get<std::vector<std::string>>();
  if (j.contains("label") && !j.at("label").is_null()) r.label = j.at("label").get<std::string>();
  r.source_line = j.value("source_line", 0);
  if (j.contains("split_origin") && !j.at("split_origin").is_null())
    r.split_origin = j.at("split_origin").get<std::string>();
  if (!find_chapter(r.chapter_code))
    throw ExtractionError(ExtractionError::Kind::UnknownChapterCode, 0,
                          "record " + r.id + ": unknown chapter code '" + r.chapter_code + "'");
  return r;
}

void write_corpus(std::ostream& out, const std::vector<FormulaRecord>& records) {
  for (const auto& r : records) out << record_to_json(r) << '\n';
}

std::vector<FormulaRecord> read_corpus(std::istream& in) {
  std::vector<FormulaRecord> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(line));
    } catch (const json::exception& e) {
      throw std::runtime_error("corpus line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::vector<FormulaRecord> read_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus " + path);
  return read_corpus(in);
}

}  // namespace texcas::extraction
