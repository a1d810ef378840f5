#include "texcas/parser.hpp"

#include <fstream>
#include <istream>
#include <sstream>

namespace texcas::parser {

MacroTableError::MacroTableError(Kind kind, int line, const std::string& what)
    : std::runtime_error(what), kind_(kind), line_(line) {}

void MacroTable::add(SemanticMacroDef def, int line) {
  if (defs_.contains(def.name))
    throw MacroTableError(MacroTableError::Kind::DuplicateMacroName, line,
                          "duplicate macro name " + def.name);
  if (meaning_to_name_.contains(def.meaning_id))
    throw MacroTableError(MacroTableError::Kind::DuplicateMeaningId, line,
                          "duplicate meaning id " + def.meaning_id);
  meaning_to_name_.emplace(def.meaning_id, def.name);
  auto name = def.name;
  defs_.emplace(std::move(name), std::move(def));
}

const SemanticMacroDef* MacroTable::find(std::string_view name) const {
  auto it = defs_.find(name);
  return it == defs_.end() ? nullptr : &it->second;
}

namespace {

int parse_count(const std::string& field, int line) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(field, &used);
    if (used != field.size() || v < 0) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw MacroTableError(MacroTableError::Kind::MalformedEntry, line,
                          "line " + std::to_string(line) + ": bad count '" + field + "'");
  }
}

}  // namespace

MacroTable load_macro_table(std::istream& in) {
  MacroTable table;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream fields(raw);
    std::vector<std::string> f;
    for (std::string w; fields >> w;) f.push_back(w);
    if (f.empty()) continue;
    auto malformed = [&](const std::string& why) {
      return MacroTableError(MacroTableError::Kind::MalformedEntry, line,
                             "line " + std::to_string(line) + ": " + why);
    };
    if (f.size() < 6 || f.size() > 7) throw malformed("expected 6 or 7 fields");
    SemanticMacroDef def;
    def.name = f[0];
    if (def.name.size() < 2 || def.name[0] != '\\') throw malformed("name must be a control sequence");
    def.num_optional_params = parse_count(f[1], line);
    def.num_params = parse_count(f[2], line);
    def.num_args = parse_count(f[3], line);
    if (f[4] == "-")
      def.at_arity = AtArity::None;
    else if (f[4] == "@")
      def.at_arity = AtArity::Single;
    else if (f[4] == "@@")
      def.at_arity = AtArity::Double;
    else
      throw malformed("at-arity must be -, @ or @@");
    if ((def.num_args > 0) != (def.at_arity != AtArity::None))
      throw malformed("arguments and @-arity disagree for " + def.name);
    def.meaning_id = f[5];
    if (f.size() == 7 && f[6] != "-") def.dlmf_ref = f[6];
    table.add(std::move(def), line);
  }
  return table;
}

MacroTable load_macro_table_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_macro_table(in);
}

MacroTable load_macro_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open macro table " + path);
  return load_macro_table(in);
}

}  // namespace texcas::parser
