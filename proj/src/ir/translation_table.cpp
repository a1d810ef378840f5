#include "texcas/ir/functions.hpp"
#include "texcas/ir/translate.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace texcas::ir {

const std::vector<std::string>& known_rewrites() {
  static const std::vector<std::string> list = {
      "function", "function_opt0", "params_as_args", "constant", "power_of_e", "sqrt", "fraction",
      "genhyper", "deriv", "wronskian", "sum", "prod", "int", "lim", "antider", "set",
      "unsupported_grammar"};
  return list;
}

void TranslationTable::add(TranslationEntry e) {
  if (entries_.contains(e.meaning_id))
    throw std::runtime_error("translation table: duplicate entry " + e.meaning_id);
  auto key = e.meaning_id;
  entries_.emplace(std::move(key), std::move(e));
}

const TranslationEntry* TranslationTable::find(std::string_view meaning_id) const {
  auto it = entries_.find(meaning_id);
  return it == entries_.end() ? nullptr : &it->second;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

TranslationTable load_translation_table(std::istream& in) {
  TranslationTable table;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(t);
    for (std::string part; std::getline(ss, part, '|');) f.push_back(trim(part));
    auto fail = [&](const std::string& why) {
      return std::runtime_error("translation table line " + std::to_string(n) + ": " + why);
    };
    if (f.size() < 4 || f.size() > 5) throw fail("expected 4 or 5 '|'-separated fields");
    TranslationEntry e{f[0], f[1], f[2] == "yes", f[3], f.size() == 5 ? f[4] : ""};
    if (f[2] != "yes" && f[2] != "no") throw fail("numeric flag must be yes or no");
    const auto& rw = known_rewrites();
    if (std::find(rw.begin(), rw.end(), e.rewrite) == rw.end()) throw fail("unknown rewrite " + e.rewrite);
    const bool needs_function = e.rewrite == "function" || e.rewrite == "function_opt0" ||
                                e.rewrite == "params_as_args" || e.rewrite == "genhyper";
    if (needs_function && !find_function(e.ir_id)) throw fail("unknown IR function " + e.ir_id);
    if (e.rewrite == "constant" && e.ir_id != "Pi" && e.ir_id != "EulerE" && e.ir_id != "ImaginaryUnit" &&
        e.ir_id != "EulerGamma" && e.ir_id != "Infinity")
      throw fail("unknown constant " + e.ir_id);
    table.add(std::move(e));
  }
  return table;
}

TranslationTable load_translation_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open translation table " + path);
  return load_translation_table(in);
}

TranslationError::TranslationError(Kind kind, std::string detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind), detail_(std::move(detail)) {}

std::string_view to_string(TranslationError::Kind k) {
  switch (k) {
    case TranslationError::Kind::UnknownMacro: return "UnknownMacro";
    case TranslationError::Kind::InsufficientSemantics: return "InsufficientSemantics";
    case TranslationError::Kind::UnsupportedGrammar: return "UnsupportedGrammar";
  }
  return "?";
}

}  // namespace texcas::ir
