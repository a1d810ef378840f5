#pragma once

// Parse tree -> IR translation driven by the translation table.

#include "texcas/ir/expr.hpp"
#include "texcas/parser.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace texcas::ir {

struct TranslationEntry {
  std::string meaning_id;
  std::string ir_id;  // "-" for structural rewrites
  bool numeric = true;
  std::string rewrite;
  std::string notes;
};

class TranslationTable {
public:
  void add(TranslationEntry e);
  const TranslationEntry* find(std::string_view meaning_id) const;
  const std::map<std::string, TranslationEntry, std::less<>>& entries() const { return entries_; }

private:
  std::map<std::string, TranslationEntry, std::less<>> entries_;
};

// Lines `meaning | ir id | yes/no | rewrite | notes`; `#` comments.
TranslationTable load_translation_table(std::istream& in);
TranslationTable load_translation_table_file(const std::string& path);

// Rewrite ids understood by the translator.
const std::vector<std::string>& known_rewrites();

class TranslationError : public std::runtime_error {
public:
  enum class Kind { UnknownMacro, InsufficientSemantics, UnsupportedGrammar };
  TranslationError(Kind kind, std::string detail);
  Kind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

private:
  Kind kind_;
  std::string detail_;
};

std::string_view to_string(TranslationError::Kind k);

Relation to_relation(const parser::ParseTree& tree, const TranslationTable& table);
Expr to_expr(const parser::ParseTree& tree, const TranslationTable& table);

// Variable naming shared with constraint handling: a letter or a Greek
// control word names a variable (`\alpha` gives "alpha") and a subscript
// decorates it (`a_{n+1}` gives "a_np1").
std::optional<std::string> variable_base_name(const parser::Token& t);
std::string subscript_suffix(const std::vector<parser::Token>& sub);

// Tokenize, parse and translate; parser errors surface as UnsupportedGrammar.
Relation translate_latex(std::string_view latex, const parser::MacroTable& macros, const TranslationTable& table);

}  // namespace texcas::ir
