#pragma once

// Tokenizer, semantic-macro table and part-of-math style parse trees for
// single-line semantic LaTeX strings.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace texcas::parser {

enum class TokenCategory {
  Letter,
  Digit,
  Operator,
  Relation,
  ControlSequence,
  GroupOpen,
  GroupClose,
  Subscript,
  Superscript,
  ArgSeparatorAt,
  Comma,
  Other
};

std::string_view to_string(TokenCategory c);

struct Token {
  std::string text;
  TokenCategory category = TokenCategory::Other;
  std::size_t byte_offset = 0;

  bool is(TokenCategory c, std::string_view t) const { return category == c && text == t; }
};

// Structural token equality; offsets are ignored.
bool same_token(const Token& a, const Token& b);

class ParseError : public std::runtime_error {
public:
  enum class Kind { UnbalancedBraces, IllegalCharacter, ArityMismatch, StrayArgSeparator };
  ParseError(Kind kind, std::size_t offset, const std::string& what);
  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

private:
  Kind kind_;
  std::size_t offset_;
};

std::vector<Token> tokenize(std::string_view input);

// Renders tokens back to a compact single-line string. A space is inserted
// only where TeX needs one (a control word followed by a letter).
std::string render_tokens(const std::vector<Token>& tokens);

// Control sequences that act as relations at the token level.
bool is_relation_command(std::string_view cs);

enum class AtArity { None, Single, Double };

struct SemanticMacroDef {
  std::string name;  // including the leading backslash
  int num_optional_params = 0;
  int num_params = 0;
  int num_args = 0;
  AtArity at_arity = AtArity::None;
  std::string meaning_id;
  std::optional<std::string> dlmf_ref;
};

class MacroTableError : public std::runtime_error {
public:
  enum class Kind { DuplicateMacroName, DuplicateMeaningId, MalformedEntry };
  MacroTableError(Kind kind, int line, const std::string& what);
  Kind kind() const { return kind_; }
  int line() const { return line_; }

private:
  Kind kind_;
  int line_;
};

class MacroTable {
public:
  MacroTable() = default;

  // Throws MacroTableError on duplicate names or meaning ids.
  void add(SemanticMacroDef def, int line = 0);
  const SemanticMacroDef* find(std::string_view name) const;
  std::size_t size() const { return defs_.size(); }
  const std::map<std::string, SemanticMacroDef, std::less<>>& entries() const { return defs_; }

private:
  std::map<std::string, SemanticMacroDef, std::less<>> defs_;
  std::map<std::string, std::string, std::less<>> meaning_to_name_;
};

// One macro per line: name opt params args at meaning [dlmf-ref]
// where at is one of `-`, `@`, `@@` and `#` starts a comment.
MacroTable load_macro_table(std::istream& in);
MacroTable load_macro_table_text(std::string_view text);
MacroTable load_macro_table_file(const std::string& path);

struct ParseNode;
using ParseTree = std::shared_ptr<const ParseNode>;

struct ParseNode {
  enum class Kind { Leaf, Group, MacroApp, SubSup, Row };

  Kind kind = Kind::Row;
  std::optional<Token> token;  // Leaf; the macro's own token for MacroApp
  bool unresolved = false;     // Leaf control sequence absent from the macro table
  std::string macro;           // MacroApp meaning id
  AtArity at_used = AtArity::None;
  std::vector<ParseTree> optional_params;
  std::vector<ParseTree> params;
  std::vector<ParseTree> args;
  ParseTree base;  // SubSup
  ParseTree sub;   // SubSup
  ParseTree sup;   // SubSup, or a power written between a macro's params and `@`
  std::vector<ParseTree> children;  // Row and Group
};

ParseTree parse(const std::vector<Token>& tokens, const MacroTable& table);
ParseTree parse_latex(std::string_view latex, const MacroTable& table);

std::string render_latex(const ParseTree& tree);
bool structurally_equal(const ParseTree& a, const ParseTree& b);

// In-order leaf tokens, including structural tokens (braces, @, scripts),
// i.e. the token stream the tree was built from.
std::vector<Token> flatten_tokens(const ParseTree& tree);

}  // namespace texcas::parser
