#pragma once

// Lenient lexer used by the extraction scans. Unlike the parser's tokenizer it
// accepts any byte and keeps whitespace, so raw chapter text survives a
// lex/concatenate round trip unchanged.

#include <string>
#include <string_view>
#include <vector>

namespace texcas::extraction::detail {

struct Lexeme {
  std::string text;
  bool space = false;

  bool control_word() const { return text.size() > 1 && text[0] == '\\' && is_letter(text[1]); }
  static bool is_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
};

std::vector<Lexeme> lex(std::string_view s);
std::string join(const std::vector<Lexeme>& lexemes);

// Appends `piece` to `out`, inserting a space when a control word would
// otherwise run into a following letter.
void append_guarded(std::string& out, std::string_view piece);

// Index one past the brace group opening at `open`, or npos when unbalanced.
std::size_t match_brace(std::string_view s, std::size_t open);

}  // namespace texcas::extraction::detail
