#include "lexemes.hpp"

namespace texcas::extraction::detail {

std::vector<Lexeme> lex(std::string_view s) {
  std::vector<Lexeme> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      std::size_t j = i;
      while (j < s.size() && (s[j] == ' ' || s[j] == '\t' || s[j] == '\n' || s[j] == '\r')) ++j;
      out.push_back({std::string(s.substr(i, j - i)), true});
      i = j;
    } else if (c == '\\' && i + 1 < s.size()) {
      std::size_t j = i + 1;
      if (Lexeme::is_letter(s[j]))
        while (j < s.size() && Lexeme::is_letter(s[j])) ++j;
      else
        ++j;
      out.push_back({std::string(s.substr(i, j - i)), false});
      i = j;
    } else {
      out.push_back({std::string(1, c), false});
      ++i;
    }
  }
  return out;
}

std::string join(const std::vector<Lexeme>& lexemes) {
  std::string out;
  for (const auto& l : lexemes) out += l.text;
  return out;
}

namespace {

bool ends_with_control_word(std::string_view s) {
  std::size_t k = s.size();
  while (k > 0 && Lexeme::is_letter(s[k - 1])) --k;
  if (k == s.size() || k == 0 || s[k - 1] != '\\') return false;
  // an escaped backslash (\\word) is a line break followed by letters
  std::size_t slashes = 0;
  for (std::size_t m = k; m > 0 && s[m - 1] == '\\'; --m) ++slashes;
  return slashes % 2 == 1;
}

}  // namespace

void append_guarded(std::string& out, std::string_view piece) {
  if (!piece.empty() && Lexeme::is_letter(piece.front()) && ends_with_control_word(out)) out += ' ';
  out += piece;
}

std::size_t match_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '\\') {
      ++i;
      continue;
    }
    if (c == '{') ++depth;
    if (c == '}' && --depth == 0) return i + 1;
  }
  return std::string_view::npos;
}

}  // namespace texcas::extraction::detail
