#include "texcas/parser.hpp"

#include <array>
#include <cctype>

namespace texcas::parser {

namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

constexpr std::array kRelationCommands{
    "\\ne", "\\neq", "\\le", "\\leq", "\\ge", "\\geq", "\\to", "\\equiv", "\\in",
    "\\notin", "\\lt", "\\gt", "\\leqslant", "\\geqslant", "\\sim", "\\asymp", "\\approx"};

constexpr std::array kOperatorCommands{"\\pm", "\\mp", "\\cdot", "\\times"};

TokenCategory classify_control_sequence(std::string_view cs) {
  for (auto r : kRelationCommands)
    if (cs == r) return TokenCategory::Relation;
  for (auto o : kOperatorCommands)
    if (cs == o) return TokenCategory::Operator;
  return TokenCategory::ControlSequence;
}

}  // namespace

std::string_view to_string(TokenCategory c) {
  switch (c) {
    case TokenCategory::Letter: return "Letter";
    case TokenCategory::Digit: return "Digit";
    case TokenCategory::Operator: return "Operator";
    case TokenCategory::Relation: return "Relation";
    case TokenCategory::ControlSequence: return "ControlSequence";
    case TokenCategory::GroupOpen: return "GroupOpen";
    case TokenCategory::GroupClose: return "GroupClose";
    case TokenCategory::Subscript: return "Subscript";
    case TokenCategory::Superscript: return "Superscript";
    case TokenCategory::ArgSeparatorAt: return "ArgSeparatorAt";
    case TokenCategory::Comma: return "Comma";
    case TokenCategory::Other: return "Other";
  }
  return "?";
}

bool same_token(const Token& a, const Token& b) {
  return a.category == b.category && a.text == b.text;
}

bool is_relation_command(std::string_view cs) {
  for (auto r : kRelationCommands)
    if (cs == r) return true;
  return false;
}

ParseError::ParseError(Kind kind, std::size_t offset, const std::string& what)
    : std::runtime_error(what), kind_(kind), offset_(offset) {}

std::vector<Token> tokenize(std::string_view input) {
  std::vector<Token> out;
  int depth = 0;
  std::size_t i = 0;
  const std::size_t n = input.size();

  auto push = [&](std::size_t start, std::size_t len, TokenCategory cat) {
    out.push_back(Token{std::string(input.substr(start, len)), cat, start});
  };

  while (i < n) {
    const char c = input[i];
    const auto uc = static_cast<unsigned char>(c);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if (uc >= 0x80 || uc < 0x20 || c == '%' || c == '#' || c == '$' || c == 0x7f) {
      throw ParseError(ParseError::Kind::IllegalCharacter, i,
                       "illegal character at byte " + std::to_string(i));
    }
    if (c == '\\') {
      if (i + 1 >= n)
        throw ParseError(ParseError::Kind::IllegalCharacter, i, "dangling backslash");
      std::size_t j = i + 1;
      if (is_alpha(input[j])) {
        while (j < n && is_alpha(input[j])) ++j;
      } else {
        const auto next = static_cast<unsigned char>(input[j]);
        if (next >= 0x80 || next < 0x20)
          throw ParseError(ParseError::Kind::IllegalCharacter, j,
                           "illegal character at byte " + std::to_string(j));
        ++j;
      }
      const auto text = input.substr(i, j - i);
      push(i, j - i, classify_control_sequence(text));
      i = j;
      continue;
    }
    if (is_alpha(c)) {
      push(i, 1, TokenCategory::Letter);
      ++i;
      continue;
    }
    if (is_digit(c)) {
      std::size_t j = i;
      while (j < n && is_digit(input[j])) ++j;
      if (j + 1 < n && input[j] == '.' && is_digit(input[j + 1])) {
        ++j;
        while (j < n && is_digit(input[j])) ++j;
      }
      push(i, j - i, TokenCategory::Digit);
      i = j;
      continue;
    }
    switch (c) {
      case '{':
        ++depth;
        push(i, 1, TokenCategory::GroupOpen);
        break;
      case '}':
        if (--depth < 0)
          throw ParseError(ParseError::Kind::UnbalancedBraces, i, "unexpected '}'");
        push(i, 1, TokenCategory::GroupClose);
        break;
      case '_': push(i, 1, TokenCategory::Subscript); break;
      case '^': push(i, 1, TokenCategory::Superscript); break;
      case ',': push(i, 1, TokenCategory::Comma); break;
      case '=':
      case '<':
      case '>': push(i, 1, TokenCategory::Relation); break;
      case '+':
      case '-':
      case '*':
      case '/':
      case '!': push(i, 1, TokenCategory::Operator); break;
      case '@': {
        std::size_t j = i;
        while (j < n && input[j] == '@') ++j;
        if (j - i > 2)
          throw ParseError(ParseError::Kind::IllegalCharacter, i, "more than two '@' in a row");
        push(i, j - i, TokenCategory::ArgSeparatorAt);
        i = j;
        continue;
      }
      default: push(i, 1, TokenCategory::Other); break;
    }
    ++i;
  }
  if (depth != 0)
    throw ParseError(ParseError::Kind::UnbalancedBraces, n, "unclosed '{'");
  return out;
}

std::string render_tokens(const std::vector<Token>& tokens) {
  std::string out;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const auto& t = tokens[k];
    if (k > 0) {
      const auto& prev = tokens[k - 1];
      const bool prev_word = prev.text.size() > 1 && prev.text[0] == '\\' && is_alpha(prev.text[1]);
      if (prev_word && !t.text.empty() && is_alpha(t.text[0])) out += ' ';
      if (prev.category == TokenCategory::Digit && t.category == TokenCategory::Digit) out += ' ';
    }
    out += t.text;
  }
  return out;
}

}  // namespace texcas::parser
