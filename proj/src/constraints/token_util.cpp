#include "token_util.hpp"

#include "texcas/ir/translate.hpp"

#include <regex>

namespace texcas::constraints::detail {

using parser::TokenCategory;

std::optional<VariableRead> read_variable(const Tokens& t, std::size_t i) {
  if (i >= t.size()) return std::nullopt;
  auto base = ir::variable_base_name(t[i]);
  if (!base) return std::nullopt;
  std::size_t j = i + 1;
  if (j >= t.size() || t[j].category != TokenCategory::Subscript) return VariableRead{*base, j};
  ++j;
  if (j >= t.size()) return std::nullopt;
  std::string suffix;
  if (t[j].category == TokenCategory::GroupOpen) {
    int depth = 0;
    std::size_t k = j;
    for (; k < t.size(); ++k) {
      if (t[k].category == TokenCategory::GroupOpen) ++depth;
      if (t[k].category == TokenCategory::GroupClose && --depth == 0) break;
    }
    if (k >= t.size()) return std::nullopt;
    suffix = ir::subscript_suffix(Tokens(t.begin() + static_cast<std::ptrdiff_t>(j) + 1,
                                         t.begin() + static_cast<std::ptrdiff_t>(k)));
    j = k + 1;
  } else if (t[j].category == TokenCategory::Letter ||
             (t[j].category == TokenCategory::Digit && t[j].text.size() == 1) || ir::variable_base_name(t[j])) {
    suffix = ir::subscript_suffix({t[j]});
    ++j;
  } else {
    return std::nullopt;
  }
  if (suffix.empty()) return std::nullopt;
  return VariableRead{*base + "_" + suffix, j};
}

std::optional<std::string> variable_in(const Tokens& t, std::size_t b, std::size_t e) {
  auto v = read_variable(t, b);
  if (!v || v->next != e) return std::nullopt;
  return v->name;
}

std::optional<Rational> parse_rational(std::string_view text) {
  static const std::regex re(R"(\s*([+-]?)(\d+(?:\.\d*)?|\.\d+)(?:/(\d+))?\s*)");
  std::cmatch m;
  if (!std::regex_match(text.begin(), text.end(), m, re)) return std::nullopt;
  const std::string digits = m[2].str();
  const auto dot = digits.find('.');
  ir::BigInt num = 0, den = 1;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (k == dot) continue;
    num = num * 10 + (digits[k] - '0');
    if (dot != std::string::npos && k > dot) den *= 10;
  }
  if (m[3].matched) {
    const ir::BigInt q(m[3].str());
    if (q == 0) return std::nullopt;
    den *= q;
  }
  Rational r(num, den);
  if (m[1].str() == "-") r = -r;
  return r;
}

std::optional<Rational> literal_in(const Tokens& t, std::size_t b, std::size_t e) {
  if (b >= e) return std::nullopt;
  Rational sign = 1;
  if (t[b].is(TokenCategory::Operator, "-") || t[b].is(TokenCategory::Operator, "+")) {
    if (t[b].text == "-") sign = -1;
    ++b;
  }
  if (b + 1 == e && t[b].category == TokenCategory::Digit) {
    auto v = parse_rational(t[b].text);
    if (!v) return std::nullopt;
    return sign * *v;
  }
  // \frac{p}{q} with digit numerator and denominator
  const bool frac = t[b].category == TokenCategory::ControlSequence &&
                    (t[b].text == "\\frac" || t[b].text == "\\tfrac" || t[b].text == "\\dfrac");
  if (frac && e - b == 7 && t[b + 1].category == TokenCategory::GroupOpen && t[b + 2].category == TokenCategory::Digit &&
      t[b + 3].category == TokenCategory::GroupClose && t[b + 4].category == TokenCategory::GroupOpen &&
      t[b + 5].category == TokenCategory::Digit && t[b + 6].category == TokenCategory::GroupClose) {
    auto p = parse_rational(t[b + 2].text);
    auto q = parse_rational(t[b + 5].text);
    if (!p || !q || *q == 0) return std::nullopt;
    return sign * *p / *q;
  }
  return std::nullopt;
}

bool is_dots(const parser::Token& t) {
  return t.category == TokenCategory::ControlSequence &&
         (t.text == "\\dots" || t.text == "\\ldots" || t.text == "\\cdots" || t.text == "\\dotsc");
}

}  // namespace texcas::constraints::detail
