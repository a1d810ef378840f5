#include "texcas/constraints.hpp"
#include "token_util.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace texcas::constraints {

using parser::TokenCategory;

ConstraintError::ConstraintError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

std::string_view to_string(ConstraintError::Kind k) {
  switch (k) {
    case ConstraintError::Kind::MalformedRule: return "MalformedRule";
    case ConstraintError::Kind::PlaceholderValueCountMismatch: return "PlaceholderValueCountMismatch";
    case ConstraintError::Kind::InconsistentProgression: return "InconsistentProgression";
    case ConstraintError::Kind::UnknownSetSymbol: return "UnknownSetSymbol";
    case ConstraintError::Kind::MalformedSetNotation: return "MalformedSetNotation";
  }
  return "?";
}

namespace {

bool adjacent(const parser::Token& a, const parser::Token& b) {
  return a.byte_offset + a.text.size() == b.byte_offset;
}

bool letter(const parser::Token& t, char c) {
  return t.category == TokenCategory::Letter && t.text.size() == 1 && t.text[0] == c;
}

// Folds the letter runs `v a r` (plus an adjacent digit index) into placeholders.
std::vector<PatternToken> fold_placeholders(const std::vector<parser::Token>& toks) {
  std::vector<PatternToken> out;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const bool var = i + 2 < toks.size() && letter(toks[i], 'v') && letter(toks[i + 1], 'a') &&
                     letter(toks[i + 2], 'r') && adjacent(toks[i], toks[i + 1]) && adjacent(toks[i + 1], toks[i + 2]);
    if (!var) {
      out.push_back({toks[i], std::nullopt});
      continue;
    }
    std::string name = "var";
    std::size_t last = i + 2;
    if (last + 1 < toks.size() && adjacent(toks[last], toks[last + 1]) &&
        toks[last + 1].category == TokenCategory::Letter)
      throw ConstraintError(ConstraintError::Kind::MalformedRule, "placeholder runs into a letter");
    if (last + 1 < toks.size() && adjacent(toks[last], toks[last + 1]) &&
        toks[last + 1].category == TokenCategory::Digit) {
      const auto& idx = toks[last + 1].text;
      if (!std::all_of(idx.begin(), idx.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw ConstraintError(ConstraintError::Kind::MalformedRule, "bad placeholder index " + idx);
      name += idx;
      ++last;
    }
    parser::Token tok{name, TokenCategory::Letter, toks[i].byte_offset};
    out.push_back({tok, name});
    i = last;
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

ConstraintBlueprint parse_rule(const std::string& line, int number) {
  using Kind = ConstraintError::Kind;
  const auto where = "rule on line " + std::to_string(number) + ": ";
  const auto arrow = line.find("==>");
  if (arrow == std::string::npos || line.find("==>", arrow + 3) != std::string::npos)
    throw ConstraintError(Kind::MalformedRule, where + "expected exactly one '==>'");
  ConstraintBlueprint bp;
  bp.id = "rule" + std::to_string(number);
  bp.source = trim(line);
  std::vector<parser::Token> toks;
  try {
    toks = parser::tokenize(line.substr(0, arrow));
  } catch (const parser::ParseError& e) {
    throw ConstraintError(Kind::MalformedRule, where + e.what());
  }
  bp.pattern = fold_placeholders(toks);
  for (const auto& p : bp.pattern)
    if (p.placeholder && std::find(bp.placeholders.begin(), bp.placeholders.end(), *p.placeholder) == bp.placeholders.end())
      bp.placeholders.push_back(*p.placeholder);
  if (bp.placeholders.empty()) throw ConstraintError(Kind::MalformedRule, where + "pattern has no placeholder");

  std::stringstream values(line.substr(arrow + 3));
  for (std::string v; std::getline(values, v, ',');) {
    auto r = detail::parse_rational(v);
    if (!r) throw ConstraintError(Kind::MalformedRule, where + "bad value '" + trim(v) + "'");
    bp.values.push_back(*r);
  }
  if (bp.values.size() != bp.placeholders.size())
    throw ConstraintError(Kind::PlaceholderValueCountMismatch,
                          where + std::to_string(bp.placeholders.size()) + " placeholders but " +
                              std::to_string(bp.values.size()) + " values");
  return bp;
}

}  // namespace

std::vector<ConstraintBlueprint> parse_blueprint_rules(std::istream& in) {
  std::vector<ConstraintBlueprint> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    out.push_back(parse_rule(line, n));
  }
  return out;
}

std::vector<ConstraintBlueprint> parse_blueprint_rules_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_blueprint_rules(in);
}

std::vector<ConstraintBlueprint> load_blueprint_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open blueprint file " + path);
  return parse_blueprint_rules(in);
}

namespace {

std::optional<SpecialValueAssignment> match_one(const std::vector<parser::Token>& c, const ConstraintBlueprint& bp) {
  std::map<std::string, std::string> bound;  // placeholder -> variable
  std::size_t j = 0;
  for (const auto& p : bp.pattern) {
    if (!p.placeholder) {
      if (j >= c.size() || !parser::same_token(c[j], p.token)) return std::nullopt;
      ++j;
      continue;
    }
    auto v = detail::read_variable(c, j);
    if (!v) return std::nullopt;
    auto [it, fresh] = bound.emplace(*p.placeholder, v->name);
    if (!fresh && it->second != v->name) return std::nullopt;
    j = v->next;
  }
  if (j != c.size()) return std::nullopt;
  SpecialValueAssignment out;
  out.source_blueprint = bp.id;
  for (std::size_t k = 0; k < bp.placeholders.size(); ++k) {
    const auto& name = bound.at(bp.placeholders[k]);
    if (!out.assignments.emplace(name, bp.values[k]).second) return std::nullopt;
  }
  return out;
}

}  // namespace

std::optional<SpecialValueAssignment> match_constraint(const std::vector<parser::Token>& constraint,
                                                       const std::vector<ConstraintBlueprint>& blueprints) {
  for (const auto& bp : blueprints)
    if (auto m = match_one(constraint, bp)) return m;
  return std::nullopt;
}

std::optional<SpecialValueAssignment> match_constraint(const parser::ParseTree& constraint,
                                                       const std::vector<ConstraintBlueprint>& blueprints) {
  return match_constraint(parser::flatten_tokens(constraint), blueprints);
}

std::optional<SpecialValueAssignment> match_constraint(std::string_view constraint,
                                                       const std::vector<ConstraintBlueprint>& blueprints) {
  try {
    return match_constraint(parser::tokenize(constraint), blueprints);
  } catch (const parser::ParseError&) {
    return std::nullopt;
  }
}

}  // namespace texcas::constraints
