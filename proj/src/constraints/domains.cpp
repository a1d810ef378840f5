#include "texcas/constraints.hpp"
#include "token_util.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace texcas::constraints {

using parser::TokenCategory;
using detail::Tokens;
using Kind = ConstraintError::Kind;
using ir::RelationKind;

std::string_view to_string(BaseSet s) {
  switch (s) {
    case BaseSet::Integer: return "Integer";
    case BaseSet::Rational: return "Rational";
    case BaseSet::Real: return "Real";
    case BaseSet::Complex: return "Complex";
  }
  return "?";
}

namespace {

bool is_integer(const Rational& r) { return denominator(r) == 1; }

std::string show(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

std::optional<RelationKind> relation_of(const parser::Token& t) {
  if (t.category != TokenCategory::Relation) return std::nullopt;
  static constexpr std::array<std::pair<std::string_view, RelationKind>, 13> table{{
      {"=", RelationKind::Eq},
      {"<", RelationKind::Lt},
      {"\\lt", RelationKind::Lt},
      {">", RelationKind::Gt},
      {"\\gt", RelationKind::Gt},
      {"\\le", RelationKind::Le},
      {"\\leq", RelationKind::Le},
      {"\\leqslant", RelationKind::Le},
      {"\\ge", RelationKind::Ge},
      {"\\geq", RelationKind::Ge},
      {"\\geqslant", RelationKind::Ge},
      {"\\ne", RelationKind::Ne},
      {"\\neq", RelationKind::Ne},
  }};
  for (const auto& [text, kind] : table)
    if (t.text == text) return kind;
  return std::nullopt;
}

RelationKind flipped(RelationKind k) {
  switch (k) {
    case RelationKind::Lt: return RelationKind::Gt;
    case RelationKind::Gt: return RelationKind::Lt;
    case RelationKind::Le: return RelationKind::Ge;
    case RelationKind::Ge: return RelationKind::Le;
    default: return k;
  }
}

// Indices of relation tokens outside braces.
std::vector<std::size_t> top_level_relations(const Tokens& t) {
  std::vector<std::size_t> out;
  int depth = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i].category == TokenCategory::GroupOpen) ++depth;
    if (t[i].category == TokenCategory::GroupClose) --depth;
    if (depth == 0 && t[i].category == TokenCategory::Relation) out.push_back(i);
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> comma_ranges(const Tokens& t, std::size_t b, std::size_t e) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  int depth = 0;
  std::size_t start = b;
  for (std::size_t i = b; i < e; ++i) {
    if (t[i].category == TokenCategory::GroupOpen) ++depth;
    if (t[i].category == TokenCategory::GroupClose) --depth;
    if (depth == 0 && t[i].category == TokenCategory::Comma) {
      out.emplace_back(start, i);
      start = i + 1;
    }
  }
  out.emplace_back(start, e);
  return out;
}

// Left side of set notation: `n`, `n,m`, or `2\nu`.
struct SetLhs {
  std::vector<std::string> vars;
  Rational coefficient = 1;
};

std::optional<SetLhs> read_set_lhs(const Tokens& t, std::size_t e) {
  SetLhs out;
  if (e >= 2 && t[0].category == TokenCategory::Digit) {
    auto c = detail::parse_rational(t[0].text);
    auto v = detail::variable_in(t, 1, e);
    if (!c || *c == 0 || !v) return std::nullopt;
    out.coefficient = *c;
    out.vars.push_back(*v);
    return out;
  }
  for (const auto& [b, end] : comma_ranges(t, 0, e)) {
    auto v = detail::variable_in(t, b, end);
    if (!v) return std::nullopt;
    out.vars.push_back(*v);
  }
  return out;
}

bool set_relation(const parser::Token& t) {
  return t.category == TokenCategory::Relation &&
         (t.text == "\\in" || t.text == "=" || t.text == "\\ne" || t.text == "\\neq");
}

struct ValueList {
  std::vector<Rational> finite;
  std::optional<Progression> progression;
};

ValueList read_value_list(const Tokens& t, std::size_t b, std::size_t e) {
  std::vector<std::pair<std::size_t, std::size_t>> items = comma_ranges(t, b, e);
  std::vector<Rational> terms;
  std::optional<std::size_t> dots_at;
  std::optional<std::string> end_symbol;
  std::optional<Rational> end_value;
  for (std::size_t k = 0; k < items.size(); ++k) {
    const auto [ib, ie] = items[k];
    if (ie == ib + 1 && detail::is_dots(t[ib])) {
      if (dots_at) throw ConstraintError(Kind::MalformedSetNotation, "more than one ellipsis");
      dots_at = k;
      continue;
    }
    if (dots_at) {
      if (k != items.size() - 1) throw ConstraintError(Kind::MalformedSetNotation, "terms after the final bound");
      if (auto v = detail::literal_in(t, ib, ie))
        end_value = *v;
      else if (auto s = detail::variable_in(t, ib, ie))
        end_symbol = *s;
      else
        throw ConstraintError(Kind::MalformedSetNotation, "bad final bound '" +
                                                              parser::render_tokens(Tokens(t.begin() + ib, t.begin() + ie)) + "'");
      continue;
    }
    auto v = detail::literal_in(t, ib, ie);
    if (!v)
      throw ConstraintError(Kind::MalformedSetNotation,
                            "list element '" + parser::render_tokens(Tokens(t.begin() + ib, t.begin() + ie)) +
                                "' is not a number");
    terms.push_back(*v);
  }
  ValueList out;
  if (!dots_at) {
    out.finite = std::move(terms);
    return out;
  }
  if (terms.size() < 2) throw ConstraintError(Kind::InconsistentProgression, "an ellipsis needs two leading terms");
  const Rational step = terms[1] - terms[0];
  if (step == 0) throw ConstraintError(Kind::InconsistentProgression, "zero step");
  for (std::size_t k = 2; k < terms.size(); ++k)
    if (terms[k] - terms[k - 1] != step)
      throw ConstraintError(Kind::InconsistentProgression,
                            "term " + show(terms[k]) + " breaks the step " + show(step));
  Progression p{terms[0], step, std::nullopt, end_symbol};
  if (end_value) {
    const Rational idx = (*end_value - terms[0]) / step;
    if (!is_integer(idx) || idx < static_cast<long>(terms.size()) - 1)
      throw ConstraintError(Kind::InconsistentProgression, "final bound " + show(*end_value) + " is off the progression");
    p.end = end_value;
  }
  out.progression = p;
  return out;
}

}  // namespace

bool looks_like_set_notation(const Tokens& t) {
  const auto rels = top_level_relations(t);
  if (rels.size() != 1 || !set_relation(t[rels[0]])) return false;
  return read_set_lhs(t, rels[0]).has_value() && rels[0] + 1 < t.size();
}

std::vector<VariableDomain> interpret_set_notation(const Tokens& t) {
  const auto rels = top_level_relations(t);
  if (rels.size() != 1 || !set_relation(t[rels[0]]))
    throw ConstraintError(Kind::MalformedSetNotation, "expected one of =, \\ne, \\in");
  const std::size_t r = rels[0];
  const auto lhs = read_set_lhs(t, r);
  if (!lhs) throw ConstraintError(Kind::MalformedSetNotation, "left side is not a variable list");
  if (r + 1 >= t.size()) throw ConstraintError(Kind::MalformedSetNotation, "empty right side");

  VariableDomain d;
  const auto& rel = t[r].text;
  if (rel == "\\in") {
    if (r + 2 != t.size()) throw ConstraintError(Kind::UnknownSetSymbol, parser::render_tokens(Tokens(t.begin() + r + 1, t.end())));
    const auto& s = t[r + 1].text;
    if (s == "\\Real")
      d.base_set = BaseSet::Real;
    else if (s == "\\Complex")
      d.base_set = BaseSet::Complex;
    else if (s == "\\Integer")
      d.base_set = BaseSet::Integer;
    else if (s == "\\Rational")
      d.base_set = BaseSet::Rational;
    else if (s == "\\NatNumber") {
      d.base_set = BaseSet::Integer;
      d.interval = Interval{Rational(1), false, std::nullopt, false};
    } else {
      throw ConstraintError(Kind::UnknownSetSymbol, s);
    }
    if (lhs->coefficient != 1) throw ConstraintError(Kind::MalformedSetNotation, "coefficient on a set membership");
  } else {
    auto values = read_value_list(t, r + 1, t.size());
    const Rational c = lhs->coefficient;
    for (auto& v : values.finite) v /= c;
    if (values.progression) {
      values.progression->start /= c;
      values.progression->step /= c;
      if (values.progression->end) *values.progression->end /= c;
    }
    if (rel == "=") {
      if (values.progression) {
        d.progression = values.progression;
        d.base_set = is_integer(d.progression->start) && is_integer(d.progression->step) ? BaseSet::Integer
                                                                                          : BaseSet::Rational;
      } else {
        d.finite_set = values.finite;
        d.base_set = std::all_of(values.finite.begin(), values.finite.end(), is_integer) ? BaseSet::Integer
                                                                                          : BaseSet::Rational;
      }
    } else {
      d.exclusions = values.finite;
      d.excluded_progression = values.progression;
    }
  }
  std::vector<VariableDomain> out;
  for (const auto& v : lhs->vars) {
    auto copy = d;
    copy.var = v;
    out.push_back(std::move(copy));
  }
  return out;
}

std::vector<VariableDomain> interpret_set_notation(std::string_view constraint) {
  Tokens t;
  try {
    t = parser::tokenize(constraint);
  } catch (const parser::ParseError& e) {
    throw ConstraintError(Kind::MalformedSetNotation, e.what());
  }
  return interpret_set_notation(t);
}

std::string to_string(const AtomicConstraint& c) {
  std::string_view rel;
  switch (c.relation) {
    case RelationKind::Eq: rel = "="; break;
    case RelationKind::Lt: rel = "<"; break;
    case RelationKind::Gt: rel = ">"; break;
    case RelationKind::Le: rel = "\\le"; break;
    case RelationKind::Ge: rel = "\\ge"; break;
    case RelationKind::Ne: rel = "\\ne"; break;
    default: rel = "?"; break;
  }
  return c.lhs + " " + std::string(rel) + " " + c.rhs;
}

std::vector<AtomicConstraint> split_compound_inequality(const Tokens& t) {
  std::vector<std::size_t> cuts;
  for (auto i : top_level_relations(t)) {
    if (!relation_of(t[i])) return {};
    cuts.push_back(i);
  }
  if (cuts.empty()) return {};
  std::vector<std::pair<std::size_t, std::size_t>> sides;
  std::size_t start = 0;
  for (auto c : cuts) {
    sides.emplace_back(start, c);
    start = c + 1;
  }
  sides.emplace_back(start, t.size());
  for (const auto& [b, e] : sides)
    if (b >= e) return {};
  auto render = [&](std::pair<std::size_t, std::size_t> s) {
    return parser::render_tokens(Tokens(t.begin() + static_cast<std::ptrdiff_t>(s.first),
                                        t.begin() + static_cast<std::ptrdiff_t>(s.second)));
  };
  std::vector<AtomicConstraint> out;
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    AtomicConstraint a{render(sides[k]), *relation_of(t[cuts[k]]), render(sides[k + 1])};
    const bool lhs_number = detail::literal_in(t, sides[k].first, sides[k].second).has_value();
    const bool rhs_number = detail::literal_in(t, sides[k + 1].first, sides[k + 1].second).has_value();
    if (lhs_number && !rhs_number) {
      std::swap(a.lhs, a.rhs);
      a.relation = flipped(a.relation);
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<AtomicConstraint> split_compound_inequality(std::string_view constraint) {
  try {
    return split_compound_inequality(parser::tokenize(constraint));
  } catch (const parser::ParseError&) {
    return {};
  }
}

namespace {

struct Side {
  std::optional<Rational> number;
  std::optional<std::string> var;
};

Side read_side(const std::string& text) {
  Side s;
  try {
    const auto t = parser::tokenize(text);
    s.number = detail::literal_in(t, 0, t.size());
    if (!s.number) s.var = detail::variable_in(t, 0, t.size());
  } catch (const parser::ParseError&) {
  }
  return s;
}

bool compare(const Rational& a, RelationKind k, const Rational& b) {
  switch (k) {
    case RelationKind::Eq: return a == b;
    case RelationKind::Lt: return a < b;
    case RelationKind::Gt: return a > b;
    case RelationKind::Le: return a <= b;
    case RelationKind::Ge: return a >= b;
    case RelationKind::Ne: return a != b;
    default: return false;
  }
}

bool progression_contains(const Progression& p, const Rational& v) {
  const Rational idx = (v - p.start) / p.step;
  if (!is_integer(idx) || idx < 0) return false;
  if (p.end && idx > (*p.end - p.start) / p.step) return false;
  return true;
}

}  // namespace

std::optional<bool> holds(const AtomicConstraint& c, const std::map<std::string, Rational>& assignment) {
  auto value = [&](const std::string& text) -> std::optional<Rational> {
    const auto s = read_side(text);
    if (s.number) return s.number;
    if (s.var) {
      auto it = assignment.find(*s.var);
      if (it != assignment.end()) return it->second;
    }
    return std::nullopt;
  };
  const auto a = value(c.lhs);
  const auto b = value(c.rhs);
  if (!a || !b) return std::nullopt;
  return compare(*a, c.relation, *b);
}

bool in_domain(const VariableDomain& d, const Rational& v) {
  if (d.base_set == BaseSet::Integer && !is_integer(v)) return false;
  if (d.interval) {
    const auto& i = *d.interval;
    if (i.lower && (i.lower_strict ? v <= *i.lower : v < *i.lower)) return false;
    if (i.upper && (i.upper_strict ? v >= *i.upper : v > *i.upper)) return false;
  }
  if (d.progression && !progression_contains(*d.progression, v)) return false;
  if (d.finite_set && std::find(d.finite_set->begin(), d.finite_set->end(), v) == d.finite_set->end()) return false;
  if (std::find(d.exclusions.begin(), d.exclusions.end(), v) != d.exclusions.end()) return false;
  if (d.excluded_progression && progression_contains(*d.excluded_progression, v)) return false;
  return true;
}

bool check_domain(const std::vector<VariableDomain>& domains, const std::map<std::string, Rational>& assignment) {
  for (const auto& d : domains) {
    auto it = assignment.find(d.var);
    if (it != assignment.end() && !in_domain(d, it->second)) return false;
  }
  return true;
}

namespace {

// Folds `var rel number` into an interval/exclusion domain; false when the
// atom has another shape.
bool absorb(const AtomicConstraint& a, std::vector<VariableDomain>& domains, std::map<std::string, std::size_t>& slot) {
  const auto l = read_side(a.lhs);
  const auto r = read_side(a.rhs);
  if (!l.var || !r.number) return false;
  const auto& var = *l.var;
  const Rational& b = *r.number;
  auto it = slot.find(var);
  if (it == slot.end()) {
    VariableDomain d;
    d.var = var;
    domains.push_back(d);
    it = slot.emplace(var, domains.size() - 1).first;
  }
  auto& d = domains[it->second];
  auto tighten_lower = [&](bool strict) {
    if (!d.interval) d.interval = Interval{};
    auto& i = *d.interval;
    if (!i.lower || b > *i.lower || (b == *i.lower && strict)) {
      i.lower = b;
      i.lower_strict = strict;
    }
  };
  auto tighten_upper = [&](bool strict) {
    if (!d.interval) d.interval = Interval{};
    auto& i = *d.interval;
    if (!i.upper || b < *i.upper || (b == *i.upper && strict)) {
      i.upper = b;
      i.upper_strict = strict;
    }
  };
  switch (a.relation) {
    case RelationKind::Lt: tighten_upper(true); break;
    case RelationKind::Le: tighten_upper(false); break;
    case RelationKind::Gt: tighten_lower(true); break;
    case RelationKind::Ge: tighten_lower(false); break;
    case RelationKind::Ne: d.exclusions.push_back(b); return true;
    case RelationKind::Eq: d.finite_set = std::vector<Rational>{b}; return true;
    default: return false;
  }
  if (d.base_set == BaseSet::Complex) d.base_set = BaseSet::Real;
  return true;
}

}  // namespace

ConstraintAnalysis analyze_constraints(const std::vector<std::string>& constraints,
                                       const std::vector<ConstraintBlueprint>& blueprints) {
  ConstraintAnalysis out;
  std::map<std::string, std::size_t> interval_slot;
  for (const auto& c : constraints) {
    Tokens t;
    try {
      t = parser::tokenize(c);
    } catch (const parser::ParseError& e) {
      out.malformed.push_back(c + ": " + e.what());
      continue;
    }
    const auto match = match_constraint(t, blueprints);
    if (match)
      for (const auto& [v, val] : match->assignments) out.special_values.emplace(v, val);

    if (looks_like_set_notation(t)) {
      try {
        for (auto& d : interpret_set_notation(t)) out.domains.push_back(std::move(d));
      } catch (const ConstraintError& e) {
        out.malformed.push_back(c + ": " + std::string(to_string(e.kind())) + ": " + e.what());
      }
      continue;
    }
    bool complete = true;
    const auto atoms = split_compound_inequality(t);
    if (atoms.empty()) complete = false;
    for (const auto& a : atoms)
      if (!absorb(a, out.domains, interval_slot)) complete = false;
    if (!complete && !match) out.unmatched.push_back(c);
  }
  for (const auto& [v, val] : out.special_values) {
    std::vector<VariableDomain> mine;
    for (const auto& d : out.domains)
      if (d.var == v) mine.push_back(d);
    if (!check_domain(mine, {{v, val}})) out.conflicts.push_back(v + " = " + show(val));
  }
  return out;
}

}  // namespace texcas::constraints
