#include "rules.hpp"

#include "texcas/ir/emit.hpp"
#include "texcas/numeric/errors.hpp"

#include <fstream>
#include <limits>
#include <istream>
#include <regex>
#include <sstream>

namespace texcas::symbolic {

using ir::ExprKind;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void malformed(int line, const std::string& what) {
  throw SymbolicError(SymbolicError::Kind::MalformedRule, "line " + std::to_string(line) + ": " + what);
}

std::optional<VarKind> var_kind(std::string_view s) {
  if (s == "complex") return VarKind::Complex;
  if (s == "real") return VarKind::Real;
  if (s == "positive") return VarKind::Positive;
  if (s == "natural") return VarKind::Natural;
  if (s == "integer") return VarKind::Integer;
  return std::nullopt;
}

const std::set<std::string, std::less<>> kSections = {"simplify", "expand", "exponential", "hypergeometric"};

}  // namespace

SymbolicError::SymbolicError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

std::string_view to_string(SymbolicError::Kind k) {
  switch (k) {
    case SymbolicError::Kind::NonEquationRelation: return "NonEquationRelation";
    case SymbolicError::Kind::QuotientOfZero: return "QuotientOfZero";
    case SymbolicError::Kind::BudgetExceeded: return "BudgetExceeded";
    case SymbolicError::Kind::MalformedRule: return "MalformedRule";
  }
  return "?";
}

std::string_view to_string(VarKind k) {
  switch (k) {
    case VarKind::Complex: return "complex";
    case VarKind::Real: return "real";
    case VarKind::Positive: return "positive";
    case VarKind::Natural: return "natural";
    case VarKind::Integer: return "integer";
  }
  return "?";
}

std::vector<const RewriteRule*> RuleTable::section(std::string_view name) const {
  std::vector<const RewriteRule*> out;
  for (const auto& r : rules)
    if (r.section == name) out.push_back(&r);
  return out;
}

RuleTable load_rule_table(std::istream& in) {
  RuleTable table;
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string text = trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') malformed(line, "bad section header");
      section = text.substr(1, text.size() - 2);
      if (!kSections.contains(section)) malformed(line, "unknown section " + section);
      continue;
    }
    if (section.empty()) malformed(line, "rule outside a section");
    const auto arrow = text.find("==>");
    if (arrow == std::string::npos || text.find("==>", arrow + 3) != std::string::npos)
      malformed(line, "expected exactly one '==>'");
    std::string rhs_text = text.substr(arrow + 3), domain_text;
    if (const auto bar = rhs_text.find('|'); bar != std::string::npos) {
      domain_text = rhs_text.substr(bar + 1);
      rhs_text = rhs_text.substr(0, bar);
    }
    RewriteRule rule;
    rule.line = line;
    rule.section = section;
    try {
      rule.lhs = ir::parse_infix(trim(text.substr(0, arrow)));
      rule.rhs = ir::parse_infix(trim(rhs_text));
    } catch (const ir::InfixParseError& e) {
      malformed(line, e.what());
    }
    for (const auto& v : ir::free_variables(rule.lhs)) rule.vars[v] = VarKind::Complex;
    if (rule.vars.empty()) malformed(line, "pattern has no variables");
    for (const auto& v : ir::free_variables(rule.rhs))
      if (!rule.vars.contains(v)) malformed(line, "replacement variable " + v + " is not in the pattern");
    std::stringstream ds(domain_text);
    std::string item;
    while (std::getline(ds, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      const auto colon = item.find(':');
      if (colon == std::string::npos) malformed(line, "domain entry without ':'");
      const std::string v = trim(item.substr(0, colon));
      const auto kind = var_kind(trim(item.substr(colon + 1)));
      if (!kind) malformed(line, "unknown domain " + trim(item.substr(colon + 1)));
      if (!rule.vars.contains(v)) malformed(line, "domain names unknown variable " + v);
      rule.vars[v] = *kind;
    }
    table.rules.push_back(std::move(rule));
  }
  return table;
}

RuleTable load_rule_table_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_rule_table(in);
}

RuleTable load_rule_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rule table " + path);
  return load_rule_table(in);
}

namespace detail {

namespace {

std::set<std::string> unbound(const Expr& p, const std::set<std::string>& vars, const Bindings& b) {
  std::set<std::string> out;
  for (const auto& v : ir::free_variables(p))
    if (vars.contains(v) && !b.contains(v)) out.insert(v);
  return out;
}

bool constant_term(const RatFun& r, Rational& t) {
  if (!r.den.empty()) return false;
  t = 0;
  auto it = r.num.find(Monomial{});
  if (it != r.num.end()) t = it->second;
  return true;
}

// pattern = c0 + c1 * v with c1 a nonzero number.
bool solve_linear(const Expr& pattern, const std::string& v, const Expr& target, Bindings& b, Normalizer& norm) {
  const Expr partial = instantiate(pattern, b);
  const Expr c0 = norm.canonical(ir::substitute(partial, v, ir::num(0)));
  const Expr c1 = norm.canonical(ir::sub(ir::substitute(partial, v, ir::num(1)), c0));
  if (!c1.is_number() || c1.value() == 0) return false;
  const Expr twice = norm.canonical(ir::substitute(partial, v, ir::num(2)));
  if (twice != norm.canonical(ir::add(c0, ir::mul(ir::num(2), c1)))) return false;

  const RatFun shifted = norm.from_expr(ir::sub(target, c0));
  if (c0.is_number() && c0.value() != 0) {
    Rational t;
    if (!constant_term(norm.from_expr(target), t)) return false;
    if (c0.value() > 0 ? t < c0.value() : t > c0.value()) return false;
  }
  const Rational k = c1.value();
  if (denominator(k) == 1 && abs(k) != 1) {
    if (!shifted.den.empty()) return false;
    for (const auto& [m, c] : shifted.num)
      if (denominator(Rational(c / k)) != 1) return false;
  }
  const Expr value = to_expr(mul(shifted, RatFun{constant_poly(1 / k), {}}));
  b[v] = value;
  return norm.canonical(ir::substitute(partial, v, value)) == target;
}

bool match_children(const std::vector<Expr>& ps, const std::vector<Expr>& ts, const std::set<std::string>& vars,
                    Bindings& b, Normalizer& norm) {
  if (ps.size() != ts.size()) return false;
  std::vector<bool> done(ps.size(), false);
  for (std::size_t round = 0; round < ps.size(); ++round) {
    std::size_t pick = ps.size();
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (done[i]) continue;
      const std::size_t cost = ps[i].is(ExprKind::Variable) ? 0 : unbound(ps[i], vars, b).size() + 1;
      if (cost < best) {
        best = cost;
        pick = i;
      }
    }
    done[pick] = true;
    if (!match(ps[pick], ts[pick], vars, b, norm)) return false;
  }
  return true;
}

}  // namespace

Expr instantiate(const Expr& e, const Bindings& b) {
  Expr out = e;
  // simultaneous substitution through fresh placeholders
  std::map<std::string, std::string> fresh;
  for (const auto& [v, value] : b) {
    fresh[v] = "\x01" + v;
    out = ir::substitute(out, v, ir::var(fresh[v]));
  }
  for (const auto& [v, value] : b) out = ir::substitute(out, fresh[v], value);
  return out;
}

bool match(const Expr& pattern, const Expr& target, const std::set<std::string>& vars, Bindings& b,
           Normalizer& norm) {
  const Bindings saved = b;
  auto fail = [&] {
    b = saved;
    return false;
  };
  const auto free = unbound(pattern, vars, b);
  if (free.empty()) return norm.canonical(instantiate(pattern, b)) == target || fail();
  if (pattern.is(ExprKind::Variable)) {
    b[pattern.name()] = target;
    return true;
  }
  if (free.size() == 1 && (pattern.is(ExprKind::Add) || pattern.is(ExprKind::Mul) || pattern.is(ExprKind::Neg))) {
    if (solve_linear(pattern, *free.begin(), target, b, norm)) return true;
    b = saved;
  }
  if (pattern.is(ExprKind::Add) && target.is(ExprKind::Add) && pattern.children().size() == 2 && free.size() == 2 &&
      pattern.children()[0].is(ExprKind::Variable) && pattern.children()[1].is(ExprKind::Variable)) {
    const auto& ts = target.children();
    b[pattern.children()[0].name()] = ts[0];
    b[pattern.children()[1].name()] = norm.canonical(ir::add(std::vector<Expr>(ts.begin() + 1, ts.end())));
    return true;
  }
  if (pattern.kind() != target.kind()) return fail();
  switch (pattern.kind()) {
    case ExprKind::Function:
      if (pattern.name() != target.name()) return fail();
      if (!match_children(pattern.params(), target.params(), vars, b, norm)) return fail();
      if (!match_children(pattern.args(), target.args(), vars, b, norm)) return fail();
      return true;
    case ExprKind::Pow:
      if (!match_children({pattern.base(), pattern.exponent()}, {target.base(), target.exponent()}, vars, b, norm))
        return fail();
      return true;
    case ExprKind::Add:
    case ExprKind::Mul:
      if (!match_children(pattern.children(), target.children(), vars, b, norm)) return fail();
      return true;
    default: return fail();
  }
}

bool satisfies(const RewriteRule& rule, const Bindings& b, const Normalizer& norm) {
  for (const auto& [v, kind] : rule.vars) {
    auto it = b.find(v);
    if (it == b.end()) return false;
    switch (kind) {
      case VarKind::Complex: break;
      case VarKind::Real:
        if (!norm.known_real(it->second)) return false;
        break;
      case VarKind::Positive:
        if (!norm.known_positive(it->second)) return false;
        break;
      case VarKind::Natural:
        if (!norm.known_integer(it->second, true)) return false;
        break;
      case VarKind::Integer:
        if (!norm.known_integer(it->second, false)) return false;
        break;
    }
  }
  return true;
}

namespace {

struct Factor {
  Expr base;
  long power = 1;
};

Factor as_factor(const Expr& e) {
  if (e.is(ExprKind::Pow) && e.exponent().is_integer()) {
    const Rational k = e.exponent().value();
    if (abs(k) < 1000) return {e.base(), k.convert_to<long>()};
  }
  return {e, 1};
}

std::vector<Factor> pattern_factors(const Expr& lhs) {
  std::vector<Factor> out;
  const std::vector<Expr> fs = lhs.is(ExprKind::Mul) ? lhs.children() : std::vector<Expr>{lhs};
  for (const auto& f : fs) {
    Factor x = as_factor(f);
    if (x.power < 1) x = {f, 1};
    out.push_back(x);
  }
  return out;
}

std::set<std::string> var_set(const RewriteRule& r) {
  std::set<std::string> s;
  for (const auto& [v, k] : r.vars) s.insert(v);
  return s;
}

// Assigns pattern factors to distinct target factors with compatible powers.
bool assign(const std::vector<Factor>& ps, std::size_t i, const std::vector<Factor>& ts, std::vector<int>& used,
            int sign, const std::set<std::string>& vars, Bindings& b, Normalizer& norm, const RewriteRule& rule) {
  if (i == ps.size()) return satisfies(rule, b, norm);
  for (std::size_t j = 0; j < ts.size(); ++j) {
    if (used[j] >= 0) continue;
    const long have = ts[j].power * sign;
    if (have < ps[i].power) continue;
    const Bindings saved = b;
    if (match(ps[i].base, ts[j].base, vars, b, norm)) {
      used[j] = static_cast<int>(i);
      if (assign(ps, i + 1, ts, used, sign, vars, b, norm, rule)) return true;
      used[j] = -1;
    }
    b = saved;
  }
  return false;
}

std::optional<Expr> try_rule(const RewriteRule& rule, const Expr& node, Normalizer& norm) {
  const auto vars = var_set(rule);
  const auto ps = pattern_factors(rule.lhs);
  Bindings b;
  if (ps.size() == 1 && ps[0].power == 1) {
    if (match(ps[0].base, node, vars, b, norm) && satisfies(rule, b, norm)) return instantiate(rule.rhs, b);
    return std::nullopt;
  }
  std::vector<Factor> ts;
  if (node.is(ExprKind::Mul)) {
    for (const auto& c : node.children()) ts.push_back(as_factor(c));
  } else if (node.is(ExprKind::Pow)) {
    ts.push_back(as_factor(node));
  } else {
    return std::nullopt;
  }
  if (ts.size() < ps.size()) return std::nullopt;
  for (int sign : {1, -1}) {
    std::vector<int> used(ts.size(), -1);
    b.clear();
    if (!assign(ps, 0, ts, used, sign, vars, b, norm, rule)) continue;
    std::vector<Expr> out;
    for (std::size_t j = 0; j < ts.size(); ++j) {
      long left = ts[j].power;
      if (used[j] >= 0) left -= sign * ps[static_cast<std::size_t>(used[j])].power;
      if (left != 0) out.push_back(left == 1 ? ts[j].base : ir::pow(ts[j].base, ir::num(left)));
    }
    const Expr rhs = instantiate(rule.rhs, b);
    out.push_back(sign == 1 ? rhs : ir::pow(rhs, ir::num(-1)));
    return ir::mul(std::move(out));
  }
  return std::nullopt;
}

}  // namespace

std::optional<Expr> apply_at(const RewriteRule& rule, const Expr& e, Normalizer& norm) {
  return try_rule(rule, e, norm);
}

namespace {

// The first node (pre-order) the rule rewrites, with its replacement.
std::optional<std::pair<Expr, Expr>> find_redex(const RewriteRule& rule, const Expr& e, Normalizer& norm) {
  if (auto out = try_rule(rule, e, norm)) return std::pair{e, *out};
  const auto& n = e.node();
  for (const auto* list : {&n.children, &n.params, &n.args})
    for (const auto& c : *list)
      if (auto r = find_redex(rule, c, norm)) return r;
  return std::nullopt;
}

Expr replace_all(const Expr& e, const Expr& from, const Expr& to) {
  if (e == from) return to;
  const auto& n = e.node();
  if (n.children.empty() && n.params.empty() && n.args.empty()) return e;
  auto each = [&](const std::vector<Expr>& list) {
    std::vector<Expr> out;
    out.reserve(list.size());
    for (const auto& x : list) out.push_back(replace_all(x, from, to));
    return out;
  };
  return ir::rebuild(e, each(n.children), each(n.params), each(n.args), n.body, n.lower, n.upper, n.target);
}

}  // namespace

std::optional<Expr> rewrite_once(const Expr& e, const std::vector<const RewriteRule*>& rules, Normalizer& norm) {
  numeric::checkpoint();
  for (const auto* r : rules)
    if (auto redex = find_redex(*r, e, norm)) return replace_all(e, redex->first, redex->second);
  return std::nullopt;
}

}  // namespace detail

}  // namespace texcas::symbolic
