#include "rules.hpp"

#include "texcas/numeric/errors.hpp"

#include <set>

namespace texcas::symbolic {

using detail::Normalizer;

namespace {

struct Rewriter {
  Normalizer& norm;
  std::vector<const RewriteRule*> rules;
  int budget;
  int steps = 0;

  // Rewrites to a fixed point, renormalizing after every step.
  Expr run(const Expr& e) {
    Expr cur = norm.canonical(e);
    std::set<Expr, ir::ExprLess> seen{cur};
    while (auto next = detail::rewrite_once(cur, rules, norm)) {
      if (steps >= budget) throw SymbolicError(SymbolicError::Kind::BudgetExceeded, "rewrite step budget exhausted");
      ++steps;
      cur = norm.canonical(*next);
      if (!seen.insert(cur).second) break;
    }
    return cur;
  }

  // One bottom-up pass without renormalization, so converted forms survive.
  Expr single_pass(const Expr& e) {
    const auto& n = e.node();
    auto each = [&](const std::vector<Expr>& list) {
      std::vector<Expr> out;
      for (const auto& x : list) out.push_back(single_pass(x));
      return out;
    };
    Expr cur = e;
    if (!n.children.empty() || !n.params.empty() || !n.args.empty())
      cur = ir::rebuild(e, each(n.children), each(n.params), each(n.args), n.body, n.lower, n.upper, n.target);
    for (const auto* r : rules)
      if (auto out = detail::apply_at(*r, cur, norm)) {
        if (++steps > budget) throw SymbolicError(SymbolicError::Kind::BudgetExceeded, "rewrite step budget exhausted");
        return *out;
      }
    return cur;
  }
};

// Unevaluated sums, products, integrals and derivatives are not numbers even
// when all their variables are bound.
bool has_unevaluated(const Expr& e) {
  if (e.is(ir::ExprKind::BigOp) || e.is(ir::ExprKind::Derivative)) return true;
  const auto& n = e.node();
  for (const auto* list : {&n.children, &n.params, &n.args})
    for (const auto& c : *list)
      if (has_unevaluated(c)) return true;
  return false;
}

SymbolicClass classify(const Expr& e, SimplifyMode mode) {
  if (e.is_number(0) && mode != SimplifyMode::Quotient) return SymbolicClass::Zero;
  if (e.is_number(1) && mode != SimplifyMode::Difference) return SymbolicClass::One;
  if (ir::free_variables(e).empty() && !has_unevaluated(e)) return SymbolicClass::OtherNumeric;
  return SymbolicClass::Unsimplified;
}

Expr preprocess_counted(const Expr& e, Preprocessor p, const RuleTable& rules, Normalizer& norm, int budget,
                        int& steps) {
  auto fixpoint = [&](const Expr& x, const char* section) {
    Rewriter rw{norm, rules.section(section), budget};
    Expr out = rw.run(x);
    steps += rw.steps;
    return out;
  };
  auto hypergeometric = [&](const Expr& x) {
    Rewriter rw{norm, rules.section("hypergeometric"), budget};
    Expr out = rw.single_pass(norm.canonical(x));
    steps += rw.steps;
    return out;
  };
  switch (p) {
    case Preprocessor::None: return norm.canonical(e);
    case Preprocessor::Expand: return fixpoint(e, "expand");
    case Preprocessor::ExponentialForm: return fixpoint(e, "exponential");
    case Preprocessor::HypergeometricForm: return hypergeometric(e);
    case Preprocessor::ExpandThenConvert: return fixpoint(fixpoint(e, "expand"), "exponential");
  }
  return e;
}

// Candidate forms of one preprocessor; expand-then-convert yields both conversions.
std::vector<Expr> preprocessed_forms(const Expr& e, Preprocessor p, const RuleTable& rules, Normalizer& norm,
                                     int budget, int& steps) {
  if (p != Preprocessor::ExpandThenConvert) return {preprocess_counted(e, p, rules, norm, budget, steps)};
  const Expr expanded = preprocess_counted(e, Preprocessor::Expand, rules, norm, budget, steps);
  return {preprocess_counted(expanded, Preprocessor::ExponentialForm, rules, norm, budget, steps),
          preprocess_counted(expanded, Preprocessor::HypergeometricForm, rules, norm, budget, steps)};
}

}  // namespace

std::string_view to_string(Preprocessor p) {
  switch (p) {
    case Preprocessor::None: return "None";
    case Preprocessor::ExponentialForm: return "ExponentialForm";
    case Preprocessor::HypergeometricForm: return "HypergeometricForm";
    case Preprocessor::Expand: return "Expand";
    case Preprocessor::ExpandThenConvert: return "ExpandThenConvert";
  }
  return "?";
}

std::optional<Preprocessor> preprocessor_from_string(std::string_view s) {
  for (auto p : {Preprocessor::None, Preprocessor::ExponentialForm, Preprocessor::HypergeometricForm,
                 Preprocessor::Expand, Preprocessor::ExpandThenConvert})
    if (to_string(p) == s) return p;
  return std::nullopt;
}

std::string_view to_string(SimplifyMode m) {
  switch (m) {
    case SimplifyMode::Difference: return "Difference";
    case SimplifyMode::Quotient: return "Quotient";
    case SimplifyMode::Both: return "Both";
  }
  return "?";
}

std::optional<SimplifyMode> simplify_mode_from_string(std::string_view s) {
  for (auto m : {SimplifyMode::Difference, SimplifyMode::Quotient, SimplifyMode::Both})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

std::string_view to_string(SymbolicClass c) {
  switch (c) {
    case SymbolicClass::Zero: return "Zero";
    case SymbolicClass::One: return "One";
    case SymbolicClass::OtherNumeric: return "OtherNumeric";
    case SymbolicClass::Unsimplified: return "Unsimplified";
    case SymbolicClass::Error: return "Error";
  }
  return "?";
}

Expr normalize(const Expr& e, const Domains& assumptions) {
  Normalizer norm(assumptions);
  return norm.canonical(e);
}

Expr expand(const Expr& e, const RuleTable& rules, const Domains& assumptions) {
  Normalizer norm(assumptions);
  int steps = 0;
  return preprocess_counted(e, Preprocessor::Expand, rules, norm, 4000, steps);
}

Expr to_exponential_form(const Expr& e, const RuleTable& rules) {
  Normalizer norm({});
  int steps = 0;
  return preprocess_counted(e, Preprocessor::ExponentialForm, rules, norm, 4000, steps);
}

Expr to_hypergeometric_form(const Expr& e, const RuleTable& rules) {
  Normalizer norm({});
  int steps = 0;
  return preprocess_counted(e, Preprocessor::HypergeometricForm, rules, norm, 4000, steps);
}

Expr preprocess(const Expr& e, Preprocessor p, const RuleTable& rules, const Domains& assumptions) {
  Normalizer norm(assumptions);
  int steps = 0;
  return preprocess_counted(e, p, rules, norm, 4000, steps);
}

SimplifyResult simplify(const Expr& e, const RuleTable& rules, const SimplifyConfig& config) {
  Normalizer norm(config.assumptions);
  Rewriter rw{norm, rules.section("simplify"), config.rewrite_step_budget};
  SimplifyResult out;
  out.result = rw.run(e);
  out.steps = rw.steps;
  out.classification = classify(out.result, config.mode);
  return out;
}

SymbolicOutcome verify_symbolic(const ir::Relation& rel, const Domains& domains, const SimplifyConfig& config,
                                const RuleTable& rules) {
  SymbolicOutcome outcome;
  if (rel.kind != ir::RelationKind::Eq && rel.kind != ir::RelationKind::Equiv) {
    outcome.classification = SymbolicClass::Error;
    outcome.error = SymbolicError::Kind::NonEquationRelation;
    return outcome;
  }
  Domains assumptions = config.assumptions;
  assumptions.insert(assumptions.end(), domains.begin(), domains.end());
  Normalizer norm(assumptions);
  const auto simplify_rules = rules.section("simplify");

  std::vector<SimplifyMode> modes;
  if (config.mode != SimplifyMode::Quotient) modes.push_back(SimplifyMode::Difference);
  if (config.mode != SimplifyMode::Difference) {
    if (rel.lhs.is_number(0) || rel.rhs.is_number(0)) {
      if (config.mode == SimplifyMode::Quotient) {
        outcome.classification = SymbolicClass::Error;
        outcome.error = SymbolicError::Kind::QuotientOfZero;
        return outcome;
      }
    } else {
      modes.push_back(SimplifyMode::Quotient);
    }
  }

  std::optional<SymbolicOutcome> numeric_hit;
  for (const auto pre : config.preprocessors) {
    for (const auto mode : modes) {
      const Expr target = mode == SimplifyMode::Difference ? ir::sub(rel.lhs, rel.rhs) : ir::div(rel.lhs, rel.rhs);
      int steps = 0;
      std::vector<Expr> results;
      try {
        // each attempt gets the full budget
        for (const auto& form : preprocessed_forms(target, pre, rules, norm, config.rewrite_step_budget, steps)) {
          Rewriter rw{norm, simplify_rules, config.rewrite_step_budget};
          try {
            results.push_back(rw.run(form));
          } catch (const SymbolicError&) {
          }
          steps += rw.steps;
        }
      } catch (const SymbolicError&) {
      } catch (const std::domain_error&) {
      }
      outcome.steps_used += steps;
      for (const auto& result : results) {
        const SymbolicClass c = classify(result, mode);
        const bool success = c == SymbolicClass::Zero || c == SymbolicClass::One;
        if (success) {
          outcome.classification = c;
          outcome.winning_preprocessor = pre;
          outcome.winning_mode = mode;
          outcome.residual.reset();
          return outcome;
        }
        if (pre == Preprocessor::None && mode == SimplifyMode::Difference) outcome.residual = result;
        if (c == SymbolicClass::OtherNumeric && !numeric_hit) {
          SymbolicOutcome hit;
          hit.classification = c;
          hit.value = result;
          hit.winning_preprocessor = pre;
          hit.winning_mode = mode;
          numeric_hit = hit;
        }
      }
    }
  }
  if (numeric_hit) {
    numeric_hit->steps_used = outcome.steps_used;
    numeric_hit->residual = numeric_hit->value;
    return *numeric_hit;
  }
  outcome.classification = SymbolicClass::Unsimplified;
  return outcome;
}

}  // namespace texcas::symbolic
