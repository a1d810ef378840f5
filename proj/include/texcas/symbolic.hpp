#pragma once

// Symbolic verification: rational normalization over function atoms, a
// table of guarded rewrite rules, and the pre-processing conversions that
// are tried before giving up on a relation.

#include "texcas/constraints.hpp"
#include "texcas/ir/expr.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace texcas::symbolic {

using ir::Expr;
using ir::Rational;
using Domains = std::vector<constraints::VariableDomain>;

class SymbolicError : public std::runtime_error {
public:
  enum class Kind { NonEquationRelation, QuotientOfZero, BudgetExceeded, MalformedRule };
  SymbolicError(Kind kind, const std::string& what);
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

std::string_view to_string(SymbolicError::Kind k);

// What a rule's pattern variable must be for the rule to apply.
enum class VarKind { Complex, Real, Positive, Natural, Integer };
std::string_view to_string(VarKind k);

struct RewriteRule {
  int line = 0;
  std::string section;  // simplify, expand, exponential, hypergeometric
  Expr lhs;
  Expr rhs;
  std::map<std::string, VarKind> vars;  // every free variable of lhs
};

// Sections `[simplify]`, `[expand]`, `[exponential]` and `[hypergeometric]`
// hold lines `lhs ==> rhs` or `lhs ==> rhs | a: real, n: natural` in the
// generic infix syntax; `#` starts a comment.
struct RuleTable {
  std::vector<RewriteRule> rules;

  std::vector<const RewriteRule*> section(std::string_view name) const;
};

RuleTable load_rule_table(std::istream& in);
RuleTable load_rule_table_text(std::string_view text);
RuleTable load_rule_table_file(const std::string& path);

enum class Preprocessor { None, ExponentialForm, HypergeometricForm, Expand, ExpandThenConvert };
std::string_view to_string(Preprocessor p);
std::optional<Preprocessor> preprocessor_from_string(std::string_view s);

enum class SimplifyMode { Difference, Quotient, Both };
std::string_view to_string(SimplifyMode m);
std::optional<SimplifyMode> simplify_mode_from_string(std::string_view s);

struct SimplifyConfig {
  SimplifyMode mode = SimplifyMode::Both;
  std::vector<Preprocessor> preprocessors{Preprocessor::None, Preprocessor::Expand, Preprocessor::ExponentialForm,
                                          Preprocessor::HypergeometricForm, Preprocessor::ExpandThenConvert};
  int rewrite_step_budget = 400;
  Domains assumptions;
};

// Canonical form: expanded, like terms collected, common denominator.
// Throws SymbolicError(BudgetExceeded) when the expansion grows too large.
Expr normalize(const Expr& e, const Domains& assumptions = {});

// Polynomial expansion plus the [expand] rules (angle sums, multiples).
Expr expand(const Expr& e, const RuleTable& rules, const Domains& assumptions = {});
Expr to_exponential_form(const Expr& e, const RuleTable& rules);
Expr to_hypergeometric_form(const Expr& e, const RuleTable& rules);
Expr preprocess(const Expr& e, Preprocessor p, const RuleTable& rules, const Domains& assumptions = {});

// Derivative of a canonical expression; unknown derivatives stay as
// Derivative nodes.
Expr differentiate(const Expr& e, const std::string& var);

enum class SymbolicClass { Zero, One, OtherNumeric, Unsimplified, Error };
std::string_view to_string(SymbolicClass c);

struct SimplifyResult {
  Expr result;
  SymbolicClass classification = SymbolicClass::Unsimplified;
  int steps = 0;
};

// Normalization and [simplify] rules to a fixed point within the budget.
// Zero for the literal 0 (unless mode is Quotient), One for the literal 1
// (unless mode is Difference), OtherNumeric for any other variable-free
// result.
SimplifyResult simplify(const Expr& e, const RuleTable& rules, const SimplifyConfig& config);

struct SymbolicOutcome {
  SymbolicClass classification = SymbolicClass::Unsimplified;
  std::optional<Expr> value;  // OtherNumeric
  std::optional<Preprocessor> winning_preprocessor;
  std::optional<SimplifyMode> winning_mode;
  std::optional<SymbolicError::Kind> error;
  int steps_used = 0;
  std::optional<Expr> residual;  // simplified difference when unverified
};

// Tries each configured preprocessor on lhs - rhs (and lhs / rhs) and
// returns the first Zero/One. Relations other than = and \equiv give an
// Error outcome with NonEquationRelation.
SymbolicOutcome verify_symbolic(const ir::Relation& rel, const Domains& domains, const SimplifyConfig& config,
                                const RuleTable& rules);

}  // namespace texcas::symbolic
