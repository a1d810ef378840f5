#pragma once

// Constraint metadata: blueprint matching with placeholders, set-notation
// domains, compound inequalities and domain membership.

#include "texcas/ir/expr.hpp"
#include "texcas/parser.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace texcas::constraints {

using ir::Rational;

class ConstraintError : public std::runtime_error {
public:
  enum class Kind {
    MalformedRule,
    PlaceholderValueCountMismatch,
    InconsistentProgression,
    UnknownSetSymbol,
    MalformedSetNotation
  };
  ConstraintError(Kind kind, const std::string& what);
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

std::string_view to_string(ConstraintError::Kind k);

// One pattern token; placeholders carry their spelling (`var`, `var1`, ...).
struct PatternToken {
  parser::Token token;
  std::optional<std::string> placeholder;
};

struct ConstraintBlueprint {
  std::string id;  // "rule<line>"
  std::string source;
  std::vector<PatternToken> pattern;
  std::vector<std::string> placeholders;  // distinct, in order of first appearance
  std::vector<Rational> values;           // positional, one per placeholder
};

// Lines `pattern ==> v1,v2,...`; `#` starts a comment line.
std::vector<ConstraintBlueprint> parse_blueprint_rules(std::istream& in);
std::vector<ConstraintBlueprint> parse_blueprint_rules_text(std::string_view text);
std::vector<ConstraintBlueprint> load_blueprint_file(const std::string& path);

struct SpecialValueAssignment {
  std::map<std::string, Rational> assignments;
  std::string source_blueprint;
};

// First blueprint in rule order whose tokens line up one for one. A
// placeholder matches a variable: a letter or Greek letter, optionally
// subscripted.
std::optional<SpecialValueAssignment> match_constraint(const std::vector<parser::Token>& constraint,
                                                       const std::vector<ConstraintBlueprint>& blueprints);
std::optional<SpecialValueAssignment> match_constraint(const parser::ParseTree& constraint,
                                                       const std::vector<ConstraintBlueprint>& blueprints);
std::optional<SpecialValueAssignment> match_constraint(std::string_view constraint,
                                                       const std::vector<ConstraintBlueprint>& blueprints);

enum class BaseSet { Integer, Rational, Real, Complex };
std::string_view to_string(BaseSet s);

struct Interval {
  std::optional<Rational> lower;
  bool lower_strict = false;
  std::optional<Rational> upper;
  bool upper_strict = false;
};

struct Progression {
  Rational start;
  Rational step;  // nonzero
  std::optional<Rational> end;
  std::optional<std::string> end_symbol;  // `1,2,\dots,N`
};

struct VariableDomain {
  std::string var;
  BaseSet base_set = BaseSet::Complex;
  std::optional<Interval> interval;
  std::optional<Progression> progression;
  std::optional<std::vector<Rational>> finite_set;
  std::vector<Rational> exclusions;
  std::optional<Progression> excluded_progression;  // `z \ne 0,-1,-2,\dots`
};

// `vars = list`, `vars \ne list` or `vars \in set`, where the left side is a
// variable list or a single variable with an integer coefficient (`2\nu`).
// Throws ConstraintError.
std::vector<VariableDomain> interpret_set_notation(const std::vector<parser::Token>& constraint);
std::vector<VariableDomain> interpret_set_notation(std::string_view constraint);
bool looks_like_set_notation(const std::vector<parser::Token>& constraint);

struct AtomicConstraint {
  std::string lhs;
  ir::RelationKind relation = ir::RelationKind::Lt;
  std::string rhs;

  bool operator==(const AtomicConstraint&) const = default;
};

std::string to_string(const AtomicConstraint& c);

// Adjacent pairs of a relation chain; a literal number on the left is
// moved to the right with the relation flipped.
std::vector<AtomicConstraint> split_compound_inequality(const std::vector<parser::Token>& constraint);
std::vector<AtomicConstraint> split_compound_inequality(std::string_view constraint);

// Truth of an atomic constraint whose sides are variables or numbers;
// nullopt when a side is neither or a variable is unassigned.
std::optional<bool> holds(const AtomicConstraint& c, const std::map<std::string, Rational>& assignment);

bool in_domain(const VariableDomain& d, const Rational& value);
bool check_domain(const std::vector<VariableDomain>& domains, const std::map<std::string, Rational>& assignment);

// Everything learned from the constraint strings of one formula.
struct ConstraintAnalysis {
  std::vector<VariableDomain> domains;
  std::map<std::string, Rational> special_values;
  std::vector<std::string> unmatched;  // neither matched nor interpreted
  std::vector<std::string> malformed;  // set notation that failed to interpret
  std::vector<std::string> conflicts;  // special value outside a domain; the special value is kept
};

ConstraintAnalysis analyze_constraints(const std::vector<std::string>& constraints,
                                       const std::vector<ConstraintBlueprint>& blueprints);

}  // namespace texcas::constraints
