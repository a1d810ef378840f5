#pragma once

#include "normal_form.hpp"

#include <optional>

namespace texcas::symbolic::detail {

using Bindings = std::map<std::string, Expr>;

// Matches a rule pattern against a canonical expression.
bool match(const Expr& pattern, const Expr& target, const std::set<std::string>& pattern_vars, Bindings& b,
           Normalizer& norm);

bool satisfies(const RewriteRule& rule, const Bindings& b, const Normalizer& norm);

Expr instantiate(const Expr& e, const Bindings& b);

// The rule applied at the root of e only.
std::optional<Expr> apply_at(const RewriteRule& rule, const Expr& e, Normalizer& norm);

// One rewrite with the earliest rule that matches anywhere in e
// (outermost occurrence first), or nullopt. Every occurrence of the
// rewritten subterm is replaced at once.
std::optional<Expr> rewrite_once(const Expr& e, const std::vector<const RewriteRule*>& rules, Normalizer& norm);

}  // namespace texcas::symbolic::detail
