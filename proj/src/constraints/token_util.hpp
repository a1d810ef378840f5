#pragma once

#include "texcas/constraints.hpp"

#include <optional>
#include <string>
#include <vector>

namespace texcas::constraints::detail {

using Tokens = std::vector<parser::Token>;

struct VariableRead {
  std::string name;
  std::size_t next = 0;
};

// A variable starting at token i: letter or Greek letter, optional subscript.
std::optional<VariableRead> read_variable(const Tokens& t, std::size_t i);

// The whole range [b, e) is one variable.
std::optional<std::string> variable_in(const Tokens& t, std::size_t b, std::size_t e);

// `3`, `-1/2`, `0.25`, `+2`.
std::optional<Rational> parse_rational(std::string_view text);

// A signed number literal filling the range [b, e): digits or \frac{p}{q}.
std::optional<Rational> literal_in(const Tokens& t, std::size_t b, std::size_t e);

bool is_dots(const parser::Token& t);

}  // namespace texcas::constraints::detail
