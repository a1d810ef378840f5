#pragma once

#include "texcas/symbolic.hpp"

#include <map>
#include <optional>

namespace texcas::symbolic::detail {

// Atoms are canonical expressions. An atom of the form e^m (or the constant
// e itself, m = 1) carries exponential semantics: (e^m)^c means e^(c m).
// Any other atom carries principal-power semantics.
using Monomial = std::map<Expr, Rational, ir::ExprLess>;

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

using Poly = std::map<Monomial, Rational, MonomialLess>;

struct PolyLess {
  bool operator()(const Poly& a, const Poly& b) const;
};

// num / prod(den[f]^k); every denominator factor has at least two terms,
// leading coefficient 1 and no monomial content.
struct RatFun {
  Poly num;
  std::map<Poly, int, PolyLess> den;
};

bool is_exp_atom(const Expr& atom);
// Exponential atom e^(i pi).
const Expr& i_pi_atom();
// Exponent expression m of an exponential atom.
Expr exp_atom_exponent(const Expr& atom);

Rational total_degree(const Monomial& m);

Poly constant_poly(const Rational& c);
Poly atom_poly(const Expr& atom, const Rational& exponent = 1);
bool is_constant(const Poly& p, Rational* value = nullptr);

// sin(c pi) when c has denominator 1, 2, 3, 4 or 6.
std::optional<Poly> sin_pi(Rational c);

Poly add(const Poly& a, const Poly& b);
Poly mul(const Poly& a, const Poly& b);
Poly scale(const Poly& a, const Rational& c);
Poly mul_monomial(const Poly& a, const Monomial& m, const Rational& c);

RatFun add(const RatFun& a, const RatFun& b);
RatFun mul(const RatFun& a, const RatFun& b);
RatFun neg(const RatFun& a);
RatFun inverse(const RatFun& a);
RatFun pow_int(const RatFun& a, long k);

Expr to_expr(const RatFun& r);
Expr to_expr(const Poly& p);

class Normalizer {
public:
  explicit Normalizer(Domains assumptions) : assumptions_(std::move(assumptions)) {}

  RatFun from_expr(const Expr& e);
  Expr canonical(const Expr& e) { return to_expr(from_expr(e)); }

  bool known_nonnegative(const Expr& atom) const;
  bool known_real(const Expr& e) const;
  bool known_positive(const Expr& e) const;
  bool known_integer(const Expr& e, bool nonnegative) const;

private:
  Domains assumptions_;

  RatFun power(const Expr& base, const Expr& exponent);
  RatFun exp_of(const RatFun& exponent);
  RatFun rational_power(const RatFun& base, const Rational& q);
  RatFun rational_or_atom_power(const RatFun& base, const Rational& q);
  RatFun function(const Expr& e);
  RatFun bigop(const Expr& e);
  const constraints::VariableDomain* domain_of(const std::string& var) const;
};

// Size guard shared by the expansion routines.
inline constexpr std::size_t kMaxTerms = 4000;

}  // namespace texcas::symbolic::detail
