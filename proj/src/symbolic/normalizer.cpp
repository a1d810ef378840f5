#include "normal_form.hpp"

#include "texcas/numeric/errors.hpp"

#include <algorithm>
#include <set>

namespace texcas::symbolic::detail {

using constraints::BaseSet;
using ir::BigInt;
using ir::BigOpKind;
using ir::ConstantKind;
using ir::ExprKind;

namespace {

const std::set<std::string, std::less<>> kOdd = {"sin",   "tan",   "cot",   "csc",  "sinh", "tanh", "coth",
                                                 "csch",  "asin",  "atan",  "asinh", "atanh", "erf"};
const std::set<std::string, std::less<>> kEven = {"cos", "sec", "cosh", "sech"};

RatFun constant(const Rational& c) { return {constant_poly(c), {}}; }
RatFun atom(const Expr& a, const Rational& e = 1) { return {atom_poly(a, e), {}}; }

// key^q kept opaque; exponential atoms and i must not reinterpret q.
RatFun opaque_power(const Expr& key, const Rational& q) {
  if (q == 1) return atom(key);
  if (is_exp_atom(key) || key.is_constant(ConstantKind::ImaginaryUnit) || key.is_number()) return atom(ir::pow(key, ir::num(q)));
  return atom(key, q);
}

bool as_rational(const RatFun& r, Rational& out) { return r.den.empty() && is_constant(r.num, &out); }

bool is_int(const Rational& r) { return denominator(r) == 1; }

// Prime powers of a positive integer up to a trial-division bound; the
// leftover cofactor (1 when fully factored) is returned separately.
std::map<BigInt, long> factor(BigInt n, BigInt& leftover) {
  std::map<BigInt, long> f;
  for (BigInt p = 2; p * p <= n && p < 100000; ++p)
    while (n % p == 0) {
      ++f[p];
      n /= p;
    }
  if (n > 1 && n < BigInt(100000) * 100000) {
    ++f[n];
    n = 1;
  }
  leftover = n;
  return f;
}

// c^q for positive rational c: integer parts folded, fractional parts kept
// as number atoms.
RatFun positive_rational_power(const Rational& c, const Rational& q) {
  Monomial m;
  for (int side = 0; side < 2; ++side) {
    BigInt rest;
    const BigInt n = side == 0 ? numerator(c) : denominator(c);
    const int sign = side == 0 ? 1 : -1;
    for (const auto& [p, k] : factor(n, rest)) m[ir::num(Rational(p))] += q * k * sign;
    if (rest > 1) m[ir::num(Rational(rest))] += q * sign;
  }
  Poly p = mul_monomial(constant_poly(1), m, 1);
  return {p, {}};
}

Expr sorted_fn(const std::string& id, std::vector<Expr> a, std::vector<Expr> b, const Expr& z) {
  std::sort(a.begin(), a.end(), ir::ExprLess{});
  std::sort(b.begin(), b.end(), ir::ExprLess{});
  if (a.size() <= 2 && b.size() == 1) {
    std::vector<Expr> args = a;
    args.insert(args.end(), b.begin(), b.end());
    args.push_back(z);
    if (a.empty()) return ir::fn("Hyp0F1", args);
    if (a.size() == 1) return ir::fn("Hyp1F1", args);
    return ir::fn("Hyp2F1", args);
  }
  std::vector<Expr> args = a;
  args.insert(args.end(), b.begin(), b.end());
  args.push_back(z);
  return ir::fn("HypPFQ", {ir::num(static_cast<long>(a.size())), ir::num(static_cast<long>(b.size()))}, args);
}

}  // namespace

const constraints::VariableDomain* Normalizer::domain_of(const std::string& var) const {
  for (const auto& d : assumptions_)
    if (d.var == var) return &d;
  return nullptr;
}

bool Normalizer::known_nonnegative(const Expr& a) const {
  switch (a.kind()) {
    case ExprKind::Number: return a.value() >= 0;
    case ExprKind::Constant: return a.constant() != ConstantKind::ImaginaryUnit;
    case ExprKind::Variable:
      for (const auto& d : assumptions_) {
        if (d.var != a.name()) continue;
        if (d.interval && d.interval->lower && *d.interval->lower >= 0) return true;
        if (d.progression && d.progression->start >= 0 && d.progression->step > 0) return true;
        if (d.finite_set && std::all_of(d.finite_set->begin(), d.finite_set->end(), [](const Rational& r) { return r >= 0; }))
          return true;
      }
      return false;
    case ExprKind::Function: return a.name() == "abs";
    case ExprKind::Pow:
      if (a.base().is_constant(ConstantKind::EulerE)) return known_real(a.exponent());
      return known_nonnegative(a.base()) && known_real(a.exponent());
    case ExprKind::Mul:
    case ExprKind::Add:
      return std::all_of(a.children().begin(), a.children().end(), [&](const Expr& c) { return known_nonnegative(c); });
    default: return false;
  }
}

bool Normalizer::known_positive(const Expr& a) const {
  switch (a.kind()) {
    case ExprKind::Number: return a.value() > 0;
    case ExprKind::Constant: return a.constant() != ConstantKind::ImaginaryUnit && a.constant() != ConstantKind::Infinity;
    case ExprKind::Variable:
      for (const auto& d : assumptions_) {
        if (d.var != a.name()) continue;
        if (d.interval && d.interval->lower && (*d.interval->lower > 0 || (*d.interval->lower == 0 && d.interval->lower_strict)))
          return true;
        if (d.progression && d.progression->start > 0 && d.progression->step > 0) return true;
        if (d.finite_set && std::all_of(d.finite_set->begin(), d.finite_set->end(), [](const Rational& r) { return r > 0; }))
          return true;
      }
      return false;
    case ExprKind::Pow:
      if (a.base().is_constant(ConstantKind::EulerE)) return known_real(a.exponent());
      return known_positive(a.base()) && known_real(a.exponent());
    case ExprKind::Mul:
    case ExprKind::Add:
      return std::all_of(a.children().begin(), a.children().end(), [&](const Expr& c) { return known_positive(c); });
    default: return false;
  }
}

bool Normalizer::known_real(const Expr& e) const {
  static const std::set<std::string, std::less<>> real_to_real = {
      "sin", "cos", "tan", "cot", "sec", "csc", "sinh", "cosh", "tanh", "coth", "sech", "csch",
      "atan", "asinh", "GammaFn", "Digamma", "erf", "erfc", "factorial", "BesselJ", "BesselI", "HermiteH",
      "ChebyT", "ChebyU", "LegendreP", "LaguerreL", "JacobiP", "binomial", "Pochhammer"};
  switch (e.kind()) {
    case ExprKind::Number: return true;
    case ExprKind::Constant: return e.constant() != ConstantKind::ImaginaryUnit && e.constant() != ConstantKind::Infinity;
    case ExprKind::Variable: {
      const auto* d = domain_of(e.name());
      if (!d) return false;
      for (const auto& x : assumptions_)
        if (x.var == e.name() && (x.base_set != BaseSet::Complex || x.interval || x.progression || x.finite_set)) return true;
      return false;
    }
    case ExprKind::Add:
    case ExprKind::Mul:
      return std::all_of(e.children().begin(), e.children().end(), [&](const Expr& c) { return known_real(c); });
    case ExprKind::Neg: return known_real(e.operand());
    case ExprKind::Pow:
      if (e.exponent().is_integer()) return known_real(e.base());
      return known_positive(e.base()) && known_real(e.exponent());
    case ExprKind::Function:
      if (e.name() == "abs" || e.name() == "Re" || e.name() == "Im") return true;
      if (!real_to_real.contains(e.name())) return false;
      return std::all_of(e.args().begin(), e.args().end(), [&](const Expr& c) { return known_real(c); }) &&
             std::all_of(e.params().begin(), e.params().end(), [&](const Expr& c) { return known_real(c); });
    default: return false;
  }
}

bool Normalizer::known_integer(const Expr& e, bool nonnegative) const {
  if (e.is_number()) return e.is_integer() && (!nonnegative || e.value() >= 0);
  if (e.is(ExprKind::Variable)) {
    for (const auto& d : assumptions_) {
      if (d.var != e.name() || d.base_set != BaseSet::Integer) continue;
      if (!nonnegative) return true;
      if (d.interval && d.interval->lower && *d.interval->lower > -1) return true;
      if (d.progression && d.progression->start >= 0 && d.progression->step > 0) return true;
      if (d.finite_set && std::all_of(d.finite_set->begin(), d.finite_set->end(), [](const Rational& r) { return r >= 0; }))
        return true;
    }
    return false;
  }
  if (e.is(ExprKind::Add) || e.is(ExprKind::Mul))
    return std::all_of(e.children().begin(), e.children().end(), [&](const Expr& c) { return known_integer(c, nonnegative); });
  return false;
}

RatFun Normalizer::from_expr(const Expr& e) {
  numeric::checkpoint();
  switch (e.kind()) {
    case ExprKind::Number: return constant(e.value());
    case ExprKind::Constant:
    case ExprKind::Variable: return atom(e);
    case ExprKind::Add: {
      RatFun r = constant(0);
      for (const auto& c : e.children()) r = add(r, from_expr(c));
      return r;
    }
    case ExprKind::Mul: {
      RatFun r = constant(1);
      for (const auto& c : e.children()) r = mul(r, from_expr(c));
      return r;
    }
    case ExprKind::Neg: return neg(from_expr(e.operand()));
    case ExprKind::Pow: return power(e.base(), e.exponent());
    case ExprKind::Function: return function(e);
    case ExprKind::Derivative: {
      Expr d = canonical(e.operand());
      for (int k = 0; k < e.order(); ++k) {
        const Expr next = differentiate(d, e.name());
        if (next == ir::derivative(d, e.name(), 1)) return atom(ir::derivative(d, e.name(), e.order() - k));
        d = canonical(next);
      }
      return from_expr(d);
    }
    case ExprKind::BigOp: return bigop(e);
  }
  return atom(e);
}

RatFun Normalizer::exp_of(const RatFun& x) {
  if (!x.den.empty()) return atom(ir::pow(ir::constant(ConstantKind::EulerE), to_expr(x)));
  RatFun r = constant(1);
  for (const auto& [m, c] : x.num) {
    if (m.empty()) {
      r = mul(r, atom(ir::constant(ConstantKind::EulerE), c));
      continue;
    }
    const Expr key = to_expr(Poly{{m, 1}});
    // e^(c log y) is the principal power y^c
    if (m.size() == 1 && m.begin()->second == 1 && key.is_function("log")) {
      r = mul(r, rational_or_atom_power(from_expr(key.args()[0]), c));
      continue;
    }
    r = mul(r, atom(ir::pow(ir::constant(ConstantKind::EulerE), key), c));
  }
  return r;
}

RatFun Normalizer::rational_or_atom_power(const RatFun& base, const Rational& q) {
  if (is_int(q)) {
    if (!base.den.empty() || base.num.size() > 1) {
      const double estimate = std::pow(static_cast<double>(base.num.size() + base.den.size()), std::abs(q.convert_to<double>()));
      if (estimate > static_cast<double>(kMaxTerms)) return opaque_power(to_expr(base), q);
    }
    return pow_int(base, static_cast<long>(numerator(q)));
  }
  return rational_power(base, q);
}

RatFun Normalizer::rational_power(const RatFun& b, const Rational& q) {
  Rational c;
  if (as_rational(b, c)) {
    if (c == 0) {
      if (q > 0) return constant(0);
      throw std::domain_error("zero to a negative power");
    }
    if (c > 0) return positive_rational_power(c, q);
    // (-c)^q = c^q e^(i pi q) on the principal branch
    return mul(positive_rational_power(-c, q), atom(i_pi_atom(), q));
  }
  if (b.den.empty() && b.num.size() == 1) {
    const auto& [m, coeff] = *b.num.begin();
    if (coeff > 0) {
      bool split_ok = m.size() == 1 && m.begin()->second == 1 && !is_exp_atom(m.begin()->first);
      if (!split_ok) {
        split_ok = true;
        for (const auto& [a, e] : m) {
          if (is_exp_atom(a) ? !known_real(exp_atom_exponent(a)) : !known_nonnegative(a)) split_ok = false;
        }
      }
      RatFun r = positive_rational_power(coeff, q);
      if (split_ok) {
        Monomial scaled;
        for (const auto& [a, e] : m) {
          if (a.is_constant(ConstantKind::ImaginaryUnit))
            scaled[i_pi_atom()] += e * q / 2;  // i^q = e^(i pi q / 2)
          else
            scaled[a] += e * q;
        }
        return mul(r, RatFun{mul_monomial(constant_poly(1), scaled, 1), {}});
      }
      return mul(r, opaque_power(to_expr(Poly{{m, 1}}), q));
    }
  }
  return opaque_power(to_expr(b), q);
}

RatFun Normalizer::power(const Expr& base, const Expr& exponent) {
  if (base.is_constant(ConstantKind::EulerE)) return exp_of(from_expr(exponent));
  const RatFun x = from_expr(exponent);
  const RatFun b = from_expr(base);
  Rational q;
  if (as_rational(x, q)) return rational_or_atom_power(b, q);
  const Expr base_expr = to_expr(b);
  if (!x.den.empty()) return atom(ir::pow(base_expr, to_expr(x)));
  RatFun r = constant(1);
  for (const auto& [m, c] : x.num) {
    if (m.empty()) {
      r = mul(r, rational_or_atom_power(b, c));
      continue;
    }
    const Expr key = to_expr(Poly{{m, 1}});
    if (is_int(c))
      r = mul(r, atom(ir::pow(base_expr, key), c));
    else
      r = mul(r, atom(ir::pow(base_expr, to_expr(Poly{{m, c}}))));
  }
  return r;
}

RatFun Normalizer::function(const Expr& e) {
  std::vector<Expr> ps, as;
  for (const auto& p : e.params()) ps.push_back(canonical(p));
  for (const auto& a : e.args()) as.push_back(canonical(a));
  const std::string& id = e.name();
  auto arg_value = [&](std::size_t i, Rational& v) { return i < as.size() && as[i].is_number() && (v = as[i].value(), true); };
  Rational v;

  if (id == "factorial") return from_expr(ir::fn("GammaFn", {ir::add(as[0], ir::num(1))}));

  if (as.size() == 1 && ps.empty() && (kOdd.contains(id) || kEven.contains(id))) {
    const RatFun a = from_expr(as[0]);
    if (a.den.empty() && !a.num.empty() && a.num.begin()->second < 0) {
      const Expr flipped = ir::fn(id, {to_expr(neg(a))});
      return kOdd.contains(id) ? neg(from_expr(flipped)) : from_expr(flipped);
    }
  }

  if (as.size() == 1 && arg_value(0, v) && v == 0) {
    static const std::set<std::string, std::less<>> zero_at_zero = {"sin", "tan", "sinh", "tanh", "asin", "atan",
                                                                    "asinh", "atanh", "erf"};
    static const std::set<std::string, std::less<>> one_at_zero = {"cos", "cosh", "sec", "sech", "erfc"};
    if (zero_at_zero.contains(id)) return constant(0);
    if (one_at_zero.contains(id)) return constant(1);
  }
  if (id == "log" && arg_value(0, v) && v == 1) return constant(0);
  if (id == "log" && as[0].is_constant(ConstantKind::EulerE)) return constant(1);

  // circular functions at rational multiples of pi with denominator 1, 2, 3, 4 or 6
  static const std::set<std::string, std::less<>> circular = {"sin", "cos", "tan", "cot", "sec", "csc"};
  if (circular.contains(id) && as.size() == 1 && ps.empty()) {
    const RatFun a = from_expr(as[0]);
    const bool pi_multiple = a.den.empty() && (a.num.empty() || (a.num.size() == 1 && a.num.begin()->first.size() == 1 &&
                                                                   a.num.begin()->first.begin()->first.is_constant(ConstantKind::Pi) &&
                                                                   a.num.begin()->first.begin()->second == 1));
    const Rational c = a.num.empty() ? Rational(0) : a.num.begin()->second;
    const auto s = pi_multiple ? sin_pi(c) : std::nullopt;
    const auto co = pi_multiple ? sin_pi(c + Rational(1, 2)) : std::nullopt;
    if (s && co) {
      const RatFun sv{*s, {}}, cv{*co, {}};
      if (id == "sin") return sv;
      if (id == "cos") return cv;
      const RatFun& den = id == "tan" || id == "sec" ? cv : sv;
      if (!den.num.empty()) {
        if (id == "tan") return mul(sv, inverse(cv));
        if (id == "cot") return mul(cv, inverse(sv));
        return inverse(den);
      }
    }
  }

  if (id == "GammaFn" && arg_value(0, v)) {
    if (is_int(v) && v > 0 && v <= 30) {
      Rational f = 1;
      for (long k = 2; k < static_cast<long>(numerator(v)); ++k) f *= k;
      return constant(f);
    }
    if (v == Rational(1, 2)) return atom(ir::constant(ConstantKind::Pi), Rational(1, 2));
  }

  if ((id == "Pochhammer" || id == "binomial") && arg_value(1, v) && is_int(v) && v <= 30) {
    if (v < 0) {
      if (id == "binomial") return constant(0);
    } else {
      const long k = static_cast<long>(numerator(v));
      RatFun r = constant(1);
      const RatFun a = from_expr(as[0]);
      for (long j = 0; j < k; ++j) {
        const RatFun t = add(a, constant(id == "Pochhammer" ? j : -j));
        r = mul(r, t);
      }
      if (id == "binomial") {
        Rational f = 1;
        for (long j = 2; j <= k; ++j) f *= j;
        r = mul(r, constant(1 / f));
      }
      return r;
    }
  }

  if (id == "Hyp0F1" || id == "Hyp1F1" || id == "Hyp2F1" || id == "HypPFQ") {
    std::size_t p = 0, q = 0;
    std::size_t offset = 0;
    if (id == "Hyp0F1") q = 1;
    if (id == "Hyp1F1") p = q = 1;
    if (id == "Hyp2F1") p = 2, q = 1;
    if (id == "HypPFQ") {
      if (ps.size() != 2 || !ps[0].is_integer() || !ps[1].is_integer()) return atom(ir::fn(id, ps, as));
      p = static_cast<std::size_t>(ps[0].value().convert_to<long>());
      q = static_cast<std::size_t>(ps[1].value().convert_to<long>());
    }
    if (as.size() != p + q + 1) return atom(ir::fn(id, ps, as));
    std::vector<Expr> a(as.begin() + offset, as.begin() + static_cast<std::ptrdiff_t>(p));
    std::vector<Expr> b(as.begin() + static_cast<std::ptrdiff_t>(p), as.end() - 1);
    const Expr z = as.back();
    // equal upper and lower parameters cancel
    for (auto it = a.begin(); it != a.end();) {
      auto hit = std::find(b.begin(), b.end(), *it);
      if (hit != b.end() && !(it->is_integer() && it->value() <= 0)) {
        b.erase(hit);
        it = a.erase(it);
      } else {
        ++it;
      }
    }
    if (z.is_number(0)) return constant(1);
    if (a.empty() && b.empty()) return power(ir::constant(ConstantKind::EulerE), z);
    if (a.size() == 1 && b.empty()) return power(ir::sub(ir::num(1), z), ir::neg(a[0]));
    // a terminating series with a short polynomial part is summed out
    std::optional<long> terms;
    for (const auto& x : a)
      if (x.is_integer() && x.value() <= 0 && x.value() >= -12) {
        const long n = -x.value().convert_to<long>();
        if (!terms || n < *terms) terms = n;
      }
    bool lower_pole = false;
    for (const auto& x : b)
      if (x.is_integer() && x.value() <= 0 && terms && -x.value().convert_to<long>() < *terms) lower_pole = true;
    if (terms && !lower_pole) {
      RatFun sum = constant(0), term = constant(1);
      const RatFun zz = from_expr(z);
      for (long k = 0; k <= *terms; ++k) {
        sum = add(sum, term);
        RatFun ratio = mul(zz, constant(Rational(1, k + 1)));
        for (const auto& x : a) ratio = mul(ratio, add(from_expr(x), constant(k)));
        for (const auto& x : b) ratio = mul(ratio, inverse(add(from_expr(x), constant(k))));
        term = mul(term, ratio);
      }
      return sum;
    }
    return atom(sorted_fn(id, a, b, z));
  }

  return atom(ir::fn(id, ps, as));
}

RatFun Normalizer::bigop(const Expr& e) {
  const auto& n = e.node();
  auto canon = [&](const std::optional<Expr>& o) -> std::optional<Expr> {
    if (!o) return std::nullopt;
    return canonical(*o);
  };
  const Expr body = canonical(*n.body);
  const auto lo = canon(n.lower), hi = canon(n.upper), target = canon(n.target);
  if ((n.bigop == BigOpKind::Sum || n.bigop == BigOpKind::Prod) && lo && hi && lo->is_integer() && hi->is_integer()) {
    const Rational a = lo->value(), b = hi->value();
    if (b - a <= 60) {
      RatFun r = constant(n.bigop == BigOpKind::Sum ? 0 : 1);
      for (Rational k = a; k <= b; k += 1) {
        const RatFun t = from_expr(ir::substitute(body, n.name, ir::num(k)));
        r = n.bigop == BigOpKind::Sum ? add(r, t) : mul(r, t);
      }
      return r;
    }
  }
  if (!ir::contains_variable(body, n.name) && n.bigop == BigOpKind::Sum && lo && hi)
    return mul(from_expr(body), from_expr(ir::add({*hi, ir::neg(*lo), ir::num(1)})));
  return atom(ir::rebuild(e, {}, {}, {}, body, lo, hi, target));
}

}  // namespace texcas::symbolic::detail
