#include "normal_form.hpp"

#include "texcas/numeric/errors.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace texcas::symbolic::detail {

using ir::BigInt;
using ir::ConstantKind;
using ir::ExprKind;

namespace {

const Expr& imaginary_unit() {
  static const Expr i = ir::constant(ConstantKind::ImaginaryUnit);
  return i;
}

const Expr& euler_e() {
  static const Expr e = ir::constant(ConstantKind::EulerE);
  return e;
}

bool is_integer(const Rational& r) { return denominator(r) == 1; }

Poly expand_unit_roots(Poly p);

BigInt floor_int(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);
  if (Rational(q) > r) --q;
  return q;
}

Rational rational_pow(const Rational& base, long k) {
  Rational r = 1;
  Rational b = k < 0 ? 1 / base : base;
  for (long n = std::labs(k); n > 0; n >>= 1) {
    if (n & 1) r *= b;
    b *= b;
  }
  return r;
}

const Expr& i_pi_key() {
  static const Expr a = [] {
    std::vector<Expr> f{imaginary_unit(), ir::constant(ConstantKind::Pi)};
    std::sort(f.begin(), f.end(), ir::ExprLess{});
    return ir::pow(euler_e(), ir::mul(f));
  }();
  return a;
}

// Brings a monomial to canonical shape and returns the coefficient it sheds.
Rational fix(Monomial& m) {
  Rational coeff = 1;
  for (auto it = m.begin(); it != m.end();) {
    if (it->second == 0) {
      it = m.erase(it);
      continue;
    }
    const Expr& atom = it->first;
    if (atom.is_number()) {
      const Rational whole(floor_int(it->second));
      if (whole != 0) {
        coeff *= rational_pow(atom.value(), static_cast<long>(whole));
        it->second -= whole;
        if (it->second == 0) {
          it = m.erase(it);
          continue;
        }
      }
    }
    ++it;
  }
  // e^(i pi c) with c a multiple of 1/2
  if (auto it = m.find(i_pi_key()); it != m.end()) {
    Rational c = it->second;
    c -= 2 * Rational(floor_int((c + 1) / 2));  // into [-1, 1)
    if (c == -1) c = 1;
    if (c == 0) {
      m.erase(it);
    } else if (c == 1) {
      coeff = -coeff;
      m.erase(it);
    } else if (c == Rational(1, 2) || c == Rational(-1, 2)) {
      if (c < 0) coeff = -coeff;
      m.erase(it);
      m[imaginary_unit()] += 1;
    } else {
      it->second = c;
    }
  }
  if (auto it = m.find(imaginary_unit()); it != m.end()) {
    BigInt k = numerator(it->second) % 4;
    if (k < 0) k += 4;
    if (k >= 2) coeff = -coeff;
    if (k == 0 || k == 2)
      m.erase(it);
    else
      it->second = 1;
  }
  return coeff;
}

Monomial monomial_product(const Monomial& a, const Monomial& b, Rational& coeff) {
  Monomial m = a;
  for (const auto& [atom, e] : b) m[atom] += e;
  coeff *= fix(m);
  return m;
}

void check_size(const Poly& p) {
  if (p.size() > kMaxTerms) throw SymbolicError(SymbolicError::Kind::BudgetExceeded, "expansion too large");
}

// p = c * M * P with P content-free and leading coefficient 1.
struct Split {
  Rational c;
  Monomial content;
  Poly primitive;
};

Monomial content_of(const Poly& p) {
  std::map<Expr, Rational, ir::ExprLess> lo;
  bool first = true;
  for (const auto& [m, c] : p) {
    if (first) {
      lo.insert(m.begin(), m.end());
      first = false;
      continue;
    }
    for (auto it = lo.begin(); it != lo.end();) {
      auto f = m.find(it->first);
      const Rational e = f == m.end() ? Rational(0) : f->second;
      it->second = std::min(it->second, e);
      ++it;
    }
    for (const auto& [atom, e] : m)
      if (!lo.contains(atom)) lo[atom] = std::min(Rational(0), e);
  }
  Monomial out;
  for (const auto& [atom, e] : lo)
    if (e != 0 && !atom.is_number() && atom != imaginary_unit() && atom != i_pi_key()) out[atom] = e;
  return out;
}

Monomial inverse(const Monomial& m) {
  Monomial out;
  for (const auto& [a, e] : m) out[a] = -e;
  return out;
}

Split split(const Poly& p) {
  Split s;
  s.content = content_of(p);
  const Monomial inv = inverse(s.content);
  const Poly reduced = mul_monomial(p, inv, 1);
  s.c = reduced.begin()->second;
  s.primitive = scale(reduced, 1 / s.c);
  return s;
}

// Exponent bounds per atom for the exact-division box.
std::map<Expr, std::pair<Rational, Rational>, ir::ExprLess> exponent_range(const Poly& p) {
  std::map<Expr, std::pair<Rational, Rational>, ir::ExprLess> r;
  std::set<Expr, ir::ExprLess> atoms;
  for (const auto& [m, c] : p)
    for (const auto& [a, e] : m) atoms.insert(a);
  for (const auto& a : atoms) {
    bool first = true;
    std::pair<Rational, Rational> lohi;
    for (const auto& [m, c] : p) {
      auto it = m.find(a);
      const Rational e = it == m.end() ? Rational(0) : it->second;
      if (first) {
        lohi = {e, e};
        first = false;
      } else {
        lohi.first = std::min(lohi.first, e);
        lohi.second = std::max(lohi.second, e);
      }
    }
    r[a] = lohi;
  }
  return r;
}

bool algebraic_atom(const Expr& a) { return a.is_number() || a == imaginary_unit() || a == i_pi_key(); }

// num / f when f divides num exactly.
std::optional<Poly> exact_divide(const Poly& num, const Poly& f) {
  if (num.empty()) return Poly{};
  const auto range_n = exponent_range(num);
  const auto range_f = exponent_range(f);
  auto in_box = [&](const Monomial& q) {
    for (const auto& [a, e] : q) {
      if (algebraic_atom(a)) continue;
      auto n = range_n.find(a);
      auto g = range_f.find(a);
      const auto rn = n == range_n.end() ? std::pair<Rational, Rational>{0, 0} : n->second;
      const auto rf = g == range_f.end() ? std::pair<Rational, Rational>{0, 0} : g->second;
      if (e < rn.first - rf.first || e > rn.second - rf.second) return false;
    }
    return true;
  };
  const auto& [lead_f, lead_c] = *f.begin();
  const Monomial lead_inv = inverse(lead_f);
  Poly r = num, q;
  // reduction modulo roots of unity need not terminate, so the quotient size is capped
  const std::size_t cap = 256 + 16 * num.size();
  for (std::size_t step = 0; step < cap && !r.empty(); ++step) {
    const auto& [lead_r, c] = *r.begin();
    Rational coeff = c / lead_c;
    Monomial t = monomial_product(lead_r, lead_inv, coeff);
    if (!in_box(t)) return std::nullopt;
    const Poly term{{t, coeff}};
    q = add(q, term);
    r = add(r, scale(mul(term, f), -1));
  }
  if (!r.empty()) return std::nullopt;
  return q;
}

RatFun reduce(RatFun r) {
  if (r.num.empty()) {
    r.den.clear();
    return r;
  }
  for (auto it = r.den.begin(); it != r.den.end();) {
    while (it->second > 0) {
      auto q = exact_divide(r.num, it->first);
      if (!q) break;
      r.num = std::move(*q);
      --it->second;
    }
    if (it->second == 0)
      it = r.den.erase(it);
    else
      ++it;
  }
  return r;
}

Poly den_product(const std::map<Poly, int, PolyLess>& factors) {
  Poly p = constant_poly(1);
  for (const auto& [f, k] : factors)
    for (int i = 0; i < k; ++i) p = mul(p, f);
  return p;
}

}  // namespace

// The factor order matches what to_expr produces for the monomial i*pi.
const Expr& i_pi_atom() { return i_pi_key(); }

bool is_exp_atom(const Expr& atom) {
  return atom == euler_e() || (atom.is(ExprKind::Pow) && atom.base() == euler_e());
}

Expr exp_atom_exponent(const Expr& atom) { return atom == euler_e() ? ir::num(1) : atom.exponent(); }

Rational total_degree(const Monomial& m) {
  Rational d = 0;
  for (const auto& [a, e] : m) d += e;
  return d;
}

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
  const Rational da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    int order;
    if (ia == a.end())
      order = 1;
    else if (ib == b.end())
      order = -1;
    else
      order = ir::compare(ia->first, ib->first);
    const Rational ea = order <= 0 ? ia->second : Rational(0);
    const Rational eb = order >= 0 ? ib->second : Rational(0);
    if (ea != eb) return ea > eb;
    if (order <= 0) ++ia;
    if (order >= 0) ++ib;
  }
  return false;
}

bool PolyLess::operator()(const Poly& a, const Poly& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  MonomialLess less;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    if (less(ia->first, ib->first)) return true;
    if (less(ib->first, ia->first)) return false;
    if (ia->second != ib->second) return ia->second < ib->second;
  }
  return false;
}

Poly constant_poly(const Rational& c) {
  if (c == 0) return {};
  return Poly{{Monomial{}, c}};
}

Poly atom_poly(const Expr& atom, const Rational& exponent) {
  Monomial m{{atom, exponent}};
  const Rational c = fix(m);
  return expand_unit_roots(Poly{{m, c}});
}

bool is_constant(const Poly& p, Rational* value) {
  if (p.empty()) {
    if (value) *value = 0;
    return true;
  }
  if (p.size() == 1 && p.begin()->first.empty()) {
    if (value) *value = p.begin()->second;
    return true;
  }
  return false;
}

Poly add(const Poly& a, const Poly& b) {
  Poly r = a;
  for (const auto& [m, c] : b) {
    auto [it, inserted] = r.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) r.erase(it);
    }
  }
  check_size(r);
  return r;
}

Poly scale(const Poly& a, const Rational& c) {
  if (c == 0) return {};
  Poly r;
  for (const auto& [m, x] : a) r.emplace(m, x * c);
  return r;
}

namespace {

Poly mul_monomial_plain(const Poly& a, const Monomial& m, const Rational& c) {
  Poly r;
  for (const auto& [am, x] : a) {
    Rational coeff = x * c;
    Monomial prod = monomial_product(am, m, coeff);
    auto [it, inserted] = r.try_emplace(prod, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0) r.erase(it);
    }
  }
  return r;
}

// e^(i pi c) with an exact cosine and sine becomes cos(c pi) + i sin(c pi).
Poly expand_unit_roots(Poly p) {
  const bool any = std::any_of(p.begin(), p.end(), [](const auto& t) { return t.first.contains(i_pi_key()); });
  if (!any) return p;
  Poly out;
  for (const auto& [m, c] : p) {
    const auto it = m.find(i_pi_key());
    std::optional<Poly> s, co;
    if (it != m.end()) {
      s = sin_pi(it->second);
      co = sin_pi(it->second + Rational(1, 2));
    }
    if (!s || !co) {
      out = add(out, Poly{{m, c}});
      continue;
    }
    Monomial rest = m;
    rest.erase(i_pi_key());
    const Poly value = add(*co, mul_monomial_plain(*s, Monomial{{imaginary_unit(), 1}}, 1));
    out = add(out, mul_monomial_plain(value, rest, c));
  }
  return out;
}

}  // namespace

std::optional<Poly> sin_pi(Rational c) {
  c -= 2 * Rational(floor_int(c / 2));
  bool negate = false;
  if (c >= 1) {
    c -= 1;
    negate = true;
  }
  if (c > Rational(1, 2)) c = 1 - c;
  Poly v;
  if (c == Rational(1, 6))
    v = constant_poly(Rational(1, 2));
  else if (c == Rational(1, 4))
    v = atom_poly(ir::num(2), Rational(-1, 2));
  else if (c == Rational(1, 3))
    v = scale(atom_poly(ir::num(3), Rational(1, 2)), Rational(1, 2));
  else if (c == Rational(1, 2))
    v = constant_poly(1);
  else if (c != 0)
    return std::nullopt;
  return negate ? scale(v, -1) : v;
}

Poly mul_monomial(const Poly& a, const Monomial& m, const Rational& c) {
  return expand_unit_roots(mul_monomial_plain(a, m, c));
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.size() * b.size() > 50 * kMaxTerms) throw SymbolicError(SymbolicError::Kind::BudgetExceeded, "expansion too large");
  Poly r;
  for (const auto& [m, c] : b) {
    numeric::checkpoint();
    r = add(r, mul_monomial(a, m, c));
  }
  return r;
}

RatFun add(const RatFun& a, const RatFun& b) {
  RatFun r;
  r.den = a.den;
  for (const auto& [f, k] : b.den) r.den[f] = std::max(r.den[f], k);
  auto lift = [&](const RatFun& x) {
    std::map<Poly, int, PolyLess> missing;
    for (const auto& [f, k] : r.den) {
      auto it = x.den.find(f);
      const int have = it == x.den.end() ? 0 : it->second;
      if (k > have) missing[f] = k - have;
    }
    return mul(x.num, den_product(missing));
  };
  r.num = add(lift(a), lift(b));
  return reduce(std::move(r));
}

RatFun mul(const RatFun& a, const RatFun& b) {
  RatFun r;
  r.num = mul(a.num, b.num);
  r.den = a.den;
  for (const auto& [f, k] : b.den) r.den[f] += k;
  return reduce(std::move(r));
}

RatFun neg(const RatFun& a) {
  RatFun r = a;
  r.num = scale(a.num, -1);
  return r;
}

RatFun inverse(const RatFun& a) {
  if (a.num.empty()) throw std::domain_error("division by zero");
  RatFun r;
  r.num = den_product(a.den);
  const Split s = split(a.num);
  r.num = mul_monomial(r.num, inverse(s.content), 1 / s.c);
  if (s.primitive.size() == 1) {
    const auto& [m, c] = *s.primitive.begin();
    r.num = mul_monomial(r.num, inverse(m), 1 / c);
  } else {
    r.den[s.primitive] += 1;
  }
  return reduce(std::move(r));
}

RatFun pow_int(const RatFun& a, long k) {
  if (k < 0) return pow_int(inverse(a), -k);
  RatFun r{constant_poly(1), {}};
  RatFun b = a;
  for (long n = k; n > 0; n >>= 1) {
    if (n & 1) r = mul(r, b);
    if (n > 1) b = mul(b, b);
  }
  return r;
}

namespace {

Expr atom_power(const Expr& a, const Rational& e) {
  if (e == 1) return a;
  if (a == euler_e()) return ir::pow(euler_e(), ir::num(e));
  if (is_exp_atom(a)) return ir::pow(euler_e(), ir::mul(ir::num(e), a.exponent()));
  return ir::pow(a, ir::num(e));
}

Expr term_expr(const Monomial& m, const Rational& c) {
  std::vector<Expr> f;
  if (c != 1 || m.empty()) f.push_back(ir::num(c));
  for (const auto& [a, e] : m) f.push_back(atom_power(a, e));
  return ir::mul(std::move(f));
}

}  // namespace

Expr to_expr(const Poly& p) {
  if (p.empty()) return ir::num(0);
  if (p.size() == 1) return term_expr(p.begin()->first, p.begin()->second);
  Monomial content;
  for (const auto& [a, e] : content_of(p))
    if (e < 0) content[a] = e;
  const Poly body = content.empty() ? p : mul_monomial(p, inverse(content), 1);
  std::vector<Expr> terms;
  for (const auto& [m, c] : body) terms.push_back(term_expr(m, c));
  Expr sum = ir::add(std::move(terms));
  if (content.empty()) return sum;
  return ir::mul(term_expr(content, 1), sum);
}

Expr to_expr(const RatFun& r) {
  Expr n = to_expr(r.num);
  if (r.den.empty()) return n;
  std::vector<Expr> f{n};
  for (const auto& [d, k] : r.den) f.push_back(ir::pow(to_expr(d), ir::num(-k)));
  return ir::mul(std::move(f));
}

}  // namespace texcas::symbolic::detail
