#include "kernel_util.hpp"

#include <algorithm>
#include <optional>

namespace texcas::numeric::special {

using namespace detail;

namespace {

constexpr long double kMaxGrowth = 1e8L;

// Index at which the series terminates because of a non-positive integer
// numerator parameter.
std::optional<long> terminating_degree(const std::vector<Complex>& a) {
  std::optional<long> best;
  for (const auto& x : a)
    if (is_nonpositive_integer(x)) {
      const long d = -nearest_integer(x);
      if (!best || d < *best) best = d;
    }
  return best;
}

Complex plain_series(const std::vector<Complex>& a, const std::vector<Complex>& b, Complex z) {
  const auto degree = terminating_degree(a);
  for (const auto& x : b)
    if (is_nonpositive_integer(x) && (!degree || *degree >= -nearest_integer(x)))
      pole("hypergeometric denominator parameter at a non-positive integer");
  Complex term = 1, sum = 1;
  long double biggest = 1;
  int small = 0;
  for (long k = 0; k < kMaxTerms; ++k) {
    checkpoint();
    if (degree && k >= *degree) return sum;
    Complex ratio = z / static_cast<long double>(k + 1);
    for (const auto& x : a) ratio *= x + static_cast<long double>(k);
    for (const auto& x : b) ratio /= x + static_cast<long double>(k);
    term *= ratio;
    sum += term;
    biggest = std::max(biggest, std::abs(term));
    if (!finite(sum)) throw EvalError(EvalError::Kind::Overflow, "hypergeometric series");
    small = std::abs(term) <= kEps * std::abs(sum) ? small + 1 : 0;
    if (small >= 2 && static_cast<long double>(k) > std::abs(z)) {
      if (biggest > kMaxGrowth * std::max(std::abs(sum), 1.0L)) no_convergence("hypergeometric series cancellation");
      return sum;
    }
  }
  no_convergence("hypergeometric series");
}

// Value and derivative of 2F1 at a point inside |z| <= 1/2.
std::pair<Complex, Complex> hyp2f1_seed(Complex a, Complex b, Complex c, Complex z) {
  const Complex f = plain_series({a, b}, {c}, z);
  const Complex df = a * b / c * plain_series({a + 1.0L, b + 1.0L}, {c + 1.0L}, z);
  return {f, df};
}

long double distance_to_singularities(Complex z) { return std::min(std::abs(z), std::abs(z - 1.0L)); }

// One Taylor step of the hypergeometric equation from z0 to z0 + h.
std::pair<Complex, Complex> taylor_step(Complex a, Complex b, Complex c, Complex z0, Complex f, Complex df, Complex h) {
  const Complex p0 = z0 * (1.0L - z0);
  const Complex p1 = 1.0L - 2.0L * z0;
  const long double p2 = -1;
  const Complex q0 = c - (a + b + 1.0L) * z0;
  const Complex q1 = -(a + b + 1.0L);
  const Complex r = -a * b;
  Complex t0 = f, t1 = df;
  Complex value = t0 + t1 * h;
  Complex deriv = t1;
  Complex hp = h;  // h^(n+1) for t_{n+2}
  int small = 0;
  for (long n = 0; n < 10000; ++n) {
    const long double nn = static_cast<long double>(n);
    const Complex t2 = -((p1 * nn * (nn + 1.0L) + q0 * (nn + 1.0L)) * t1 + (p2 * nn * (nn - 1.0L) + q1 * nn + r) * t0) /
                       (p0 * (nn + 2.0L) * (nn + 1.0L));
    deriv += (nn + 2.0L) * t2 * hp;
    hp *= h;
    const Complex add = t2 * hp;
    value += add;
    t0 = t1;
    t1 = t2;
    small = std::abs(add) <= kEps * std::abs(value) && std::abs((nn + 2.0L) * t2 * hp / h) <= kEps * std::abs(deriv) + kEps
                ? small + 1
                : 0;
    if (small >= 3) return {value, deriv};
  }
  no_convergence("hypergeometric continuation step");
}

Complex continue_2f1(Complex a, Complex b, Complex c, Complex z) {
  std::vector<Complex> path;
  const bool on_cut = std::abs(z.imag()) <= 0 && z.real() > 1;
  Complex start;
  if (on_cut) {
    note_branch_cut();
    start = Complex(0.35L, -0.35L);
    path = {Complex(1, -0.8L), Complex(z.real(), -0.8L), z};
  } else {
    start = z * (0.4L / std::abs(z));
    path = {z};
  }
  auto [f, df] = hyp2f1_seed(a, b, c, start);
  Complex here = start;
  int steps = 0;
  for (const auto& target : path) {
    while (here != target) {
      checkpoint();
      if (++steps > 20000) no_convergence("hypergeometric continuation");
      const Complex remaining = target - here;
      const long double reach = 0.5L * distance_to_singularities(here);
      Complex h = remaining;
      if (std::abs(remaining) > reach) h = remaining * (reach / std::abs(remaining));
      std::tie(f, df) = taylor_step(a, b, c, here, f, df, h);
      here = std::abs(remaining) > reach ? here + h : target;
    }
  }
  return f;
}

}  // namespace

Complex hyp_pfq(const std::vector<Complex>& a, const std::vector<Complex>& b, Complex z) {
  if (z == Complex(0)) return 1;
  const auto degree = terminating_degree(a);
  if (degree) return plain_series(a, b, z);
  if (a.size() == 2 && b.size() == 1) return hyp2f1(a[0], a[1], b[0], z);
  if (a.size() == 1 && b.size() == 1 && z.real() < 0)
    return checked(std::exp(z) * plain_series({b[0] - a[0]}, b, -z), "1F1");  // Kummer
  if (a.size() <= b.size()) return checked(plain_series(a, b, z), "pFq");
  if (a.size() == b.size() + 1 && std::abs(z) < 0.9L) return checked(plain_series(a, b, z), "pFq");
  throw EvalError(EvalError::Kind::NumericallyUnsupported, "pFq outside its disk of convergence");
}

Complex hyp2f1(Complex a, Complex b, Complex c, Complex z) {
  const auto degree = terminating_degree({a, b});
  if (is_nonpositive_integer(c) && (!degree || *degree >= -nearest_integer(c)))
    pole("2F1 with c at a non-positive integer");
  if (degree || z == Complex(0)) return plain_series({a, b}, {c}, z);
  if (z == Complex(1)) {
    if ((c - a - b).real() > 0) return gamma(c) * gamma(c - a - b) * rgamma(c - a) * rgamma(c - b);
    pole("2F1 at z = 1");
  }
  if (std::abs(z) <= 0.5L) return checked(plain_series({a, b}, {c}, z), "2F1");
  const Complex w = z / (z - 1.0L);
  if (std::abs(w) <= 0.5L) return checked(pow(1.0L - z, -a) * plain_series({a, c - b}, {c}, w), "2F1");
  return checked(continue_2f1(a, b, c, z), "2F1");
}

}  // namespace texcas::numeric::special
