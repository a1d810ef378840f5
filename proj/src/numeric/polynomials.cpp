#include "kernel_util.hpp"

namespace texcas::numeric::special {

using namespace detail;

namespace {

bool degree_of(Complex n, long& out) {
  if (!is_integer(n) || n.real() < 0 || n.real() > 100000) return false;
  out = nearest_integer(n);
  return true;
}

// Explicit finite sum, used when the three-term recurrence degenerates.
Complex jacobi_sum(long n, Complex alpha, Complex beta, Complex x) {
  const Complex y = (x - 1.0L) / 2.0L;
  Complex total = 0;
  Complex yl = 1;
  for (long l = 0; l <= n; ++l) {
    Complex t = pochhammer(static_cast<long double>(n) + alpha + beta + 1.0L, static_cast<long double>(l)) *
                pochhammer(alpha + static_cast<long double>(l) + 1.0L, static_cast<long double>(n - l));
    for (long j = 2; j <= l; ++j) t /= static_cast<long double>(j);
    for (long j = 2; j <= n - l; ++j) t /= static_cast<long double>(j);
    total += t * yl;
    yl *= y;
  }
  return total;
}

}  // namespace

Complex jacobi_p(Complex n, Complex alpha, Complex beta, Complex x) {
  long deg = 0;
  if (!degree_of(n, deg)) {
    if (is_nonpositive_integer(alpha + 1.0L)) pole("Jacobi polynomial with alpha a negative integer");
    return gamma(n + alpha + 1.0L) * rgamma(n + 1.0L) * rgamma(alpha + 1.0L) *
           hyp2f1(-n, n + alpha + beta + 1.0L, alpha + 1.0L, (1.0L - x) / 2.0L);
  }
  Complex p0 = 1;
  if (deg == 0) return p0;
  Complex p1 = (alpha + 1.0L) + (alpha + beta + 2.0L) * (x - 1.0L) / 2.0L;
  for (long k = 2; k <= deg; ++k) {
    checkpoint();
    const long double kk = static_cast<long double>(k);
    const Complex s = 2.0L * kk + alpha + beta;
    const Complex lead = 2.0L * kk * (kk + alpha + beta) * (s - 2.0L);
    if (std::abs(lead) < 1e-12L) return jacobi_sum(deg, alpha, beta, x);
    const Complex p2 = ((s - 1.0L) * (s * (s - 2.0L) * x + alpha * alpha - beta * beta) * p1 -
                        2.0L * (kk + alpha - 1.0L) * (kk + beta - 1.0L) * s * p0) /
                       lead;
    p0 = p1;
    p1 = p2;
  }
  return checked(p1, "JacobiP");
}

Complex laguerre_l(Complex n, Complex alpha, Complex x) {
  long deg = 0;
  if (!degree_of(n, deg)) {
    if (is_nonpositive_integer(alpha + 1.0L)) pole("Laguerre function with alpha a negative integer");
    return gamma(n + alpha + 1.0L) * rgamma(n + 1.0L) * rgamma(alpha + 1.0L) * hyp_pfq({-n}, {alpha + 1.0L}, x);
  }
  Complex l0 = 1;
  if (deg == 0) return l0;
  Complex l1 = 1.0L + alpha - x;
  for (long k = 1; k < deg; ++k) {
    checkpoint();
    const long double kk = static_cast<long double>(k);
    const Complex l2 = ((2.0L * kk + alpha + 1.0L - x) * l1 - (kk + alpha) * l0) / (kk + 1.0L);
    l0 = l1;
    l1 = l2;
  }
  return checked(l1, "LaguerreL");
}

Complex hermite_h(Complex n, Complex x) {
  long deg = 0;
  if (!degree_of(n, deg)) throw EvalError(EvalError::Kind::NumericallyUnsupported, "HermiteH of non-integer degree");
  Complex h0 = 1;
  if (deg == 0) return h0;
  Complex h1 = 2.0L * x;
  for (long k = 1; k < deg; ++k) {
    checkpoint();
    const Complex h2 = 2.0L * x * h1 - 2.0L * static_cast<long double>(k) * h0;
    h0 = h1;
    h1 = h2;
  }
  return checked(h1, "HermiteH");
}

Complex chebyshev_t(Complex n, Complex x) {
  if (is_integer(n) && n.real() < 0) return chebyshev_t(-n, x);
  long deg = 0;
  if (!degree_of(n, deg)) return hyp2f1(-n, n, 0.5L, (1.0L - x) / 2.0L);
  Complex t0 = 1;
  if (deg == 0) return t0;
  Complex t1 = x;
  for (long k = 1; k < deg; ++k) {
    checkpoint();
    const Complex t2 = 2.0L * x * t1 - t0;
    t0 = t1;
    t1 = t2;
  }
  return checked(t1, "ChebyT");
}

Complex chebyshev_u(Complex n, Complex x) {
  if (is_integer(n) && n.real() < 0) {
    if (nearest_integer(n) == -1) return 0;
    return -chebyshev_u(-n - 2.0L, x);
  }
  long deg = 0;
  if (!degree_of(n, deg)) return (n + 1.0L) * hyp2f1(-n, n + 2.0L, 1.5L, (1.0L - x) / 2.0L);
  Complex u0 = 1;
  if (deg == 0) return u0;
  Complex u1 = 2.0L * x;
  for (long k = 1; k < deg; ++k) {
    checkpoint();
    const Complex u2 = 2.0L * x * u1 - u0;
    u0 = u1;
    u1 = u2;
  }
  return checked(u1, "ChebyU");
}

Complex legendre_p(Complex n, Complex x) {
  if (is_integer(n) && n.real() < 0) return legendre_p(-n - 1.0L, x);
  long deg = 0;
  if (!degree_of(n, deg)) return hyp2f1(-n, n + 1.0L, 1.0L, (1.0L - x) / 2.0L);
  Complex p0 = 1;
  if (deg == 0) return p0;
  Complex p1 = x;
  for (long k = 1; k < deg; ++k) {
    checkpoint();
    const long double kk = static_cast<long double>(k);
    const Complex p2 = ((2.0L * kk + 1.0L) * x * p1 - kk * p0) / (kk + 1.0L);
    p0 = p1;
    p1 = p2;
  }
  return checked(p1, "LegendreP");
}

}  // namespace texcas::numeric::special
