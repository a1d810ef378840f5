#include "kernel_util.hpp"

#include <array>

namespace texcas::numeric::special {

using namespace detail;

namespace {

// B_{2k} for k = 1..11
constexpr std::array<long double, 11> kBernoulli{
    1.0L / 6,     -1.0L / 30,        1.0L / 42,      -1.0L / 30,          5.0L / 66,        -691.0L / 2730,
    7.0L / 6,     -3617.0L / 510,    43867.0L / 798, -174611.0L / 330,    854513.0L / 138};

constexpr long double kShift = 20;

// Stirling series for log Gamma(w), |w| >= 20.
Complex stirling_lgamma(Complex w) {
  Complex s = (w - 0.5L) * std::log(w) - w + 0.5L * std::log(2 * kPi);
  const Complex w2 = w * w;
  Complex wp = w;
  for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
    const long double n = 2.0L * static_cast<long double>(k + 1);
    s += kBernoulli[k] / (n * (n - 1) * wp);
    wp *= w2;
  }
  return s;
}

}  // namespace

bool is_integer(Complex z, long double tol) {
  return std::abs(z.imag()) <= tol && std::abs(z.real() - std::round(z.real())) <= tol;
}

bool is_nonpositive_integer(Complex z) {
  return z.imag() == 0 && z.real() <= 0 && z.real() == std::round(z.real());
}

Complex log(Complex z) {
  if (z == Complex(0)) pole("log(0)");
  if (on_negative_real_axis(z)) note_branch_cut();
  return std::log(z);
}

Complex sqrt(Complex z) {
  if (on_negative_real_axis(z)) note_branch_cut();
  return std::sqrt(z);
}

Complex pow(Complex base, Complex exponent) {
  if (exponent.imag() == 0 && exponent.real() == std::round(exponent.real()) && std::abs(exponent.real()) <= 1024) {
    long n = std::lround(exponent.real());
    if (base == Complex(0)) {
      if (n > 0) return 0;
      if (n == 0) return 1;
      pole("0 to a negative power");
    }
    const bool invert = n < 0;
    unsigned long m = static_cast<unsigned long>(invert ? -n : n);
    Complex result = 1, b = base;
    while (m) {
      if (m & 1U) result *= b;
      b *= b;
      m >>= 1U;
    }
    return checked(invert ? Complex(1) / result : result, "power");
  }
  if (base == Complex(0)) {
    if (exponent.real() > 0) return 0;
    pole("0 to a non-positive power");
  }
  if (on_negative_real_axis(base)) note_branch_cut();
  return checked(std::exp(exponent * std::log(base)), "power");
}

Complex gamma(Complex z) {
  if (is_nonpositive_integer(z)) pole("Gamma at a non-positive integer");
  if (z.real() < 0.5L) {
    const Complex s = std::sin(kPi * z);
    return checked(kPi / (s * gamma(1.0L - z)), "Gamma");
  }
  Complex prod = 1;
  Complex w = z;
  while (std::abs(w) < kShift) {
    prod *= w;
    w += 1.0L;
  }
  return checked(std::exp(stirling_lgamma(w)) / prod, "Gamma");
}

Complex rgamma(Complex z) {
  if (is_nonpositive_integer(z)) return 0;
  return 1.0L / gamma(z);
}

Complex digamma(Complex z) {
  if (is_nonpositive_integer(z)) pole("digamma at a non-positive integer");
  if (z.real() < 0.5L) return digamma(1.0L - z) - kPi / std::tan(kPi * z);
  Complex acc = 0;
  Complex w = z;
  while (std::abs(w) < kShift) {
    acc -= 1.0L / w;
    w += 1.0L;
  }
  Complex s = std::log(w) - 0.5L / w;
  const Complex w2 = w * w;
  Complex wp = w2;
  for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
    const long double n = 2.0L * static_cast<long double>(k + 1);
    s -= kBernoulli[k] / (n * wp);
    wp *= w2;
  }
  return acc + s;
}

Complex pochhammer(Complex a, Complex n) {
  if (is_integer(n) && n.real() >= 0 && n.real() <= 1000) {
    Complex p = 1;
    const long m = nearest_integer(n);
    for (long k = 0; k < m; ++k) p *= a + static_cast<long double>(k);
    return p;
  }
  if (is_nonpositive_integer(a + n) && !is_nonpositive_integer(a)) pole("Pochhammer");
  return gamma(a + n) * rgamma(a);
}

Complex binomial(Complex n, Complex k) {
  if (is_integer(k) && k.real() >= 0 && k.real() <= 1000) {
    Complex p = 1;
    const long m = nearest_integer(k);
    for (long j = 0; j < m; ++j) p = p * (n - static_cast<long double>(j)) / static_cast<long double>(j + 1);
    return p;
  }
  if (is_integer(k) && k.real() < 0) return 0;
  if (is_nonpositive_integer(n + 1.0L)) pole("binomial with negative integer top");
  return gamma(n + 1.0L) * rgamma(k + 1.0L) * rgamma(n - k + 1.0L);
}

Complex erf(Complex z) {
  if (std::abs(z) <= 3) {
    // 2/sqrt(pi) sum (-1)^n z^(2n+1) / (n! (2n+1))
    const Complex z2 = z * z;
    Complex term = z, sum = z;
    for (int n = 1; n < kMaxTerms; ++n) {
      term *= -z2 / static_cast<long double>(n);
      const Complex add = term / static_cast<long double>(2 * n + 1);
      sum += add;
      if (std::abs(add) <= kEps * std::abs(sum)) return 2.0L / std::sqrt(kPi) * sum;
    }
    no_convergence("erf series");
  }
  return 1.0L - erfc(z);
}

Complex erfc(Complex z) {
  if (std::abs(z) <= 3) return 1.0L - erf(z);
  if (z.real() < 0) return 2.0L - erfc(-z);
  // continued fraction erfc z = exp(-z^2)/sqrt(pi) * 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
  const long double tiny = 1e-300L;
  Complex f = z, c = z, d = 0;
  for (int n = 1; n < kMaxTerms; ++n) {
    checkpoint();
    const long double an = 0.5L * n;
    d = z + an * d;
    if (d == Complex(0)) d = tiny;
    c = z + an / c;
    if (c == Complex(0)) c = tiny;
    d = 1.0L / d;
    const Complex delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0L) <= kEps) return checked(std::exp(-z * z) / (std::sqrt(kPi) * f), "erfc");
  }
  no_convergence("erfc continued fraction");
}

}  // namespace texcas::numeric::special
