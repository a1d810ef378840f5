#include "kernel_util.hpp"

namespace texcas::numeric::special {

using namespace detail;

namespace {

constexpr long double kMaxGrowth = 1e8L;

// (z/2)^nu sum_k s^k (z^2/4)^k / (k! Gamma(nu+k+1)), s = -1 for J and +1 for I.
Complex power_series(Complex nu, Complex z, long double sign) {
  const Complex q = sign * z * z / 4.0L;
  Complex term = rgamma(nu + 1.0L);
  Complex sum = term;
  long double biggest = std::abs(term);
  for (int k = 0; k < kMaxTerms; ++k) {
    checkpoint();
    term *= q / ((k + 1.0L) * (nu + static_cast<long double>(k) + 1.0L));
    sum += term;
    biggest = std::max(biggest, std::abs(term));
    if (std::abs(term) <= kEps * std::abs(sum) && k > std::abs(z)) break;
    if (k + 1 == kMaxTerms) no_convergence("Bessel series");
  }
  if (biggest > kMaxGrowth * std::max(std::abs(sum), 1.0L)) no_convergence("Bessel series cancellation");
  if (z == Complex(0)) {
    if (nu == Complex(0)) return sum;
    if (nu.real() > 0) return 0;
    pole("Bessel function at 0");
  }
  return sum * pow(z / 2.0L, nu);
}

// The digamma-weighted series shared by Y_n and K_n:
// sum_k (psi(k+1) + psi(n+k+1)) q^k / (k! (n+k)!)
Complex psi_series(long n, Complex q) {
  long double hk = 0, hnk = 0;
  for (long j = 1; j <= n; ++j) hnk += 1.0L / j;
  Complex coeff = 1;
  for (long j = 1; j <= n; ++j) coeff /= static_cast<long double>(j);
  Complex sum = (2 * -kEulerGamma + hk + hnk) * coeff;
  long double biggest = std::abs(sum);
  for (long k = 1; k < kMaxTerms; ++k) {
    checkpoint();
    hk += 1.0L / k;
    hnk += 1.0L / (n + k);
    coeff *= q / (static_cast<long double>(k) * static_cast<long double>(n + k));
    const Complex term = (2 * -kEulerGamma + hk + hnk) * coeff;
    sum += term;
    biggest = std::max(biggest, std::abs(term));
    if (std::abs(term) <= kEps * std::abs(sum) && k > std::abs(q)) break;
  }
  if (biggest > kMaxGrowth * std::max(std::abs(sum), 1.0L)) no_convergence("Bessel series cancellation");
  return sum;
}

Complex bessel_y_integer(long n, Complex z) {
  if (n < 0) return (n % 2 ? -1.0L : 1.0L) * bessel_y_integer(-n, z);
  if (z == Complex(0)) pole("Y at 0");
  const Complex half = z / 2.0L;
  Complex finite = 0;
  if (n > 0) {
    // sum_{k<n} (n-k-1)!/k! (z^2/4)^k
    Complex term = 1;
    for (long j = 1; j < n; ++j) term *= static_cast<long double>(j);  // (n-1)!/0!
    for (long k = 0; k < n; ++k) {
      finite += term;
      if (k + 1 < n) term *= (z * z / 4.0L) / (static_cast<long double>(k + 1) * static_cast<long double>(n - k - 1));
    }
  }
  const Complex jn = bessel_j(static_cast<long double>(n), z);
  return -pow(half, static_cast<long double>(-n)) / kPi * finite + 2.0L / kPi * log(half) * jn -
         pow(half, static_cast<long double>(n)) / kPi * psi_series(n, -z * z / 4.0L);
}

Complex bessel_k_integer(long n, Complex z) {
  if (n < 0) n = -n;
  if (z == Complex(0)) pole("K at 0");
  const Complex half = z / 2.0L;
  Complex finite = 0;
  if (n > 0) {
    Complex term = 1;
    for (long j = 1; j < n; ++j) term *= static_cast<long double>(j);
    for (long k = 0; k < n; ++k) {
      finite += term;
      if (k + 1 < n) term *= (-z * z / 4.0L) / (static_cast<long double>(k + 1) * static_cast<long double>(n - k - 1));
    }
  }
  const long double sgn = n % 2 ? -1.0L : 1.0L;
  const Complex in = bessel_i(static_cast<long double>(n), z);
  return 0.5L * pow(half, static_cast<long double>(-n)) * finite - sgn * log(half) * in +
         sgn * 0.5L * pow(half, static_cast<long double>(n)) * psi_series(n, z * z / 4.0L);
}

}  // namespace

Complex bessel_j(Complex nu, Complex z) {
  if (is_integer(nu, 0) && nu.real() < 0) {
    const long n = nearest_integer(nu);
    return (n % 2 ? -1.0L : 1.0L) * bessel_j(-nu, z);
  }
  return checked(power_series(nu, z, -1), "BesselJ");
}

Complex bessel_i(Complex nu, Complex z) {
  if (is_integer(nu, 0) && nu.real() < 0) return bessel_i(-nu, z);
  return checked(power_series(nu, z, 1), "BesselI");
}

Complex bessel_y(Complex nu, Complex z) {
  if (is_integer(nu, 0)) return checked(bessel_y_integer(nearest_integer(nu), z), "BesselY");
  const Complex s = std::sin(nu * kPi);
  return checked((bessel_j(nu, z) * std::cos(nu * kPi) - bessel_j(-nu, z)) / s, "BesselY");
}

Complex bessel_k(Complex nu, Complex z) {
  if (is_integer(nu, 0)) return checked(bessel_k_integer(nearest_integer(nu), z), "BesselK");
  const Complex s = std::sin(nu * kPi);
  return checked(kPi / 2.0L * (bessel_i(-nu, z) - bessel_i(nu, z)) / s, "BesselK");
}

}  // namespace texcas::numeric::special
