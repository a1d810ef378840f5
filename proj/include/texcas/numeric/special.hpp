#pragma once

// Special-function kernel in complex extended precision. Failures are
// reported as EvalError.

#include "texcas/numeric/errors.hpp"

#include <complex>
#include <vector>

namespace texcas::numeric::special {

using Complex = std::complex<long double>;

inline constexpr long double kPi = 3.141592653589793238462643383279502884L;
inline constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;

bool is_nonpositive_integer(Complex z);
bool is_integer(Complex z, long double tol = 1e-12L);

// Principal branches; each notes a branch cut when evaluated on one.
Complex log(Complex z);
Complex pow(Complex base, Complex exponent);
Complex sqrt(Complex z);

Complex gamma(Complex z);
Complex rgamma(Complex z);  // 1/Gamma, zero at the poles
Complex digamma(Complex z);
Complex pochhammer(Complex a, Complex n);
Complex binomial(Complex n, Complex k);

Complex erf(Complex z);
Complex erfc(Complex z);

Complex bessel_j(Complex nu, Complex z);
Complex bessel_y(Complex nu, Complex z);
Complex bessel_i(Complex nu, Complex z);
Complex bessel_k(Complex nu, Complex z);

// Generalized hypergeometric series; 2F1 beyond the unit disk is continued
// along a path in the cut plane, taking the lower side of [1, inf).
Complex hyp_pfq(const std::vector<Complex>& a, const std::vector<Complex>& b, Complex z);
Complex hyp2f1(Complex a, Complex b, Complex c, Complex z);

Complex jacobi_p(Complex n, Complex alpha, Complex beta, Complex x);
Complex laguerre_l(Complex n, Complex alpha, Complex x);
Complex hermite_h(Complex n, Complex x);
Complex chebyshev_t(Complex n, Complex x);
Complex chebyshev_u(Complex n, Complex x);
Complex legendre_p(Complex n, Complex x);

// Complete elliptic integrals of modulus k (parameter m = k^2).
Complex elliptic_k(Complex k);
Complex elliptic_e(Complex k);
Complex elliptic_k_param(Complex m);
Complex elliptic_e_param(Complex m);

}  // namespace texcas::numeric::special
