#include "kernel_util.hpp"

namespace texcas::numeric::special {

using namespace detail;

namespace {

struct AgmResult {
  Complex mean;
  Complex weighted;  // sum 2^(n-1) c_n^2 for n >= 1
};

AgmResult agm(Complex a, Complex g) {
  Complex weighted = 0;
  long double scale = 1;  // 2^(n-1) for the next c_n
  for (int n = 0; n < 200; ++n) {
    checkpoint();
    const Complex c = (a - g) / 2.0L;
    weighted += scale * c * c;
    scale *= 2;
    if (std::abs(c) <= kEps * std::abs(a)) return {a, weighted};
    const Complex next_a = (a + g) / 2.0L;
    Complex next_g = std::sqrt(a * g);
    if (std::abs(next_a - next_g) > std::abs(next_a + next_g)) next_g = -next_g;
    a = next_a;
    g = next_g;
  }
  no_convergence("arithmetic-geometric mean");
}

}  // namespace

Complex elliptic_k_param(Complex m) {
  if (m == Complex(1)) pole("K at m = 1");
  if (m.imag() == 0 && m.real() > 1) note_branch_cut();
  const auto r = agm(1, std::sqrt(1.0L - m));
  return checked(kPi / (2.0L * r.mean), "EllipticK");
}

Complex elliptic_e_param(Complex m) {
  if (m == Complex(1)) return 1;
  if (m.imag() == 0 && m.real() > 1) note_branch_cut();
  const auto r = agm(1, std::sqrt(1.0L - m));
  const Complex k = kPi / (2.0L * r.mean);
  return checked(k * (1.0L - m / 2.0L - r.weighted), "EllipticE");
}

Complex elliptic_k(Complex k) { return elliptic_k_param(k * k); }
Complex elliptic_e(Complex k) { return elliptic_e_param(k * k); }

}  // namespace texcas::numeric::special
