#pragma once

#include "texcas/numeric/special.hpp"

#include <cmath>
#include <limits>

namespace texcas::numeric::special::detail {

inline constexpr long double kEps = std::numeric_limits<long double>::epsilon();
inline constexpr int kMaxTerms = 100000;

[[noreturn]] inline void pole(const std::string& what) {
  throw EvalError(EvalError::Kind::PoleOrSingularity, what);
}
[[noreturn]] inline void no_convergence(const std::string& what) {
  throw EvalError(EvalError::Kind::ConvergenceFailure, what);
}

inline bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline Complex checked(Complex z, const char* what) {
  if (!finite(z)) throw EvalError(EvalError::Kind::Overflow, what);
  return z;
}

inline bool on_negative_real_axis(Complex z) { return z.imag() == 0 && z.real() < 0; }

inline long nearest_integer(Complex z) { return std::lround(z.real()); }

}  // namespace texcas::numeric::special::detail
