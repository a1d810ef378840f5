#include "texcas/ir/functions.hpp"

namespace texcas::ir {

const std::vector<FunctionInfo>& function_registry() {
  static const std::vector<FunctionInfo> registry = {
      {"sin", 0, 1, "sin(a0)", "sine"},
      {"cos", 0, 1, "cos(a0)", "cosine"},
      {"tan", 0, 1, "tan(a0)", "tangent"},
      {"cot", 0, 1, "cot(a0)", "cotangent"},
      {"sec", 0, 1, "sec(a0)", "secant"},
      {"csc", 0, 1, "csc(a0)", "cosecant"},
      {"sinh", 0, 1, "sinh(a0)", "hyperbolic sine"},
      {"cosh", 0, 1, "cosh(a0)", "hyperbolic cosine"},
      {"tanh", 0, 1, "tanh(a0)", "hyperbolic tangent"},
      {"coth", 0, 1, "coth(a0)", "hyperbolic cotangent"},
      {"sech", 0, 1, "sech(a0)", "hyperbolic secant"},
      {"csch", 0, 1, "csch(a0)", "hyperbolic cosecant"},
      {"asin", 0, 1, "arcsin(a0)", "principal inverse sine"},
      {"acos", 0, 1, "arccos(a0)", "principal inverse cosine"},
      {"atan", 0, 1, "arctan(a0)", "principal inverse tangent"},
      {"asinh", 0, 1, "arcsinh(a0)", "principal inverse hyperbolic sine"},
      {"acosh", 0, 1, "arccosh(a0)", "principal inverse hyperbolic cosine"},
      {"atanh", 0, 1, "arctanh(a0)", "principal inverse hyperbolic tangent"},
      {"log", 0, 1, "ln(a0)", "principal natural logarithm"},
      {"Re", 0, 1, "Re(a0)", "real part"},
      {"Im", 0, 1, "Im(a0)", "imaginary part"},
      {"abs", 0, 1, "abs(a0)", "absolute value"},
      {"GammaFn", 0, 1, "GAMMA(a0)", "Euler gamma function"},
      {"Digamma", 0, 1, "Psi(a0)", "digamma function"},
      {"erf", 0, 1, "erf(a0)", "error function"},
      {"erfc", 0, 1, "erfc(a0)", "complementary error function"},
      {"factorial", 0, 1, "factorial(a0)", "factorial"},
      {"binomial", 0, 2, "binomial(a0, a1)", "binomial coefficient"},
      {"Pochhammer", 0, 2, "pochhammer(a0, a1)", "rising factorial"},
      {"BesselJ", 1, 1, "BesselJ(p0, a0)", "Bessel function of the first kind"},
      {"BesselY", 1, 1, "BesselY(p0, a0)", "Bessel function of the second kind"},
      {"BesselI", 1, 1, "BesselI(p0, a0)", "modified Bessel function of the first kind"},
      {"BesselK", 1, 1, "BesselK(p0, a0)", "modified Bessel function of the second kind"},
      {"Hyp0F1", 0, 2, "hypergeom([], [a0], a1)", "confluent hypergeometric limit function"},
      {"Hyp1F1", 0, 3, "hypergeom([a0], [a1], a2)", "Kummer function M(a,b,z)"},
      {"Hyp2F1", 0, 4, "hypergeom([a0, a1], [a2], a3)", "Gauss hypergeometric function"},
      // params [p, q]; args a_1..a_p, b_1..b_q, z
      {"HypPFQ", 2, -1, "hypergeom", "generalized hypergeometric function"},
      {"JacobiP", 3, 1, "JacobiP(p2, p0, p1, a0)", "Jacobi polynomial; params alpha, beta, n"},
      {"LaguerreL", 2, 1, "LaguerreL(p1, p0, a0)", "generalized Laguerre polynomial; params alpha, n"},
      {"HermiteH", 1, 1, "HermiteH(p0, a0)", "Hermite polynomial"},
      {"ChebyT", 1, 1, "ChebyshevT(p0, a0)", "Chebyshev polynomial of the first kind"},
      {"ChebyU", 1, 1, "ChebyshevU(p0, a0)", "Chebyshev polynomial of the second kind"},
      {"LegendreP", 1, 1, "LegendreP(p0, a0)", "Legendre polynomial"},
      {"EllipticK", 0, 1, "EllipticK(a0)", "complete elliptic integral K, modulus convention"},
      {"EllipticE", 0, 1, "EllipticE(a0)", "complete elliptic integral E, modulus convention"},
      {"EllipticCK", 0, 1, "EllipticCK(a0)", "complementary K'(k) = K(sqrt(1-k^2))"},
      {"EllipticCE", 0, 1, "EllipticCE(a0)", "complementary E'(k) = E(sqrt(1-k^2))"},
      {"JacobiSN", 0, 2, "JacobiSN(a0, a1)", "Jacobian elliptic function sn, modulus convention"},
      {"MathieuCe", 1, 2, "", "Mathieu function ce; no dialect counterpart with the same parameters"},
      {"qGenHyper", 2, -1, "", "basic hypergeometric function"},
  };
  return registry;
}

const FunctionInfo* find_function(std::string_view id) {
  for (const auto& f : function_registry())
    if (f.id == id) return &f;
  return nullptr;
}

}  // namespace texcas::ir
