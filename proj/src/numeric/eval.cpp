#include "texcas/numeric.hpp"

#include "kernel_util.hpp"

#include <array>
#include <functional>
#include <unordered_map>

namespace texcas::numeric {

namespace sp = special;
using ir::BigOpKind;
using ir::ConstantKind;
using ir::Expr;
using ir::ExprKind;

namespace {

[[noreturn]] void unsupported(const std::string& what) {
  throw EvalError(EvalError::Kind::NumericallyUnsupported, what);
}

long double to_ld(const Rational& r) {
  return numerator(r).convert_to<long double>() / denominator(r).convert_to<long double>();
}

Complex reciprocal(Complex z, const char* what) {
  if (z == Complex(0)) sp::detail::pole(std::string("division by zero in ") + what);
  return 1.0L / z;
}

using Kernel = std::function<Complex(const std::vector<Complex>&, const std::vector<Complex>&)>;

const std::unordered_map<std::string, Kernel>& kernels() {
  static const std::unordered_map<std::string, Kernel> table = [] {
    std::unordered_map<std::string, Kernel> k;
    auto unary = [&](const char* id, Complex (*f)(Complex)) {
      k[id] = [f](const std::vector<Complex>&, const std::vector<Complex>& a) { return f(a[0]); };
    };
    unary("sin", [](Complex z) { return std::sin(z); });
    unary("cos", [](Complex z) { return std::cos(z); });
    unary("tan", [](Complex z) { return std::sin(z) * reciprocal(std::cos(z), "tan"); });
    unary("cot", [](Complex z) { return std::cos(z) * reciprocal(std::sin(z), "cot"); });
    unary("sec", [](Complex z) { return reciprocal(std::cos(z), "sec"); });
    unary("csc", [](Complex z) { return reciprocal(std::sin(z), "csc"); });
    unary("sinh", [](Complex z) { return std::sinh(z); });
    unary("cosh", [](Complex z) { return std::cosh(z); });
    unary("tanh", [](Complex z) { return std::sinh(z) * reciprocal(std::cosh(z), "tanh"); });
    unary("coth", [](Complex z) { return std::cosh(z) * reciprocal(std::sinh(z), "coth"); });
    unary("sech", [](Complex z) { return reciprocal(std::cosh(z), "sech"); });
    unary("csch", [](Complex z) { return reciprocal(std::sinh(z), "csch"); });
    unary("asin", [](Complex z) {
      if (z.imag() == 0 && std::abs(z.real()) > 1) note_branch_cut();
      return std::asin(z);
    });
    unary("acos", [](Complex z) {
      if (z.imag() == 0 && std::abs(z.real()) > 1) note_branch_cut();
      return std::acos(z);
    });
    unary("atan", [](Complex z) {
      if (z.real() == 0 && std::abs(z.imag()) >= 1) {
        if (std::abs(z.imag()) == 1) sp::detail::pole("atan at +-i");
        note_branch_cut();
      }
      return std::atan(z);
    });
    unary("asinh", [](Complex z) {
      if (z.real() == 0 && std::abs(z.imag()) > 1) note_branch_cut();
      return std::asinh(z);
    });
    unary("acosh", [](Complex z) {
      if (z.imag() == 0 && z.real() < 1) note_branch_cut();
      return std::acosh(z);
    });
    unary("atanh", [](Complex z) {
      if (z.imag() == 0 && std::abs(z.real()) >= 1) {
        if (std::abs(z.real()) == 1) sp::detail::pole("atanh at +-1");
        note_branch_cut();
      }
      return std::atanh(z);
    });
    unary("log", sp::log);
    unary("Re", [](Complex z) { return Complex(z.real()); });
    unary("Im", [](Complex z) { return Complex(z.imag()); });
    unary("abs", [](Complex z) { return Complex(std::abs(z)); });
    unary("GammaFn", sp::gamma);
    unary("Digamma", sp::digamma);
    unary("erf", sp::erf);
    unary("erfc", sp::erfc);
    unary("factorial", [](Complex z) { return sp::gamma(z + 1.0L); });
    unary("EllipticK", sp::elliptic_k);
    unary("EllipticE", sp::elliptic_e);
    unary("EllipticCK", [](Complex k) { return sp::elliptic_k_param(1.0L - k * k); });
    unary("EllipticCE", [](Complex k) { return sp::elliptic_e_param(1.0L - k * k); });
    k["binomial"] = [](const auto&, const auto& a) { return sp::binomial(a[0], a[1]); };
    k["Pochhammer"] = [](const auto&, const auto& a) { return sp::pochhammer(a[0], a[1]); };
    k["BesselJ"] = [](const auto& p, const auto& a) { return sp::bessel_j(p[0], a[0]); };
    k["BesselY"] = [](const auto& p, const auto& a) { return sp::bessel_y(p[0], a[0]); };
    k["BesselI"] = [](const auto& p, const auto& a) { return sp::bessel_i(p[0], a[0]); };
    k["BesselK"] = [](const auto& p, const auto& a) { return sp::bessel_k(p[0], a[0]); };
    k["Hyp0F1"] = [](const auto&, const auto& a) { return sp::hyp_pfq({}, {a[0]}, a[1]); };
    k["Hyp1F1"] = [](const auto&, const auto& a) { return sp::hyp_pfq({a[0]}, {a[1]}, a[2]); };
    k["Hyp2F1"] = [](const auto&, const auto& a) { return sp::hyp2f1(a[0], a[1], a[2], a[3]); };
    k["HypPFQ"] = [](const auto& p, const auto& a) {
      const auto np = static_cast<std::size_t>(std::lround(p[0].real()));
      const auto nq = static_cast<std::size_t>(std::lround(p[1].real()));
      if (a.size() != np + nq + 1) unsupported("HypPFQ argument count");
      std::vector<Complex> as(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(np));
      std::vector<Complex> bs(a.begin() + static_cast<std::ptrdiff_t>(np), a.end() - 1);
      return sp::hyp_pfq(as, bs, a.back());
    };
    k["JacobiP"] = [](const auto& p, const auto& a) { return sp::jacobi_p(p[2], p[0], p[1], a[0]); };
    k["LaguerreL"] = [](const auto& p, const auto& a) { return sp::laguerre_l(p[1], p[0], a[0]); };
    k["HermiteH"] = [](const auto& p, const auto& a) { return sp::hermite_h(p[0], a[0]); };
    k["ChebyT"] = [](const auto& p, const auto& a) { return sp::chebyshev_t(p[0], a[0]); };
    k["ChebyU"] = [](const auto& p, const auto& a) { return sp::chebyshev_u(p[0], a[0]); };
    k["LegendreP"] = [](const auto& p, const auto& a) { return sp::legendre_p(p[0], a[0]); };
    return k;
  }();
  return table;
}

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr std::array<long double, 8> kKronrodNodes{
    0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L, 0.864864423359769072789712788640926L,
    0.741531185599394439863864773280788L, 0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L, 0.0L};
constexpr std::array<long double, 8> kKronrodWeights{
    0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L, 0.104790010322250183839876322541518L,
    0.140653259715525918745189590510238L, 0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
constexpr std::array<long double, 4> kGaussWeights{
    0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L, 0.381830050505118944950369775488975L,
    0.417959183673469387755102040816327L};

class Evaluator {
public:
  explicit Evaluator(Environment env) : env_(std::move(env)) {}

  Complex eval(const Expr& e) {
    checkpoint();
    switch (e.kind()) {
      case ExprKind::Number: return to_ld(e.value());
      case ExprKind::Constant: return constant(e.constant());
      case ExprKind::Variable: {
        auto it = env_.find(e.name());
        if (it == env_.end()) unsupported("unassigned variable " + e.name());
        return it->second;
      }
      case ExprKind::Add: {
        Complex s = 0;
        for (const auto& c : e.children()) s += eval(c);
        return sp::detail::checked(s, "sum");
      }
      case ExprKind::Mul: {
        Complex p = 1;
        for (const auto& c : e.children()) p *= eval(c);
        return sp::detail::checked(p, "product");
      }
      case ExprKind::Neg: return -eval(e.operand());
      case ExprKind::Pow: return power(e.base(), e.exponent());
      case ExprKind::Function: return function(e);
      case ExprKind::Derivative: return derivative(e.operand(), e.name(), e.order());
      case ExprKind::BigOp: return bigop(e);
    }
    unsupported("expression kind");
  }

private:
  Environment env_;

  static Complex constant(ConstantKind c) {
    switch (c) {
      case ConstantKind::ImaginaryUnit: return {0, 1};
      case ConstantKind::EulerE: return std::exp(1.0L);
      case ConstantKind::Pi: return sp::kPi;
      case ConstantKind::EulerGamma: return sp::kEulerGamma;
      case ConstantKind::Infinity: unsupported("infinity");
    }
    unsupported("constant");
  }

  Complex power(const Expr& base, const Expr& exponent) {
    if (base.is_constant(ConstantKind::EulerE)) return sp::detail::checked(std::exp(eval(exponent)), "exp");
    return sp::pow(eval(base), eval(exponent));
  }

  Complex function(const Expr& e) {
    const auto& table = kernels();
    auto it = table.find(e.name());
    if (it == table.end()) unsupported(e.name());
    std::vector<Complex> ps, as;
    for (const auto& p : e.params()) ps.push_back(eval(p));
    for (const auto& a : e.args()) as.push_back(eval(a));
    return sp::detail::checked(it->second(ps, as), e.name().c_str());
  }

  // Evaluates body with one variable rebound.
  Complex with(const std::string& var, Complex value, const Expr& body) {
    auto it = env_.find(var);
    std::optional<Complex> saved;
    if (it != env_.end()) saved = it->second;
    env_[var] = value;
    struct Restore {
      Environment& env;
      const std::string& var;
      std::optional<Complex>& saved;
      ~Restore() {
        if (saved)
          env[var] = *saved;
        else
          env.erase(var);
      }
    } restore{env_, var, saved};
    return eval(body);
  }

  // Ridders' extrapolation of central differences of the given order.
  Complex derivative(const Expr& body, const std::string& var, int order) {
    auto it = env_.find(var);
    if (it == env_.end()) unsupported("derivative variable " + var + " has no value");
    if (order > 6) unsupported("derivative of order above 6");
    const Complex x = it->second;
    std::vector<long double> binom(static_cast<std::size_t>(order) + 1, 1);
    for (int k = 1; k <= order; ++k) binom[static_cast<std::size_t>(k)] = binom[static_cast<std::size_t>(k) - 1] * (order - k + 1) / k;
    auto difference = [&](long double h) {
      Complex s = 0;
      for (int k = 0; k <= order; ++k) {
        const long double offset = (order / 2.0L - k) * h;
        s += (k % 2 ? -1.0L : 1.0L) * binom[static_cast<std::size_t>(k)] * with(var, x + offset, body);
      }
      return s / std::pow(h, static_cast<long double>(order));
    };
    constexpr int kTableau = 10;
    constexpr long double kShrink = 1.4L;
    long double h = 0.2L * std::pow(0.5L, static_cast<long double>(order - 1));
    Complex a[kTableau][kTableau];
    a[0][0] = difference(h);
    Complex best = a[0][0];
    long double best_err = std::numeric_limits<long double>::max();
    for (int i = 1; i < kTableau; ++i) {
      h /= kShrink;
      a[0][i] = difference(h);
      long double fac = kShrink * kShrink;
      for (int j = 1; j <= i; ++j) {
        a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0L);
        fac *= kShrink * kShrink;
        const long double err = std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
        if (err <= best_err) {
          best_err = err;
          best = a[j][i];
        }
      }
      if (std::abs(a[i][i] - a[i - 1][i - 1]) >= 2 * best_err) break;
    }
    return best;
  }

  long integer_bound(const Expr& e, const char* what) {
    const Complex v = eval(e);
    if (!sp::is_integer(v, 1e-9L)) unsupported(std::string(what) + " bound is not an integer");
    return std::lround(v.real());
  }

  Complex bigop(const Expr& e) {
    switch (e.bigop()) {
      case BigOpKind::Sum:
      case BigOpKind::Prod: {
        const bool is_sum = e.bigop() == BigOpKind::Sum;
        const long lo = integer_bound(*e.lower(), "lower");
        if (e.upper()->is_constant(ConstantKind::Infinity)) {
          if (!is_sum) unsupported("infinite product");
          return infinite_sum(e, lo);
        }
        const long hi = integer_bound(*e.upper(), "upper");
        if (hi - lo > 10000000) unsupported("sum with more than 10^7 terms");
        Complex acc = is_sum ? Complex(0) : Complex(1);
        for (long k = lo; k <= hi; ++k) {
          const Complex t = with(e.name(), static_cast<long double>(k), e.operand());
          acc = is_sum ? acc + t : acc * t;
        }
        return sp::detail::checked(acc, "big operator");
      }
      case BigOpKind::Int: return integral(e);
      case BigOpKind::Lim: unsupported("limit");
      case BigOpKind::Antider: unsupported("antiderivative");
    }
    unsupported("big operator");
  }

  Complex infinite_sum(const Expr& e, long lo) {
    Complex acc = 0;
    int quiet = 0;
    for (long k = lo; k < lo + 1000000; ++k) {
      const Complex t = with(e.name(), static_cast<long double>(k), e.operand());
      acc += t;
      quiet = std::abs(t) <= sp::detail::kEps * std::abs(acc) ? quiet + 1 : 0;
      if (quiet >= 10) return acc;
    }
    throw EvalError(EvalError::Kind::ConvergenceFailure, "infinite sum");
  }

  Complex kronrod(const std::string& var, const Expr& body, long double a, long double b, Complex& gauss) {
    const long double mid = (a + b) / 2, half = (b - a) / 2;
    const Complex fc = with(var, mid, body);
    Complex k = fc * kKronrodWeights[7];
    gauss = fc * kGaussWeights[3];
    for (int i = 0; i < 7; ++i) {
      const long double dx = half * kKronrodNodes[static_cast<std::size_t>(i)];
      const Complex f1 = with(var, mid - dx, body);
      const Complex f2 = with(var, mid + dx, body);
      k += (f1 + f2) * kKronrodWeights[static_cast<std::size_t>(i)];
      if (i % 2 == 1) gauss += (f1 + f2) * kGaussWeights[static_cast<std::size_t>(i / 2)];
    }
    gauss *= half;
    return k * half;
  }

  Complex adaptive(const std::string& var, const Expr& body, long double a, long double b, long double tol, int depth) {
    checkpoint();
    Complex gauss;
    const Complex k = kronrod(var, body, a, b, gauss);
    if (std::abs(k - gauss) <= tol || depth >= 40) {
      if (depth >= 40 && std::abs(k - gauss) > 1e3L * tol) throw EvalError(EvalError::Kind::ConvergenceFailure, "quadrature");
      return k;
    }
    const long double m = (a + b) / 2;
    return adaptive(var, body, a, m, tol / 2, depth + 1) + adaptive(var, body, m, b, tol / 2, depth + 1);
  }

  Complex integral(const Expr& e) {
    if (e.lower()->is_constant(ConstantKind::Infinity) || e.upper()->is_constant(ConstantKind::Infinity))
      unsupported("integral over an infinite interval");
    const Complex lo = eval(*e.lower()), hi = eval(*e.upper());
    if (lo.imag() != 0 || hi.imag() != 0) unsupported("integral with complex bounds");
    if (lo == hi) return 0;
    Complex gauss;
    const Complex rough = kronrod(e.name(), e.operand(), lo.real(), hi.real(), gauss);
    const long double tol = std::max(1e-15L, 1e-15L * std::abs(rough));
    return adaptive(e.name(), e.operand(), lo.real(), hi.real(), tol, 0);
  }
};

}  // namespace

bool numerically_supported(std::string_view id) { return kernels().contains(std::string(id)); }

std::vector<std::string> supported_functions() {
  std::vector<std::string> ids;
  for (const auto& [id, kernel] : kernels()) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::optional<std::string> first_unsupported(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Function:
      if (!numerically_supported(e.name())) return e.name();
      break;
    case ExprKind::BigOp:
      if (e.bigop() == BigOpKind::Lim) return std::string("Lim");
      if (e.bigop() == BigOpKind::Antider) return std::string("Antider");
      break;
    case ExprKind::Derivative:
      if (e.order() > 6) return std::string("Derivative");
      break;
    default: break;
  }
  std::optional<std::string> found;
  const auto& n = e.node();
  for (const auto* list : {&n.children, &n.params, &n.args})
    for (const auto& c : *list)
      if (!found) found = first_unsupported(c);
  for (const auto* o : {&n.body, &n.lower, &n.upper, &n.target})
    if (!found && *o) found = first_unsupported(**o);
  return found;
}

Complex eval(const Expr& e, const Environment& env) { return Evaluator(env).eval(e); }

Complex eval(const Expr& e, const Assignment& a) {
  Environment env;
  for (const auto& [k, v] : a) env[k] = v.to_complex();
  return eval(e, env);
}

}  // namespace texcas::numeric
