#include "doctest.h"

#include "texcas/ir/emit.hpp"
#include "texcas/numeric.hpp"

#include "../support/oracles.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <functional>
#include <random>
#include <thread>

using namespace texcas;
using namespace texcas::numeric;
using namespace oracle;

namespace {

Complex ev(std::string_view infix, const Environment& env = {}) { return eval(ir::parse_infix(infix), env); }

NumericOutcome verify(std::string_view relation, const std::vector<constraints::VariableDomain>& domains = {},
                      const std::map<std::string, Rational>& specials = {}, NumericConfig config = {}) {
  return verify_numeric(ir::parse_infix_relation(relation), domains, specials, config);
}

}  // namespace

TEST_CASE("oracle: gamma and digamma against Boost.Math at 50 digits") {
  Sampler s;
  for (int i = 0; i < 20; ++i) {
    long double x = s.uniform(-6, 12);
    if (std::abs(x - std::round(x)) < 0.05L) x += 0.3L;
    const Big want = boost::math::tgamma(Big(x));
    const auto got = special::gamma(x);
    CHECK_MESSAGE(close(got, want.convert_to<long double>()), x);
    const Big psi = boost::math::digamma(Big(x));
    CHECK_MESSAGE(close(special::digamma(x), psi.convert_to<long double>()), x);
  }
}

TEST_CASE("oracle: gamma at complex points by the recurrence") {
  Sampler s;
  for (int i = 0; i < 20; ++i) {
    const Complex z = s.disk(6);
    const Complex want = special::gamma(z + 1.0L) / z;
    CHECK_MESSAGE(close(special::gamma(z), want), z.real(), " ", z.imag());
  }
}

TEST_CASE("oracle: erf and erfc against the Taylor series") {
  Sampler s;
  for (int i = 0; i < 20; ++i) {
    const Complex z = s.disk(3.5L);
    const Complex want = small(series_erf(z));
    CHECK_MESSAGE(close(special::erf(z), want), z.real(), " ", z.imag());
    CHECK_MESSAGE(close(special::erfc(z), small(BigC(1) - series_erf(z)), 1e-9L), z.real(), " ", z.imag());
  }
}

TEST_CASE("oracle: Bessel J and I against the power series") {
  Sampler s;
  for (int i = 0; i < 20; ++i) {
    const long double nu = i % 4 == 0 ? std::round(s.uniform(0, 4)) : s.uniform(-2.5L, 4);
    Complex z = s.disk(8);
    if (std::abs(z) < 0.1L) z += 0.5L;
    if (z.imag() == 0 && z.real() < 0) z = -z;
    const Complex j = small(series_bessel(nu, z, false));
    const Complex in = small(series_bessel(nu, z, true));
    CHECK_MESSAGE(close(special::bessel_j(nu, z), j), nu, " ", z.real(), " ", z.imag());
    CHECK_MESSAGE(close(special::bessel_i(nu, z), in), nu, " ", z.real(), " ", z.imag());
  }
}

TEST_CASE("oracle: Bessel Y and K against Boost.Math at real points") {
  Sampler s;
  for (int i = 0; i < 20; ++i) {
    const long double nu = i % 4 == 0 ? std::round(s.uniform(0, 3)) : s.uniform(-2.5L, 3);
    const long double x = s.uniform(0.2L, 8);
    const Big y = boost::math::cyl_neumann(Big(nu), Big(x));
    const Big k = boost::math::cyl_bessel_k(Big(nu), Big(x));
    CHECK_MESSAGE(close(special::bessel_y(nu, x), y.convert_to<long double>()), nu, " ", x);
    CHECK_MESSAGE(close(special::bessel_k(nu, x), k.convert_to<long double>()), nu, " ", x);
  }
}

TEST_CASE("oracle: 0F1, 1F1 and 2F1 against brute-force partial sums") {
  Sampler s;
  for (int i = 0; i < 20; ++i) {
    const Complex a{s.uniform(-2, 3), s.uniform(-1, 1)};
    const Complex b{s.uniform(-2, 3), 0};
    const Complex c{s.uniform(0.3L, 4), 0};
    const Complex z0 = s.disk(5);
    CHECK_MESSAGE(close(special::hyp_pfq({}, {c}, z0), small(series_pfq({}, {c}, z0))), i);
    CHECK_MESSAGE(close(special::hyp_pfq({a}, {c}, z0), small(series_pfq({a}, {c}, z0))), i);
    const Complex z = s.disk(0.85L);
    CHECK_MESSAGE(close(special::hyp2f1(a, b, c, z), small(series_pfq({a, b}, {c}, z))), i);
  }
}

TEST_CASE("oracle: 2F1 outside the unit disk against closed forms") {
  Sampler s;
  for (int i = 0; i < 20; ++i) {
    Complex z = s.disk(6);
    if (std::abs(z) < 1.1L) z *= 1.5L / std::max(std::abs(z), 0.1L);
    if (std::abs(z.imag()) < 1e-3L && z.real() > 0) z += Complex(0, 0.3L);
    const Complex log_form = -std::log(1.0L - z) / z;
    CHECK_MESSAGE(close(special::hyp2f1(1, 1, 2, z), log_form), z.real(), " ", z.imag());
    const Complex a{s.uniform(-1.5L, 1.5L), 0};
    const Complex binomial_form = std::pow(1.0L - z, -a);
    CHECK_MESSAGE(close(special::hyp2f1(a, 0.7L, 0.7L, z), binomial_form), z.real(), " ", z.imag());
  }
}

TEST_CASE("oracle: orthogonal polynomials against explicit sums") {
  Sampler s;
  for (int i = 0; i < 20; ++i) {
    const int n = static_cast<int>(s.rng() % 9);
    const long double a = s.uniform(-0.9L, 3), b = s.uniform(-0.9L, 3), x = s.uniform(-1.5L, 1.5L);
    const long double nn = n;
    CHECK(close(special::jacobi_p(nn, a, b, x), jacobi_sum(n, a, b, x).convert_to<long double>()));
    CHECK(close(special::laguerre_l(nn, a, 3 * x), laguerre_sum(n, a, 3 * Big(x)).convert_to<long double>()));
    CHECK(close(special::hermite_h(nn, x), hermite_sum(n, x).convert_to<long double>()));
    CHECK(close(special::chebyshev_t(nn, x), chebyshev_t_sum(n, x).convert_to<long double>()));
    CHECK(close(special::chebyshev_u(nn, x), chebyshev_u_sum(n, x).convert_to<long double>()));
    const long double u = x / 1.5L;
    const Big p = boost::math::legendre_p(n, Big(u));
    CHECK(close(special::legendre_p(nn, u), p.convert_to<long double>()));
  }
}

TEST_CASE("oracle: complete elliptic integrals") {
  Sampler s;
  for (int i = 0; i < 20; ++i) {
    const long double k = s.uniform(-0.98L, 0.98L);
    CHECK(close(special::elliptic_k(k), boost::math::ellint_1(Big(k)).convert_to<long double>()));
    CHECK(close(special::elliptic_e(k), boost::math::ellint_2(Big(k)).convert_to<long double>()));
    const Complex m = s.disk(0.8L);
    const Complex half_pi = special::kPi / 2;
    CHECK(close(special::elliptic_k_param(m), half_pi * small(series_pfq({0.5L, 0.5L}, {1}, m))));
    CHECK(close(special::elliptic_e_param(m), half_pi * small(series_pfq({-0.5L, 0.5L}, {1}, m))));
  }
}

TEST_CASE("oracle: Pochhammer and binomial against products") {
  Sampler s;
  for (int i = 0; i < 20; ++i) {
    const Complex a{s.uniform(-3, 3), s.uniform(-1, 1)};
    const int n = static_cast<int>(s.rng() % 7);
    BigC prod = 1;
    for (int j = 0; j < n; ++j) prod *= big(a) + BigC(j);
    CHECK(close(special::pochhammer(a, n), small(prod)));
    BigC b = 1;
    for (int j = 0; j < n; ++j) b = b * (big(a) - BigC(j)) / BigC(j + 1);
    CHECK(close(special::binomial(a, n), small(b)));
    const long double x = s.uniform(0.5L, 4), y = s.uniform(0.2L, 2);
    const Big want = boost::math::tgamma(Big(x) + y) / boost::math::tgamma(Big(x));
    CHECK(close(special::pochhammer(x, y), want.convert_to<long double>()));
  }
}

TEST_CASE("eval: reference values") {
  CHECK(std::abs(ev("GammaFn((1/2))") - std::sqrt(special::kPi)) < 1e-10L);
  CHECK(std::abs(ev("GammaFn((1/2))").real() - 1.772453851L) < 5e-10L);
  CHECK(std::abs(ev("sin((3/2))^2 + cos((3/2))^2") - 1.0L) < 1e-10L);
  CHECK(std::abs(ev("Hyp2F1(1, 1, 2, (1/2))") - 1.386294361L) < 1e-9L);
  CHECK(std::abs(ev("Hyp2F1(1, 1, 2, (1/2))").real() - 2 * std::log(2.0L)) < 1e-12L);
  CHECK(std::abs(ev("sum(k^2, k, 1, 10)") - 385.0L) < 1e-12L);
  CHECK(std::abs(ev("product(k, k, 1, 5)") - 120.0L) < 1e-12L);
  CHECK(std::abs(ev("int(cos(t), t, 0, x)", {{"x", 1.2L}}) - std::sin(1.2L)) < 1e-12L);
  CHECK(std::abs(ev("diff(sin(x), x, 1)", {{"x", 0.7L}}) - std::cos(0.7L)) < 1e-9L);
  CHECK(std::abs(ev("diff(%e^x, x, 3)", {{"x", 0.3L}}) - std::exp(0.3L)) < 1e-6L);
  CHECK(std::abs(ev("sum(1/factorial(k), k, 0, %inf)") - std::exp(1.0L)) < 1e-15L);
  CHECK(std::abs(ev("sum(x^k, k, 0, %inf)", {{"x", 0.5L}}) - 2.0L) < 1e-15L);
  CHECK(std::abs(ev("%e^(%i*%pi) + 1")) < 1e-15L);
  CHECK(std::abs(ev("EllipticCK(k)", {{"k", 0.6L}}) - special::elliptic_k(0.8L)) < 1e-14L);
  CHECK(std::abs(ev("JacobiP[a, b, 2](x)", {{"a", 0.5L}, {"b", 1.5L}, {"x", 0.3L}}) -
                 special::jacobi_p(2, 0.5L, 1.5L, 0.3L)) < 1e-15L);
}

TEST_CASE("eval: errors") {
  auto kind_of = [](std::string_view s, const Environment& env = {}) {
    try {
      ev(s, env);
    } catch (const EvalError& e) {
      return e.kind();
    }
    FAIL("no error for ", s);
    return EvalError::Kind::Overflow;
  };
  CHECK(kind_of("GammaFn(0)") == EvalError::Kind::PoleOrSingularity);
  CHECK(kind_of("1/x", {{"x", 0}}) == EvalError::Kind::PoleOrSingularity);
  CHECK(kind_of("JacobiSN(x, k)", {{"x", 1}, {"k", 0.5L}}) == EvalError::Kind::NumericallyUnsupported);
  CHECK(kind_of("limit(1/k, k, %inf)") == EvalError::Kind::NumericallyUnsupported);
  CHECK(kind_of("y") == EvalError::Kind::NumericallyUnsupported);
  CHECK(kind_of("%e^x", {{"x", 1e6L}}) == EvalError::Kind::Overflow);
  CHECK(kind_of("int(t, t, 0, %inf)") == EvalError::Kind::NumericallyUnsupported);
}

TEST_CASE("eval: conjugate symmetry of real-analytic kernels") {
  const std::vector<std::string> fs = {"sin(z)", "cosh(z)", "%e^z", "log(z)", "GammaFn(z)", "Digamma(z)",
                                       "erf(z)", "erfc(z)", "BesselJ[(3/2)](z)", "BesselY[1](z)",
                                       "BesselI[(1/3)](z)", "BesselK[0](z)", "Hyp1F1((1/2), (3/2), z)",
                                       "Hyp2F1((1/3), (1/2), (5/2), z)", "LegendreP[(1/2)](z)",
                                       "LaguerreL[(1/2), 3](z)", "EllipticK(z)", "atan(z)"};
  Sampler s;
  for (const auto& f : fs) {
    const auto e = ir::parse_infix(f);
    for (int i = 0; i < 20; ++i) {
      Complex z = s.disk(1.8L);
      if (std::abs(z.imag()) < 0.05L) z += Complex(0, 0.2L);
      const Complex a = eval(e, Environment{{"z", z}});
      const Complex b = eval(e, Environment{{"z", std::conj(z)}});
      CHECK_MESSAGE(close(b, std::conj(a)), f, " at ", z.real(), " ", z.imag());
    }
  }
}

TEST_CASE("eval: branch cut crossings are noted") {
  reset_branch_cut_note();
  ev("log(x)", {{"x", 2}});
  CHECK_FALSE(branch_cut_noted());
  ev("log(x)", {{"x", -2}});
  CHECK(branch_cut_noted());
  reset_branch_cut_note();
  ev("x^(1/2)", {{"x", -2}});
  CHECK(branch_cut_noted());
}

TEST_CASE("assignments: defaults, blueprints and integer domains") {
  NumericConfig config;
  const auto two = generate_assignments({"x", "y"}, {}, {}, config);
  CHECK(two.size() == 9);
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& a : two) seen.insert({to_string(a.at("x")), to_string(a.at("y"))});
  CHECK(seen.size() == 9);
  CHECK(seen.contains({"-1/2", "3/2"}));

  const auto bp = generate_assignments({"x"}, {}, {{"x", Rational(1, 2)}}, config);
  REQUIRE(bp.size() == 1);
  CHECK(bp[0].at("x") == TestValue{Rational(1, 2), 0});

  const auto n = generate_assignments({"n"}, constraints::interpret_set_notation(R"(n=0,1,2,\dots)"), {}, config);
  REQUIRE(n.size() == 3);
  CHECK(n[0].at("n").re == 0);
  CHECK(n[1].at("n").re == 1);
  CHECK(n[2].at("n").re == 2);

  const auto nat = generate_assignments({"m"}, constraints::interpret_set_notation(R"(m \in \NatNumber)"), {}, config);
  REQUIRE(nat.size() == 3);
  CHECK(nat[0].at("m").re == 1);

  CHECK(generate_assignments({}, {}, {}, config).size() == 1);
}

TEST_CASE("assignments: every emitted assignment passes the domain check") {
  std::mt19937 rng(5);
  NumericConfig config;
  for (int trial = 0; trial < 200; ++trial) {
    constraints::VariableDomain d;
    d.var = "x";
    d.base_set = constraints::BaseSet::Real;
    constraints::Interval iv;
    if (rng() % 2) iv.lower = Rational(static_cast<int>(rng() % 7) - 3, 2);
    if (rng() % 2) iv.upper = Rational(static_cast<int>(rng() % 7) - 3, 2);
    iv.lower_strict = rng() % 2;
    iv.upper_strict = rng() % 2;
    d.interval = iv;
    for (const auto& a : generate_assignments({"x", "y"}, {d}, {}, config)) {
      std::map<std::string, Rational> plain;
      for (const auto& [k, v] : a) plain[k] = v.re;
      CHECK(constraints::check_domain({d}, plain));
    }
  }
}

TEST_CASE("verify: identities, seeded error and filtering") {
  const auto ok = verify("sin(2*x) = 2*sin(x)*cos(x)");
  CHECK(ok.classification == NumericClass::Verified);
  CHECK(ok.evaluations.size() == 3);
  for (const auto& e : ok.evaluations) CHECK(e.discrepancy < 1e-3L);

  const auto bad = verify("sin(2*x) = 2*sin(x)*sin(x)");
  CHECK(bad.classification == NumericClass::AboveThreshold);
  bool found = false;
  for (const auto& e : bad.evaluations)
    if (e.assignment.at("x") == TestValue{Rational(1, 2), 0}) {
      found = true;
      CHECK(std::abs(e.discrepancy - 0.3818L) < 1e-4L);
      CHECK(std::abs(e.discrepancy - std::abs(std::sin(1.0L) - 2 * std::sin(0.5L) * std::sin(0.5L))) < 1e-15L);
    }
  CHECK(found);
  REQUIRE(bad.worst);
  CHECK(bad.worst_discrepancy > 1e-3L);

  const auto none = verify("x = x", constraints::interpret_set_notation(R"(x=2,4,6)"));
  CHECK(none.assignment_count == 3);
  constraints::VariableDomain narrow;
  narrow.var = "x";
  narrow.base_set = constraints::BaseSet::Real;
  narrow.interval = constraints::Interval{Rational(5), true, Rational(6), true};
  const auto filtered = verify("x = x", {narrow});
  CHECK(filtered.classification == NumericClass::NoValidValues);
  CHECK(filtered.evaluations.empty());

  CHECK(verify("x -> 0").classification == NumericClass::NonVerifiable);
  const auto unsup = verify("JacobiSN(x, k) = 0");
  CHECK(unsup.classification == NumericClass::NumericallyUnsupported);
  CHECK(unsup.detail == "JacobiSN");
}

TEST_CASE("verify: inequalities and Ne") {
  CHECK(verify("x^2 >= 0").classification == NumericClass::Verified);
  CHECK(verify("%e^x > 0").classification == NumericClass::Verified);
  CHECK(verify("x < 1").classification == NumericClass::AboveThreshold);
  CHECK(verify("x + 1 <> x").classification == NumericClass::Verified);
  CHECK(verify("x <> x").classification == NumericClass::AboveThreshold);
}

TEST_CASE("verify: singular assignments are skipped and counted") {
  NumericConfig config;
  config.test_values = {{0, 0}, {1, 0}, {2, 0}};
  const auto out = verify("x/x = 1", {}, {}, config);
  CHECK(out.skipped.size() == 1);
  CHECK(out.evaluations.size() + out.skipped.size() == out.assignment_count);
  CHECK(out.classification == NumericClass::Verified);

  config.test_values = {{0, 0}};
  CHECK(verify("GammaFn(x) = 1", {}, {}, config).classification == NumericClass::NoValidValues);
}

TEST_CASE("verify: comparison modes") {
  CHECK(discrepancy(2, 1, ComparisonMode::AbsoluteDifference) == doctest::Approx(1));
  CHECK(discrepancy(2, 1, ComparisonMode::RelativeDifference) == doctest::Approx(0.5));
  CHECK(discrepancy(2, 1, ComparisonMode::Quotient) == doctest::Approx(1));
  CHECK(discrepancy(1.0005L, 1, ComparisonMode::Quotient) < 1e-3L);
  NumericConfig rel;
  rel.comparison_mode = ComparisonMode::RelativeDifference;
  CHECK(verify("1000*x + (1/10000) = 1000*x", {}, {}, rel).classification == NumericClass::Verified);
  CHECK(verify("1000*x + (1/10000) = 1000*x").classification == NumericClass::Verified);
  CHECK(verify("1000*x + 1 = 1000*x", {}, {}, rel).classification == NumericClass::AboveThreshold);
}

TEST_CASE("verify: determinism") {
  const auto a = verify("BesselJ[x](y) = BesselJ[x](y) + (1/100000)*y");
  const auto b = verify("BesselJ[x](y) = BesselJ[x](y) + (1/100000)*y");
  CHECK(a.classification == b.classification);
  REQUIRE(a.evaluations.size() == b.evaluations.size());
  for (std::size_t i = 0; i < a.evaluations.size(); ++i) {
    CHECK(a.evaluations[i].assignment == b.evaluations[i].assignment);
    CHECK(a.evaluations[i].lhs == b.evaluations[i].lhs);
    CHECK(a.evaluations[i].discrepancy == b.evaluations[i].discrepancy);
  }
}

TEST_CASE("verify: timeout and cancellation") {
  NumericConfig config;
  config.timeout_seconds = 1;
  const auto start = std::chrono::steady_clock::now();
  const auto out = verify("sum(sum(sum(sin(i*j*k*x), i, 1, 100000), j, 1, 100000), k, 1, 100000) = 0", {}, {}, config);
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(out.classification == NumericClass::Timeout);
  CHECK(elapsed < 2.0);

  std::atomic<bool> cancel{false};
  NumericOutcome cancelled;
  std::thread worker([&] {
    cancelled = verify_numeric(ir::parse_infix_relation("sum(sum(sin(j*k*x), j, 1, 1000000), k, 1, 1000000) = 0"),
                               {}, {}, NumericConfig{}, &cancel);
  });
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  cancel = true;
  worker.join();
  CHECK(cancelled.classification == NumericClass::Timeout);
}

TEST_CASE("config validation") {
  NumericConfig c;
  CHECK_NOTHROW(validate(c));
  c.threshold = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = {};
  c.precision_digits = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.precision_digits = kMaxPrecisionDigits + 1;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
}
