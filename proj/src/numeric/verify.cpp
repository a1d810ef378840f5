#include "texcas/numeric.hpp"

#include "kernel_util.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>
#include <stdexcept>

namespace texcas::numeric {

using constraints::BaseSet;
using constraints::VariableDomain;
using ir::RelationKind;

namespace {

long double to_ld(const Rational& r) {
  return numerator(r).convert_to<long double>() / denominator(r).convert_to<long double>();
}

std::string rational_text(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

Rational ceil_rational(const Rational& r) {
  ir::BigInt q = numerator(r) / denominator(r);
  if (Rational(q) < r) ++q;
  return Rational(q);
}

Rational floor_rational(const Rational& r) {
  ir::BigInt q = numerator(r) / denominator(r);
  if (Rational(q) > r) --q;
  return Rational(q);
}

std::vector<Rational> progression_head(const constraints::Progression& p) {
  std::vector<Rational> out;
  for (int k = 0; k < 3; ++k) {
    const Rational v = p.start + p.step * k;
    if (p.end && (p.step > 0 ? v > *p.end : v < *p.end)) break;
    out.push_back(v);
  }
  return out;
}

std::vector<Rational> integer_head(const VariableDomain& d) {
  Rational first = 0;
  int direction = 1;
  if (d.interval && d.interval->lower) {
    first = ceil_rational(*d.interval->lower);
    if (d.interval->lower_strict && first == *d.interval->lower) first += 1;
  } else if (d.interval && d.interval->upper) {
    first = floor_rational(*d.interval->upper);
    if (d.interval->upper_strict && first == *d.interval->upper) first -= 1;
    direction = -1;
  }
  return {first, first + direction, first + 2 * direction};
}

// Candidate values of one variable before filtering.
std::vector<TestValue> candidates(const std::string& var, const std::vector<VariableDomain>& domains,
                                  const std::map<std::string, Rational>& specials, const NumericConfig& config) {
  if (auto it = specials.find(var); it != specials.end()) return {TestValue{it->second, 0}};
  auto lift = [](const std::vector<Rational>& rs) {
    std::vector<TestValue> out;
    for (const auto& r : rs) out.push_back({r, 0});
    return out;
  };
  for (const auto& d : domains) {
    if (d.var != var) continue;
    if (d.finite_set) {
      std::vector<Rational> head(d.finite_set->begin(),
                                 d.finite_set->begin() + std::min<std::ptrdiff_t>(3, std::ssize(*d.finite_set)));
      return lift(head);
    }
    if (d.progression) return lift(progression_head(*d.progression));
  }
  for (const auto& d : domains)
    if (d.var == var && d.base_set == BaseSet::Integer) return lift(integer_head(d));
  return config.test_values;
}

}  // namespace

Complex TestValue::to_complex() const { return {to_ld(re), to_ld(im)}; }

std::string to_string(const TestValue& v) {
  if (v.im == 0) return rational_text(v.re);
  std::string s = v.re == 0 ? "" : rational_text(v.re) + (v.im > 0 ? "+" : "");
  return s + rational_text(v.im) + "*I";
}

std::string_view to_string(ComparisonMode m) {
  switch (m) {
    case ComparisonMode::AbsoluteDifference: return "AbsoluteDifference";
    case ComparisonMode::RelativeDifference: return "RelativeDifference";
    case ComparisonMode::Quotient: return "Quotient";
  }
  return "?";
}

std::string_view to_string(NumericClass c) {
  switch (c) {
    case NumericClass::Verified: return "Verified";
    case NumericClass::AboveThreshold: return "AboveThreshold";
    case NumericClass::NoValidValues: return "NoValidValues";
    case NumericClass::EvaluationError: return "EvaluationError";
    case NumericClass::Timeout: return "Timeout";
    case NumericClass::NumericallyUnsupported: return "NumericallyUnsupported";
    case NumericClass::NonVerifiable: return "NonVerifiable";
  }
  return "?";
}

void validate(const NumericConfig& config) {
  if (!(config.threshold > 0)) throw std::invalid_argument("threshold must be positive");
  if (config.precision_digits < 1) throw std::invalid_argument("precision must be at least 1");
  if (config.precision_digits > kMaxPrecisionDigits)
    throw std::invalid_argument("precision above " + std::to_string(kMaxPrecisionDigits) + " digits is not supported");
  if (config.timeout_seconds < 1) throw std::invalid_argument("timeout_seconds must be a positive integer");
  if (config.test_values.empty()) throw std::invalid_argument("test_values is empty");
}

bool admits(const std::vector<VariableDomain>& domains, const Assignment& a) {
  for (const auto& d : domains) {
    auto it = a.find(d.var);
    if (it == a.end()) continue;
    const TestValue& v = it->second;
    if (v.im != 0) {
      const bool unrestricted = d.base_set == BaseSet::Complex && !d.interval && !d.progression && !d.finite_set;
      if (!unrestricted) return false;
      continue;
    }
    if (!constraints::in_domain(d, v.re)) return false;
  }
  return true;
}

std::vector<Assignment> generate_assignments(const std::set<std::string>& vars,
                                             const std::vector<VariableDomain>& domains,
                                             const std::map<std::string, Rational>& specials,
                                             const NumericConfig& config) {
  std::vector<Assignment> out{Assignment{}};
  for (const auto& v : vars) {
    std::vector<TestValue> values;
    for (const auto& c : candidates(v, domains, specials, config))
      if (admits(domains, Assignment{{v, c}})) values.push_back(c);
    std::vector<Assignment> next;
    for (const auto& partial : out)
      for (const auto& c : values) {
        auto a = partial;
        a[v] = c;
        next.push_back(std::move(a));
      }
    out = std::move(next);
  }
  std::erase_if(out, [&](const Assignment& a) { return !admits(domains, a); });
  return out;
}

long double discrepancy(Complex lhs, Complex rhs, ComparisonMode mode) {
  switch (mode) {
    case ComparisonMode::AbsoluteDifference: return std::abs(lhs - rhs);
    case ComparisonMode::RelativeDifference: {
      const long double scale = std::max(std::abs(lhs), std::abs(rhs));
      return scale == 0 ? 0.0L : std::abs(lhs - rhs) / scale;
    }
    case ComparisonMode::Quotient:
      if (rhs == Complex(0)) return std::abs(lhs);
      return std::abs(lhs / rhs - 1.0L);
  }
  return std::abs(lhs - rhs);
}

namespace {

// Discrepancy and verdict of one evaluation.
std::pair<long double, bool> judge(RelationKind kind, Complex l, Complex r, const NumericConfig& config) {
  const long double tol = config.threshold;
  if (kind == RelationKind::Eq || kind == RelationKind::Equiv) {
    const long double d = discrepancy(l, r, config.comparison_mode);
    return {d, d < tol};
  }
  if (kind == RelationKind::Ne) {
    const long double d = std::abs(l - r);
    return {d, d >= tol};
  }
  // ordering needs real values on both sides
  const long double imag = std::max(std::abs(l.imag()), std::abs(r.imag()));
  if (imag >= tol) return {imag, false};
  const long double diff = l.real() - r.real();
  long double violation = 0;
  switch (kind) {
    case RelationKind::Lt:
    case RelationKind::Le: violation = std::max(0.0L, diff); break;
    case RelationKind::Gt:
    case RelationKind::Ge: violation = std::max(0.0L, -diff); break;
    default: break;
  }
  return {violation, violation < tol};
}

}  // namespace

NumericOutcome verify_numeric(const ir::Relation& rel, const std::vector<VariableDomain>& domains,
                              const std::map<std::string, Rational>& specials, const NumericConfig& config,
                              const std::atomic<bool>* cancel) {
  validate(config);
  NumericOutcome out;
  if (rel.kind == RelationKind::To) {
    out.classification = NumericClass::NonVerifiable;
    out.detail = "limit relation";
    return out;
  }
  for (const auto* side : {&rel.lhs, &rel.rhs})
    if (auto id = first_unsupported(*side)) {
      out.classification = NumericClass::NumericallyUnsupported;
      out.error_kind = EvalError::Kind::NumericallyUnsupported;
      out.detail = *id;
      return out;
    }

  const auto assignments = generate_assignments(ir::free_variables(rel), domains, specials, config);
  out.assignment_count = assignments.size();
  if (assignments.empty()) {
    out.classification = NumericClass::NoValidValues;
    return out;
  }

  const Deadline deadline = Deadline::after(std::chrono::seconds(config.timeout_seconds), cancel);
  DeadlineScope scope(deadline);
  for (const auto& a : assignments) {
    try {
      reset_branch_cut_note();
      Evaluation ev;
      ev.assignment = a;
      ev.lhs = eval(rel.lhs, a);
      ev.rhs = eval(rel.rhs, a);
      ev.branch_cut = branch_cut_noted();
      std::tie(ev.discrepancy, ev.passed) = judge(rel.kind, ev.lhs, ev.rhs, config);
      out.branch_sensitive = out.branch_sensitive || ev.branch_cut;
      if (!ev.passed && (!out.worst || ev.discrepancy > out.worst_discrepancy)) {
        out.worst_discrepancy = ev.discrepancy;
        out.worst = ev;
      }
      out.evaluations.push_back(std::move(ev));
    } catch (const EvalError& e) {
      if (e.kind() == EvalError::Kind::PoleOrSingularity) {
        out.skipped.push_back(a);
        continue;
      }
      out.error_kind = e.kind();
      out.detail = e.detail();
      switch (e.kind()) {
        case EvalError::Kind::Timeout: out.classification = NumericClass::Timeout; break;
        case EvalError::Kind::NumericallyUnsupported: out.classification = NumericClass::NumericallyUnsupported; break;
        default: out.classification = NumericClass::EvaluationError; break;
      }
      return out;
    }
  }
  if (out.evaluations.empty()) {
    out.classification = NumericClass::NoValidValues;
    out.detail = "every assignment hit a singularity";
  } else if (out.worst) {
    out.classification = NumericClass::AboveThreshold;
  } else {
    out.classification = NumericClass::Verified;
    for (const auto& ev : out.evaluations) out.worst_discrepancy = std::max(out.worst_discrepancy, ev.discrepancy);
  }
  return out;
}

}  // namespace texcas::numeric
