#pragma once

// Numerical verification of translated relations: test-value assignment,
// evaluation in complex extended precision and threshold classification.

#include "texcas/constraints.hpp"
#include "texcas/ir/expr.hpp"
#include "texcas/numeric/errors.hpp"
#include "texcas/numeric/special.hpp"

#include <atomic>
#include <complex>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace texcas::numeric {

using Complex = std::complex<long double>;
using ir::Rational;

struct TestValue {
  Rational re;
  Rational im;

  Complex to_complex() const;
  bool operator==(const TestValue&) const = default;
};

std::string to_string(const TestValue& v);

using Assignment = std::map<std::string, TestValue>;

enum class ComparisonMode { AbsoluteDifference, RelativeDifference, Quotient };
std::string_view to_string(ComparisonMode m);

struct NumericConfig {
  std::vector<TestValue> test_values{{Rational(-1, 2), 0}, {Rational(1, 2), 0}, {Rational(3, 2), 0}};
  double threshold = 1e-3;
  int precision_digits = 10;
  int timeout_seconds = 300;
  ComparisonMode comparison_mode = ComparisonMode::AbsoluteDifference;
};

// Throws std::invalid_argument when the config cannot be honoured.
void validate(const NumericConfig& config);

// Largest precision the extended-precision kernel guarantees.
inline constexpr int kMaxPrecisionDigits = 15;

std::vector<Assignment> generate_assignments(const std::set<std::string>& vars,
                                             const std::vector<constraints::VariableDomain>& domains,
                                             const std::map<std::string, Rational>& specials,
                                             const NumericConfig& config);

// True when every value satisfies every domain naming its variable; a
// non-real value passes only unrestricted complex domains.
bool admits(const std::vector<constraints::VariableDomain>& domains, const Assignment& a);

// Function ids the kernel evaluates.
bool numerically_supported(std::string_view function_id);
std::vector<std::string> supported_functions();  // sorted
// First function id or construct in e without numeric support.
std::optional<std::string> first_unsupported(const ir::Expr& e);

using Environment = std::map<std::string, Complex>;

// Evaluates under the calling thread's deadline scope (if any).
Complex eval(const ir::Expr& e, const Environment& env);
Complex eval(const ir::Expr& e, const Assignment& a);

enum class NumericClass {
  Verified,
  AboveThreshold,
  NoValidValues,
  EvaluationError,
  Timeout,
  NumericallyUnsupported,
  NonVerifiable
};
std::string_view to_string(NumericClass c);

struct Evaluation {
  Assignment assignment;
  Complex lhs;
  Complex rhs;
  long double discrepancy = 0;
  bool passed = false;
  bool branch_cut = false;
};

struct NumericOutcome {
  NumericClass classification = NumericClass::NoValidValues;
  std::optional<EvalError::Kind> error_kind;
  std::string detail;
  std::size_t assignment_count = 0;
  std::vector<Evaluation> evaluations;
  std::vector<Assignment> skipped;  // poles and singularities
  long double worst_discrepancy = 0;
  std::optional<Evaluation> worst;
  bool branch_sensitive = false;
};

NumericOutcome verify_numeric(const ir::Relation& rel, const std::vector<constraints::VariableDomain>& domains,
                              const std::map<std::string, Rational>& specials, const NumericConfig& config,
                              const std::atomic<bool>* cancel = nullptr);

// Discrepancy of two values under a comparison mode.
long double discrepancy(Complex lhs, Complex rhs, ComparisonMode mode);

}  // namespace texcas::numeric
