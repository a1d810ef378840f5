#pragma once

#include <atomic>
#include <chrono>
#include <stdexcept>
#include <string>
#include <string_view>

namespace texcas::numeric {

class EvalError : public std::runtime_error {
public:
  enum class Kind { NumericallyUnsupported, PoleOrSingularity, ConvergenceFailure, Overflow, Timeout };
  EvalError(Kind kind, std::string detail);
  Kind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

private:
  Kind kind_;
  std::string detail_;
};

std::string_view to_string(EvalError::Kind k);

// Wall-clock budget with an optional external cancel flag.
class Deadline {
public:
  using Clock = std::chrono::steady_clock;

  static Deadline never() { return Deadline(Clock::time_point::max()); }
  static Deadline after(std::chrono::duration<double> budget, const std::atomic<bool>* cancel = nullptr);
  explicit Deadline(Clock::time_point at, const std::atomic<bool>* cancel = nullptr) : at_(at), cancel_(cancel) {}

  bool expired() const;
  // Throws EvalError(Timeout) once expired.
  void check() const;

private:
  Clock::time_point at_;
  const std::atomic<bool>* cancel_;
};

// Installs a deadline for the calling thread; kernel loops poll it through
// checkpoint(). Scopes nest; an inner deadline never extends an outer one.
class DeadlineScope {
public:
  explicit DeadlineScope(const Deadline& d);
  ~DeadlineScope();
  DeadlineScope(const DeadlineScope&) = delete;
  DeadlineScope& operator=(const DeadlineScope&) = delete;

private:
  friend void checkpoint();
  const Deadline* deadline_;
  const DeadlineScope* previous_;
};

// Cheap cancellation point for long loops.
void checkpoint();

// Set when an evaluation touched a branch cut; reset per evaluation.
void note_branch_cut();
bool branch_cut_noted();
void reset_branch_cut_note();

}  // namespace texcas::numeric
