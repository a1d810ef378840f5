#include "texcas/numeric/errors.hpp"

namespace texcas::numeric {

EvalError::EvalError(Kind kind, std::string detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind), detail_(std::move(detail)) {}

std::string_view to_string(EvalError::Kind k) {
  switch (k) {
    case EvalError::Kind::NumericallyUnsupported: return "NumericallyUnsupported";
    case EvalError::Kind::PoleOrSingularity: return "PoleOrSingularity";
    case EvalError::Kind::ConvergenceFailure: return "ConvergenceFailure";
    case EvalError::Kind::Overflow: return "Overflow";
    case EvalError::Kind::Timeout: return "Timeout";
  }
  return "?";
}

Deadline Deadline::after(std::chrono::duration<double> budget, const std::atomic<bool>* cancel) {
  return Deadline(Clock::now() + std::chrono::duration_cast<Clock::duration>(budget), cancel);
}

bool Deadline::expired() const {
  if (cancel_ && cancel_->load(std::memory_order_relaxed)) return true;
  return at_ != Clock::time_point::max() && Clock::now() >= at_;
}

void Deadline::check() const {
  if (expired()) throw EvalError(EvalError::Kind::Timeout, "time limit reached");
}

namespace {
thread_local const DeadlineScope* current = nullptr;
thread_local unsigned long polls = 0;
thread_local bool branch_cut = false;
}  // namespace

DeadlineScope::DeadlineScope(const Deadline& d) : deadline_(&d), previous_(current) { current = this; }
DeadlineScope::~DeadlineScope() { current = previous_; }

void checkpoint() {
  if (!current || (++polls & 63U) != 0) return;
  for (const DeadlineScope* s = current; s; s = s->previous_) s->deadline_->check();
}

void note_branch_cut() { branch_cut = true; }
bool branch_cut_noted() { return branch_cut; }
void reset_branch_cut_note() { branch_cut = false; }

}  // namespace texcas::numeric
