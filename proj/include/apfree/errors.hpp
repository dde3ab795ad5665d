#pragma once

#include <stdexcept>
#include <string>

namespace apfree {

/// A cover generator cannot be refined enough within the generation limit.
class RefinementExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The perturbation budget of the multi-stage scheduler collapsed below the
/// configured minimum step.
class ScheduleInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction failed its own postcondition check. Indicates a bug.
class VerificationFailed : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// min_defect was asked about a set that does contain a 3-term AP with the
/// required step, so the minimum defect is zero.
class ApPresentError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// No triple of the set has both gaps >= eps.
class VacuousDefectError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace apfree
