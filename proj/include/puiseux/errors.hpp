#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace puiseux {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Retry hint attached to escalation requests.
struct RetryHint {
  std::optional<int> precision;  // suggested working precision (digits)
  std::optional<int> terms;      // suggested series length
  std::optional<int> ode_precision;
};

/// The computation ran out of accuracy, terms or integration precision and
/// can be retried with the settings in hint().
class EscalationError : public Error {
 public:
  EscalationError(const std::string& what, RetryHint hint) : Error(what), hint_(hint) {}
  const RetryHint& hint() const { return hint_; }

 private:
  RetryHint hint_;
};

/// Matching a computed value against exact fiber roots missed p_min/N.
class MatchToleranceError : public EscalationError {
 public:
  using EscalationError::EscalationError;
};

/// Step-size underflow or a continued value that lands off its sheet.
class IntegrationError : public EscalationError {
 public:
  using EscalationError::EscalationError;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class AmbiguousMatchError : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

class DegenerateFiberError : public Error {
 public:
  using Error::Error;
};

class NotSimpleRootError : public Error {
 public:
  using Error::Error;
};

class PoleEvaluationError : public Error {
 public:
  using Error::Error;
};

}  // namespace puiseux
