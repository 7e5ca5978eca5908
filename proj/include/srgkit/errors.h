#pragma once

#include <stdexcept>
#include <string>

namespace srgkit {

/// Shape or size mismatch between matrices that must conform.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A structural precondition (observability, persistent excitation,
/// trajectory length, lag) does not hold.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotObservableError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// The feedthrough D is numerically singular, so the inverse realization does
/// not exist. For the truncated operator this means its minimum gain is 0.
class SingularFeedthroughError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class UnitCirclePoleError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class SingularConsistencyError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class IndefiniteQbarError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Malformed model / trajectory / noise / config file.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The feasibility backend could not decide a problem, even after a retry
/// with a stricter margin.
class SolverInconclusiveError : public std::runtime_error {
 public:
  SolverInconclusiveError(const std::string& what, double alpha, double lo,
                          double hi)
      : std::runtime_error(what), alpha_(alpha), lo_(lo), hi_(hi) {}

  double alpha() const { return alpha_; }
  double bracket_lo() const { return lo_; }
  double bracket_hi() const { return hi_; }

 private:
  double alpha_;
  double lo_;
  double hi_;
};

/// Feasibility observations contradict the monotonicity a gain bisection
/// relies on. Always indicates a modeling bug.
class NonMonotoneError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace srgkit
