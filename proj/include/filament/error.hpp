#pragma once

#include <stdexcept>
#include <string>

namespace filament {

// Rejected input: a precondition on user-supplied data failed.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Geometry or direction undefined (zero-length sample, |f| = 0, ...).
class DegenerateError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Iterative procedure failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string &what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

private:
  double last_residual_;
};

// A time step blew up (sample norm collapsed).
class StepFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// (q, p, j) violates the collinearity constraint and represents no filament.
class NotInOmega : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Oracle applied outside its domain (e.g. impulse of a non-closed curve).
class InapplicableOracle : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace filament
