#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sublap {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values met while evaluating frame coefficients.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Mismatched ambient dimensions (fields from different frames, frame vs
/// domain, bracket operands).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Structural defects: empty/disconnected interior, span failure,
/// Hörmander condition not certified, l < n in the NSW evaluation.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Violated operation precondition (out-of-range parameter, zero field,
/// source outside the domain, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Config or frame-file parse failure; carries the offending key and line.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::string key, int line)
      : Error(message + " (key '" + key + "', line " + std::to_string(line) + ")"),
        key_(std::move(key)),
        line_(line) {}

  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

/// Solver non-convergence; carries the Rayleigh-value trajectory and the
/// last residual for diagnostics.
class SolverError : public Error {
 public:
  SolverError(const std::string& message, std::vector<double> trajectory,
              double last_residual)
      : Error(message),
        trajectory_(std::move(trajectory)),
        last_residual_(last_residual) {}

  const std::vector<double>& trajectory() const { return trajectory_; }
  double last_residual() const { return last_residual_; }

 private:
  std::vector<double> trajectory_;
  double last_residual_ = 0.0;
};

/// File I/O failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sublap
