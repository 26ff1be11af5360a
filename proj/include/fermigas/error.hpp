#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fermigas {

enum class ErrorKind { Config, Numerical, Io };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Invalid parameters, unknown kinds, violated preconditions.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

// Requested diagnostic is not available for this input (e.g. no analytic derivatives).
class UnsupportedError : public ConfigError {
 public:
  explicit UnsupportedError(const std::string& what) : ConfigError(what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class RefinementError : public NumericalError {
 public:
  RefinementError(const std::string& what, double last, double previous)
      : NumericalError(what), last_estimate(last), previous_estimate(previous) {}
  double last_estimate;
  double previous_estimate;
};

class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : NumericalError(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

// Input lies outside the region where the computation is meaningful.
class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Output directory or file could not be written.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace fermigas
