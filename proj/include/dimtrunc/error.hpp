#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dimtrunc {

/// Invalid input, configuration or file content. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed generating-vector or table file; carries the offending line.
class ParseError : public ConfigError {
public:
  ParseError(const std::string& what, std::size_t line)
      : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Numerical failure during an experiment. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The diffusion coefficient is not uniformly positive.
class CoercivityError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Conjugate gradient hit its iteration cap.
class ConvergenceError : public NumericalError {
public:
  ConvergenceError(const std::string& what, double residual)
      : NumericalError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

/// A closed-form constant does not fit in a double.
class RangeError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

}  // namespace dimtrunc
