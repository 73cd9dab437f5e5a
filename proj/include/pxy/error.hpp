#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pxy {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input data problems: too few observations, non-finite values, malformed files.
class DataError : public Error {
public:
  using Error::Error;
};

class InsufficientData : public DataError {
public:
  using DataError::DataError;
};

/// Zero spread where a scale is required (zero SD, all values tied, ...).
class DegenerateSample : public DataError {
public:
  using DataError::DataError;
};

class ParseError : public DataError {
public:
  ParseError(std::size_t row, const std::string& what)
      : DataError("row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

private:
  std::size_t row_;
};

class FormatError : public DataError {
public:
  using DataError::DataError;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Numerical procedure failed to reach its tolerance.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Adaptive quadrature ran out of subdivisions; carries the best estimate.
class NonConvergence : public NumericalError {
public:
  NonConvergence(const std::string& what, double best_estimate, double error_estimate)
      : NumericalError(what), best_(best_estimate), err_(error_estimate) {}

  double best_estimate() const noexcept { return best_; }
  double error_estimate() const noexcept { return err_; }

private:
  double best_;
  double err_;
};

}  // namespace pxy
