#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace superdir {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or matrix sizes that do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation direction not covered by a pattern or grid.
class OutOfDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Spherical-wave index with |m| > n or s not in {1, 2}.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Zero excitation, duplicate directions and similar degenerate input.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Numerically ill-posed problem. Carries the condition estimate and, for
/// rank-revealing solves, the effective rank.
class ConditioningError : public Error {
 public:
  ConditioningError(const std::string& what, double condition, int effective_rank = -1)
      : Error(what), condition_(condition), effective_rank_(effective_rank) {}

  double condition() const noexcept { return condition_; }
  int effective_rank() const noexcept { return effective_rank_; }

 private:
  double condition_;
  int effective_rank_;
};

class SingularMatrixError : public ConditioningError {
 public:
  using ConditioningError::ConditioningError;
};

/// The coupling matrix C has no inverse.
class CouplingSingularError : public SingularMatrixError {
 public:
  using SingularMatrixError::SingularMatrixError;
};

/// Isolated-element coefficient columns are linearly dependent.
class DegenerateGeometryError : public ConditioningError {
 public:
  using ConditioningError::ConditioningError;
};

/// Quadrature or refinement check failed to reach the requested accuracy.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// Fewer field samples than unknown wave coefficients.
class InsufficientSamplingError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input file. `line` is 1-based, 0 when the error
/// is not tied to a line.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace superdir
