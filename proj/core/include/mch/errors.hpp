#pragma once

#include <stdexcept>
#include <string>

namespace mch {

/// Argument outside the mathematical domain of an operation (k ≥ 1, Δ ≤ 0,
/// stencil leaving the valid region, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Non-finite data handed to a routine that requires finite samples.
class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base for failures of a numerical procedure on otherwise valid input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite-difference step-halving consistency gate failed.
class AccuracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Operator assembly consistency gate failed.
class AssemblyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Kernel dimension differs from what a counting formula presumes.
class RankError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Parametrization along a wave branch degenerates (dc/dk ≈ 0).
class SingularParametrization : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace mch
