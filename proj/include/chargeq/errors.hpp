#pragma once

#include <stdexcept>
#include <string>

namespace chargeq {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by the caller (bad shape, asymmetric input, ...).
class ContractViolation : public Error {
 public:
  explicit ContractViolation(const std::string& what, double magnitude = 0.0)
      : Error(what), magnitude_(magnitude) {}

  /// Size of the violation, e.g. the largest asymmetry |m(i,j) - m(j,i)|.
  double magnitude() const noexcept { return magnitude_; }

 private:
  double magnitude_;
};

class DimensionMismatch : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

/// Matrix expected to be positive semidefinite has an eigenvalue below the clip tolerance.
class NotPositiveSemidefinite : public Error {
 public:
  NotPositiveSemidefinite(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}

  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// Argument outside the mathematical domain of an operation (T <= 0, unnormalized state, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnsupportedInput : public Error {
 public:
  using Error::Error;
};

/// A computed quantity escaped the range the math guarantees; indicates a numerical bug.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace chargeq
