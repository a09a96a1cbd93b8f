#pragma once

#include <stdexcept>
#include <string>

namespace bcl {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its documented range (family constructors, grids, sizes).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Channel parameters violate the complete-positivity condition.
class NonPhysical : public Error {
 public:
  using Error::Error;
};

class UnsupportedDirection : public Error {
 public:
  using Error::Error;
};

class ModeMismatch : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Covariance matrix violates the uncertainty principle (symplectic eigenvalue < 1).
class InvalidCovariance : public Error {
 public:
  using Error::Error;
};

class NonHermitian : public Error {
 public:
  using Error::Error;
};

class NegativeArgument : public Error {
 public:
  using Error::Error;
};

class InvalidGrid : public Error {
 public:
  using Error::Error;
};

/// A reference state for a relative-entropy evaluation is not full rank on the support used.
class SingularReference : public Error {
 public:
  using Error::Error;
};

/// A Fock-space computation lost more population to truncation than the configured budget allows.
/// Raised instead of silently renormalizing.
class TruncationBudgetExceeded : public Error {
 public:
  TruncationBudgetExceeded(const std::string& what, double consumed, double budget)
      : Error(what + " (lost population " + std::to_string(consumed) + " > budget " +
              std::to_string(budget) + ")"),
        consumed_(consumed),
        budget_(budget) {}

  double consumed() const { return consumed_; }
  double budget() const { return budget_; }

 private:
  double consumed_;
  double budget_;
};

}  // namespace bcl
