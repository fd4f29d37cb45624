#pragma once

#include <stdexcept>
#include <string>

namespace dqlin {

/// Base class for all library failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or non-finite user input.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Query outside the covered time range.
class RangeError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DegreeOverflow : public Error {
 public:
  using Error::Error;
};

/// Gaussian integral whose real quadratic part is not positive definite.
class DivergentIntegral : public Error {
 public:
  using Error::Error;
};

/// Neither star-product strategy applies, or strategy 2 hit a singular matrix.
class StrategyError : public Error {
 public:
  using Error::Error;
};

/// Adaptive integration gave up; `time()` is where the step size collapsed.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double t) : Error(what), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// A constructed object failed its own defining equations.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

}  // namespace dqlin
