#pragma once

#include <stdexcept>
#include <string>

namespace apdg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or an inconsistent combination of options.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A user-supplied pointwise function returned a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// A boundary interface was traced without a boundary closure.
class MissingGhostError : public Error {
 public:
  using Error::Error;
};

/// Porous collision term evaluated where rho <= 0 and m < 0.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// A stage solve could not be completed (singular or non-finite block).
class NumericalBreakdown : public Error {
 public:
  NumericalBreakdown(const std::string& what, int element)
      : Error(what + " (element " + std::to_string(element) + ")"),
        element_(element) {}

  int element() const noexcept { return element_; }

 private:
  int element_;
};

}  // namespace apdg
