#pragma once

#include <stdexcept>
#include <string>

namespace rna {

/// Scale or exponent outside the range representable by a double.
class RangeError : public std::range_error {
public:
  using std::range_error::range_error;
};

/// Caller broke a documented precondition (negative coefficient, bad exponent, ...).
class ContractViolation : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// The requested mode cannot handle these parameters (knapsack on a
/// non-additive norm, geometric bound for an uncertified weight, ...).
class CapabilityError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class NumericError : public std::runtime_error {
public:
  NumericError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_tolerance() const noexcept { return achieved_; }

private:
  double achieved_;
};

/// A Lorentz integral that does not converge at t -> 0.
class DivergenceError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

}  // namespace rna
