#pragma once

#include <stdexcept>
#include <string>

namespace mrmt {

// Invalid arguments or inputs outside a function's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A quadrature or series failed to reach the requested tolerance.
// The best estimate found so far travels with the exception.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, double error_estimate)
      : std::runtime_error(what), best_(best_estimate), error_(error_estimate) {}

  double best_estimate() const noexcept { return best_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double best_;
  double error_;
};

// Linear algebra failures and violated numerical guards.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptySampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public DomainError {
 public:
  ParseError(const std::string& what, std::size_t line) : DomainError(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mrmt
