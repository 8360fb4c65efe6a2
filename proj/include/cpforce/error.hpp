#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cpforce {

enum class ErrorKind {
  domain,
  pole,
  numeric,
  convergence,
  unphysical,
  not_applicable,
  degenerate,
  config,
  validity,
};

// Base of every exception thrown by the library. The C API maps `kind()`
// onto its status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorKind::domain, what) {}
};

class NotApplicableError : public Error {
 public:
  explicit NotApplicableError(const std::string& what)
      : Error(ErrorKind::not_applicable, what) {}
};

// A reflection-coefficient denominator vanished (surface-mode pole on the
// integration path) or an asymptotic form hit its divergence.
class PoleError : public Error {
 public:
  PoleError(const std::string& what, double location)
      : Error(ErrorKind::pole, what), location_(location) {}
  double location() const noexcept { return location_; }

 private:
  double location_;
};

// Adaptive quadrature or time stepping exhausted its budget.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double estimate, double error_bound)
      : Error(ErrorKind::numeric, what),
        estimate_(estimate),
        error_bound_(error_bound) {}
  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> residuals)
      : Error(ErrorKind::convergence, what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

class UnphysicalError : public Error {
 public:
  explicit UnphysicalError(const std::string& what)
      : Error(ErrorKind::unphysical, what) {}
};

class DegeneracyError : public Error {
 public:
  explicit DegeneracyError(const std::string& what)
      : Error(ErrorKind::degenerate, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::config, what) {}
};

class ValidityError : public Error {
 public:
  explicit ValidityError(const std::string& what)
      : Error(ErrorKind::validity, what) {}
};

}  // namespace cpforce
