#pragma once

#include <stdexcept>
#include <string>

namespace opgeo {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Operand dimensions do not match, or a dimension is out of range.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An operand that must be positive definite is not.  Carries the smallest
// eigenvalue actually observed.
class DefinitenessError : public Error {
 public:
  DefinitenessError(const std::string& operand, double lambda_min)
      : Error("operand '" + operand + "' is not positive definite: smallest eigenvalue " +
              std::to_string(lambda_min)),
        operand_(operand),
        lambda_min_(lambda_min) {}

  const std::string& operand() const { return operand_; }
  double lambda_min() const { return lambda_min_; }

 private:
  std::string operand_;
  double lambda_min_;
};

// An eigenvalue falls outside the domain of the scalar function being lifted.
class DomainError : public Error {
 public:
  DomainError(const std::string& fn_id, double eigenvalue, const std::string& domain)
      : Error("eigenvalue " + std::to_string(eigenvalue) + " lies outside the domain " + domain +
              " of function '" + fn_id + "'"),
        fn_id_(fn_id),
        eigenvalue_(eigenvalue) {}

  const std::string& fn_id() const { return fn_id_; }
  double eigenvalue() const { return eigenvalue_; }

 private:
  std::string fn_id_;
  double eigenvalue_;
};

// The iterative eigensolver exhausted its sweep budget.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(double residual)
      : Error("eigensolver did not converge: off-diagonal residual " + std::to_string(residual)),
        residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

// Adaptive quadrature exhausted its refinement budget with an error estimate
// still far above the requested tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(double estimate, double abs_tol)
      : Error("quadrature refinement budget exhausted: error estimate " + std::to_string(estimate) +
              " exceeds 10 * abs_tol = " + std::to_string(10 * abs_tol)),
        estimate_(estimate) {}

  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

// Invalid configuration supplied by the caller (CLI flags, generator config,
// quadrature spec, malformed parameter combinations).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A rejection-sampling budget ran out before an admissible draw was found.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// Unknown catalogue or registry id.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Malformed matrix text input; message carries file and line.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A chain term could not be evaluated; message names the chain and the term.
class TermEvalError : public Error {
 public:
  using Error::Error;
};

}  // namespace opgeo
