#pragma once

#include <cstddef>
#include <stdexcept>
#include <cstdio>
#include <string>

namespace ucorr {

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

/// Root of every exception the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs that violate a precondition (bad spectra, singular kernel, pole hits).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computed quantity failed an internal consistency check.
class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

/// Monte Carlo estimators whose statistics are unusable.
class MonteCarloError : public Error {
 public:
  using Error::Error;
};

class EmptySpectrum : public ValidationError {
 public:
  EmptySpectrum() : ValidationError("spectrum is empty") {}
};

class DegenerateSpectrum : public ValidationError {
 public:
  DegenerateSpectrum(std::size_t i, std::size_t j, double gap, double tol)
      : ValidationError("spectrum entries " + std::to_string(i) + " and " + std::to_string(j) +
                        " are separated by " + format_number(gap) + " (tolerance " +
                        format_number(tol) + ")"),
        first(i),
        second(j),
        gap(gap) {}

  std::size_t first;
  std::size_t second;
  double gap;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SingularKernel : public ValidationError {
 public:
  SingularKernel() : ValidationError("kernel matrix exp(x_i y_j) is singular (exact zero pivot)") {}
};

class DegenerateVariables : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidDegree : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DivergentSeries : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class PoleProximity : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IndexOutOfRange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionTooLarge : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidArgument : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class StochasticityViolation : public NumericalBreakdown {
 public:
  StochasticityViolation(double deviation, double condition)
      : NumericalBreakdown("correlator row/column sums deviate from 1 by " +
                           format_number(deviation) + " (kernel condition estimate " +
                           format_number(condition) + ")"),
        deviation(deviation),
        condition(condition) {}

  double deviation;
  double condition;
};

class VarianceOverflow : public MonteCarloError {
 public:
  VarianceOverflow() : MonteCarloError("Monte Carlo variance is not finite") {}
};

class DegenerateDenominator : public MonteCarloError {
 public:
  DegenerateDenominator()
      : MonteCarloError("Monte Carlo weight mean is within 2 standard errors of zero") {}
};

}  // namespace ucorr
