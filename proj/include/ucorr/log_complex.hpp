#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "numeric.hpp"

namespace ucorr {

/// A complex number stored as (log |z|, z/|z|). Products of e^{x_i y_j} and
/// Vandermonde factors overflow doubles long before they become interesting;
/// in this form they are just sums of logs.
///
/// log_magnitude == -inf encodes an exact zero; its phase is then 1.
class LogComplex {
 public:
  LogComplex() = default;

  static LogComplex zero() { return {-std::numeric_limits<double>::infinity(), {1.0, 0.0}}; }
  static LogComplex one() { return {0.0, {1.0, 0.0}}; }

  static LogComplex from_parts(double log_magnitude, cdouble phase) {
    if (log_magnitude == -std::numeric_limits<double>::infinity()) return zero();
    return {log_magnitude, renormalized(phase)};
  }

  template <class Real>
  static LogComplex from(const std::complex<Real>& z) {
    const Real m = num::abs(z);
    if (m == Real(0)) return zero();
    const std::complex<Real> ph{z.real() / m, z.imag() / m};
    return {num::to_double(num::log(m)), renormalized(num::lower(ph))};
  }

  static LogComplex from(double v) { return from(cdouble{v, 0.0}); }

  double log_magnitude() const { return log_magnitude_; }
  cdouble phase() const { return phase_; }
  bool is_zero() const { return log_magnitude_ == -std::numeric_limits<double>::infinity(); }

  /// exp(log_magnitude) * phase; overflows to inf for |z| > DBL_MAX.
  cdouble value() const {
    if (is_zero()) return {0.0, 0.0};
    return std::exp(log_magnitude_) * phase_;
  }

  LogComplex inverse() const {
    return {-log_magnitude_, std::conj(phase_)};  // division by zero gives +inf magnitude
  }

  LogComplex operator-() const { return {log_magnitude_, -phase_}; }

  friend LogComplex operator*(const LogComplex& a, const LogComplex& b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return {a.log_magnitude_ + b.log_magnitude_, renormalized(a.phase_ * b.phase_)};
  }

  friend LogComplex operator/(const LogComplex& a, const LogComplex& b) {
    if (a.is_zero()) return zero();
    return {a.log_magnitude_ - b.log_magnitude_, renormalized(a.phase_ * std::conj(b.phase_))};
  }

  LogComplex& operator*=(const LogComplex& o) { return *this = *this * o; }
  LogComplex& operator/=(const LogComplex& o) { return *this = *this / o; }

  /// Scales by e^{shift}.
  LogComplex scaled_by_exp(double shift) const {
    if (is_zero()) return *this;
    return {log_magnitude_ + shift, phase_};
  }

 private:
  LogComplex(double lm, cdouble ph) : log_magnitude_(lm), phase_(ph) {}

  static cdouble renormalized(cdouble ph) {
    const double m = std::abs(ph);
    return m > 0.0 ? ph / m : cdouble{1.0, 0.0};
  }

  double log_magnitude_ = 0.0;
  cdouble phase_{1.0, 0.0};
};

}  // namespace ucorr
