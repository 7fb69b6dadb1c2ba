#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "log_complex.hpp"
#include "numeric.hpp"

namespace ucorr {

inline constexpr double kDefaultSeparationTol = 1e-10;

/// Ordered list of N >= 1 pairwise distinct complex eigenvalues: the diagonal
/// of X or of Y. Real spectra are the special case with zero imaginary parts.
class Spectrum {
 public:
  std::size_t size() const { return values_.size(); }
  const cdouble& operator[](std::size_t i) const { return values_[i]; }
  std::span<const cdouble> values() const { return values_; }

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  /// Smallest pairwise distance (infinity for N = 1).
  double min_gap() const {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values_.size(); ++i)
      for (std::size_t j = i + 1; j < values_.size(); ++j)
        gap = std::min(gap, std::abs(values_[i] - values_[j]));
    return gap;
  }

  /// min_k |z - v_k|
  double distance_to(cdouble z) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& v : values_) d = std::min(d, std::abs(z - v));
    return d;
  }

  double max_modulus() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  friend Spectrum validate_spectrum(std::vector<cdouble> values, double separation_tol);

 private:
  explicit Spectrum(std::vector<cdouble> v) : values_(std::move(v)) {}
  std::vector<cdouble> values_;
};

/// Checks N >= 1 and pairwise separation > separation_tol. Order is preserved.
inline Spectrum validate_spectrum(std::vector<cdouble> values,
                                  double separation_tol = kDefaultSeparationTol) {
  if (values.empty()) throw EmptySpectrum();
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag()))
      throw InvalidArgument("spectrum entry " + std::to_string(i) + " is not finite");
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      const double gap = std::abs(values[i] - values[j]);
      if (!(gap > separation_tol)) throw DegenerateSpectrum(i, j, gap, separation_tol);
    }
  }
  return Spectrum(std::move(values));
}

inline Spectrum validate_spectrum(std::initializer_list<cdouble> values,
                                  double separation_tol = kDefaultSeparationTol) {
  return validate_spectrum(std::vector<cdouble>(values), separation_tol);
}

/// prod_{i<j} (v_i - v_j), accumulated as a sum of logs.
inline LogComplex vandermonde(const Spectrum& s) {
  double log_magnitude = 0.0;
  cdouble phase{1.0, 0.0};
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const cdouble f = s[i] - s[j];
      const double m = std::abs(f);
      log_magnitude += std::log(m);
      phase *= f / m;
      phase /= std::abs(phase);
    }
  return LogComplex::from_parts(log_magnitude, phase);
}

/// The two spectra of one problem instance, X = diag(x) and Y = diag(y).
/// The remaining invariant, det E != 0, is enforced by the kernel
/// factorization (SingularKernel), since checking it requires an LU.
class ProblemPair {
 public:
  ProblemPair(Spectrum x, Spectrum y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size())
      throw DimensionMismatch("spectra have different lengths: " + std::to_string(x_.size()) +
                              " and " + std::to_string(y_.size()));
  }

  const Spectrum& x() const { return x_; }
  const Spectrum& y() const { return y_; }
  std::size_t size() const { return x_.size(); }

  /// (Y, X): E becomes its transpose.
  ProblemPair swapped() const { return {y_, x_}; }

 private:
  Spectrum x_;
  Spectrum y_;
};

}  // namespace ucorr
