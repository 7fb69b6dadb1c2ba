#pragma once

#include <cmath>
#include <cstddef>

#include "clinalg.hpp"
#include "log_complex.hpp"
#include "precision.hpp"
#include "spectra.hpp"

namespace ucorr {

/// log c_N with c_N = prod_{p=1}^{N-1} p!, the ratio between probability
/// Haar measure and the measure for which I(X,Y) = det E / (Delta(X) Delta(Y)).
inline double log_unitary_normalization(std::size_t n) {
  double total = 0.0;
  for (std::size_t p = 1; p < n; ++p) total += std::lgamma(static_cast<double>(p) + 1.0);
  return total;
}

/// I(X,Y) = det E / (Delta(X) Delta(Y)), the unnormalized convention.
inline LogComplex hciz_value(const ProblemPair& pair, Precision precision = Precision::automatic) {
  const Precision p = resolve_precision(pair, precision);
  const LogComplex det_e = dispatch_precision(p, [&]<class Real>() {
    return KernelFactorization<Real>(pair).log_determinant();
  });
  return det_e / (vandermonde(pair.x()) * vandermonde(pair.y()));
}

/// The same integral under probability Haar measure: c_N * I(X,Y).
inline LogComplex hciz_probability_normalized(const ProblemPair& pair,
                                              Precision precision = Precision::automatic) {
  return hciz_value(pair, precision).scaled_by_exp(log_unitary_normalization(pair.size()));
}

}  // namespace ucorr
