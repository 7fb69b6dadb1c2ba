#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "matrix.hpp"
#include "numeric.hpp"

namespace ucorr {

/// P(i, j) = <|U_ij|^2>: the coefficient of 1/((x - x_i)(y - y_j)) in the
/// resolvent correlator, so i runs over the X spectrum and j over Y.
/// Doubly stochastic.
struct CorrelatorMatrix {
  std::size_t n = 0;
  Matrix<cdouble> p;
  Precision precision = Precision::binary64;  // precision the entries were computed in

  cdouble row_sum(std::size_t i) const {
    cdouble s{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) s += p(i, j);
    return s;
  }

  cdouble column_sum(std::size_t j) const {
    cdouble s{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) s += p(i, j);
    return s;
  }

  /// max over rows and columns of |sum - 1|
  double max_sum_deviation() const {
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      worst = std::max(worst, std::abs(row_sum(k) - 1.0));
      worst = std::max(worst, std::abs(column_sum(k) - 1.0));
    }
    return worst;
  }
};

}  // namespace ucorr
