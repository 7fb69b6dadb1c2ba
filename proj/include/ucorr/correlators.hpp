#pragma once

// <|U_ij|^2> as the double residue of W(x, y) at (x_i, y_j).
//
// With u_k = 1/(x - x_k) and v_l = 1/(y - y_l),
//   W = 1 - det T / det S,   T_kl = S_kl (1 - u_k v_l).
// Only row i of T depends on u_i and only column j on v_j, so det T is affine
// in each, and the residue at x_i, y_j is minus the coefficient of u_i v_j
// with the remaining weights frozen at u_k = 1/(x_i - x_k), v_l = 1/(y_j - y_l).
// Differentiating the determinant row-wise and then column-wise gives that
// coefficient as a single determinant det M_ij, where M_ij is T with
//   row i     -> -S_il v_l
//   column j  -> -u_k S_kj
//   entry ij  -> -S_ij.
// One determinant per entry; the corner differences h(1,1)-h(1,0)-h(0,1)+h(0,0)
// of the same affine function cancel catastrophically for N >= 6.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "clinalg.hpp"
#include "correlator_matrix.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "precision.hpp"
#include "resolvent.hpp"
#include "spectra.hpp"

namespace ucorr {

inline constexpr double kDefaultRowSumTol = 1e-8;

struct CorrelatorOptions {
  Precision precision = Precision::automatic;
  double row_sum_tol = kDefaultRowSumTol;
  unsigned threads = 1;
};

namespace detail {

inline void check_index(const ProblemPair& pair, std::size_t i, std::size_t j) {
  if (i >= pair.size() || j >= pair.size())
    throw IndexOutOfRange("correlator index (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") outside an N = " + std::to_string(pair.size()) + " problem");
}

template <class Real>
cdouble affine_entry(const KernelFactorization<Real>& f, const ProblemPair& pair, std::size_t i,
                     std::size_t j) {
  using Complex = std::complex<Real>;
  const std::size_t n = pair.size();
  const auto& s = f.kernel().scaled_entries();
  std::vector<Complex> u(n, Complex(0)), v(n, Complex(0));
  for (std::size_t k = 0; k < n; ++k) {
    if (k != i) u[k] = Complex(1) / (num::lift<Real>(pair.x()[i]) - num::lift<Real>(pair.x()[k]));
    if (k != j) v[k] = Complex(1) / (num::lift<Real>(pair.y()[j]) - num::lift<Real>(pair.y()[k]));
  }
  Matrix<Complex> m(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      if (k != i && l != j) {
        m(k, l) = s(k, l) * (Complex(1) - u[k] * v[l]);
      } else if (k == i && l != j) {
        m(k, l) = -s(k, l) * v[l];
      } else if (k != i) {
        m(k, l) = -u[k] * s(k, l);
      } else {
        m(k, l) = -s(k, l);
      }
    }
  const LogComplex coefficient =
      LuFactorization<Real>(std::move(m)).log_determinant() / f.log_determinant_scaled();
  return -coefficient.value();
}

}  // namespace detail

/// <|U_ij|^2> by exact coefficient extraction from the multi-affine determinant.
inline cdouble correlator_entry_affine(const ProblemPair& pair, std::size_t i, std::size_t j,
                                       Precision precision = Precision::automatic) {
  detail::check_index(pair, i, j);
  const Precision p = resolve_precision(pair, precision);
  return dispatch_precision(p, [&]<class Real>() {
    return detail::affine_entry(KernelFactorization<Real>(pair), pair, i, j);
  });
}

/// Every <|U_ij|^2>, sharing one factorization. Throws StochasticityViolation
/// if a row or column sum misses 1 by more than row_sum_tol.
inline CorrelatorMatrix correlator_matrix(const ProblemPair& pair,
                                          const CorrelatorOptions& opts = {}) {
  const std::size_t n = pair.size();
  const Precision p = resolve_precision(pair, opts.precision);
  CorrelatorMatrix out{n, Matrix<cdouble>(n, n), p};
  double condition = 0.0;
  dispatch_precision(p, [&]<class Real>() {
    const KernelFactorization<Real> f(pair);
    condition = f.condition_estimate();
    parallel_for(n, opts.threads, [&](std::size_t i) {
      for (std::size_t j = 0; j < n; ++j) out.p(i, j) = detail::affine_entry(f, pair, i, j);
    });
    return 0;
  });
  const double deviation = out.max_sum_deviation();
  if (!(deviation <= opts.row_sum_tol)) throw StochasticityViolation(deviation, condition);
  return out;
}

struct QuadratureOptions {
  double radius_fraction = 0.25;
  std::size_t nodes = 64;
  Precision precision = Precision::automatic;
};

/// (1/2 pi i)^2 times the double contour integral of W around x_i and y_j, by
/// the tensor trapezoidal rule on circles of radius radius_fraction times the
/// distance to the nearest other spectrum point (radius_fraction itself when
/// N = 1). The rule converges geometrically since W is rational.
inline cdouble correlator_entry_quadrature(const ProblemPair& pair, std::size_t i, std::size_t j,
                                           const QuadratureOptions& opts = {}) {
  detail::check_index(pair, i, j);
  if (!(opts.radius_fraction > 0.0 && opts.radius_fraction < 0.5))
    throw InvalidArgument("radius_fraction must lie in (0, 0.5)");
  if (opts.nodes < 16) throw InvalidArgument("quadrature needs at least 16 nodes");

  auto radius = [&](const Spectrum& s, std::size_t c) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < s.size(); ++k)
      if (k != c) gap = std::min(gap, std::abs(s[k] - s[c]));
    return opts.radius_fraction * (std::isfinite(gap) ? gap : 1.0);
  };
  const double rx = radius(pair.x(), i);
  const double ry = radius(pair.y(), j);
  const std::size_t m = opts.nodes;
  std::vector<cdouble> offsets(m);
  for (std::size_t k = 0; k < m; ++k)
    offsets[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m));

  const Precision p = resolve_precision(pair, opts.precision);
  return dispatch_precision(p, [&]<class Real>() {
    using Complex = std::complex<Real>;
    const ResolventEvaluator<Real> eval(pair, 0.0);
    std::vector<std::vector<Complex>> u(m);
    for (std::size_t k = 0; k < m; ++k) u[k] = eval.x_weights(pair.x()[i] + rx * offsets[k]);
    Complex total(0);
    for (std::size_t l = 0; l < m; ++l) {
      const auto k_op = eval.y_operator(eval.y_weights(pair.y()[j] + ry * offsets[l]));
      Complex inner(0);
      for (std::size_t k = 0; k < m; ++k)
        inner += eval.one_minus_det(u[k], k_op) * num::lift<Real>(offsets[k]);
      total += inner * num::lift<Real>(offsets[l]);
    }
    const Complex scale = num::lift<Real>(cdouble{rx * ry / static_cast<double>(m * m), 0.0});
    return num::lower(total * scale);
  });
}

}  // namespace ucorr
