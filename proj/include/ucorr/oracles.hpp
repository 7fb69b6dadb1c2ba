#pragma once

// Reference evaluators that share no code path with the determinant
// formulas: everything here is a sum over the symmetric group, and
// determinants (det E included) are Leibniz expansions. Cost is N! * 2^N, so
// these are for N <= 6 (7 for the permutation-product form).
//
//   morozov_subset_sum:
//     I W Delta(X) Delta(Y) = sum_rho sgn(rho) e^{sum_l x_l y_rho(l)}
//         sum_{n=0}^{N-1} (-1)^n sum_{i_1<..<i_{n+1}} A_x(i) A_y(rho(i))
//   where A_x is the bordered-Vandermonde ratio with last row a_i = 1/(x - x_i),
//   which collapses to prod_k 1/(x - x_{i_k}).
//
//   permutation_product_form:
//     the same after summing the subsets,
//         sum_rho sgn(rho) e^{sum_l x_l y_rho(l)} [1 - prod_i (1 - a_i b_rho(i))].

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"
#include "precision.hpp"
#include "resolvent.hpp"
#include "spectra.hpp"

namespace ucorr {

enum class BorderMode {
  closed_product,       // ratio = prod_k 1/(x - x_{i_k})
  bordered_determinant  // ratio evaluated literally as two determinants
};

inline constexpr std::size_t kSubsetSumMaxN = 6;
inline constexpr std::size_t kPermutationProductMaxN = 7;

namespace oracle_detail {

/// Calls fn(perm, sign) for every permutation of 0..n-1.
template <class Fn>
void for_each_permutation(std::size_t n, Fn&& fn) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    std::size_t inversions = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) inversions += perm[a] > perm[b] ? 1 : 0;
    fn(perm, inversions % 2 == 0 ? 1 : -1);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

/// Leibniz determinant of a small square matrix (row vectors).
template <class Complex>
Complex leibniz_det(const std::vector<std::vector<Complex>>& rows) {
  const std::size_t n = rows.size();
  Complex total(0);
  for_each_permutation(n, [&](const std::vector<std::size_t>& perm, int sign) {
    Complex term(sign);
    for (std::size_t r = 0; r < n; ++r) term *= rows[r][perm[r]];
    total += term;
  });
  return total;
}

template <class Real>
struct Weighted {
  using Complex = std::complex<Real>;
  std::vector<Complex> x, y;  // spectra in working precision
  Real shift;                 // sum_l max_j Re(x_l y_j)
};

template <class Real>
Weighted<Real> lift_pair(const ProblemPair& pair) {
  Weighted<Real> w;
  for (const auto& v : pair.x()) w.x.push_back(num::lift<Real>(v));
  for (const auto& v : pair.y()) w.y.push_back(num::lift<Real>(v));
  w.shift = Real(0);
  for (const auto& xl : w.x) {
    Real best = (xl * w.y[0]).real();
    for (const auto& yj : w.y) best = std::max(best, (xl * yj).real());
    w.shift += best;
  }
  return w;
}

/// sgn(rho) e^{sum_l x_l y_rho(l) - shift}
template <class Real>
std::complex<Real> permutation_weight(const Weighted<Real>& w, const std::vector<std::size_t>& rho,
                                      int sign) {
  std::complex<Real> exponent(-w.shift);
  for (std::size_t l = 0; l < rho.size(); ++l) exponent += w.x[l] * w.y[rho[l]];
  return Real(sign) * num::exp(exponent);
}

/// Ratio of the bordered Vandermonde (rows v^0..v^{n-1}, then `border`) to
/// the plain one (rows v^0..v^n), over the points selected by `mask`.
template <class Real>
std::complex<Real> bordered_ratio(const std::vector<std::complex<Real>>& points,
                                  const std::vector<std::complex<Real>>& border, std::uint32_t mask) {
  using Complex = std::complex<Real>;
  std::vector<std::size_t> cols;
  for (std::size_t k = 0; k < points.size(); ++k)
    if (mask & (1u << k)) cols.push_back(k);
  const std::size_t m = cols.size();
  std::vector<std::vector<Complex>> num(m, std::vector<Complex>(m)), den = num;
  for (std::size_t c = 0; c < m; ++c) {
    Complex power(1);
    for (std::size_t p = 0; p < m; ++p) {
      den[p][c] = power;
      if (p + 1 < m) num[p][c] = power;
      power *= points[cols[c]];
    }
    num[m - 1][c] = border[cols[c]];
  }
  return leibniz_det(num) / leibniz_det(den);
}

template <class Real>
std::complex<Real> closed_ratio(const std::vector<std::complex<Real>>& weights, std::uint32_t mask) {
  std::complex<Real> r(1);
  for (std::size_t k = 0; k < weights.size(); ++k)
    if (mask & (1u << k)) r *= weights[k];
  return r;
}

template <class Real>
std::vector<std::complex<Real>> resolvent_weights(const std::vector<std::complex<Real>>& s,
                                                  cdouble z) {
  const auto zz = num::lift<Real>(z);
  std::vector<std::complex<Real>> w;
  for (const auto& v : s) w.push_back(std::complex<Real>(1) / (zz - v));
  return w;
}

template <class Real>
cdouble subset_sum(const ProblemPair& pair, const ResolventPoint& pt, BorderMode mode) {
  using Complex = std::complex<Real>;
  const std::size_t n = pair.size();
  const auto w = lift_pair<Real>(pair);
  const auto a = resolvent_weights(w.x, pt.x);
  const auto b = resolvent_weights(w.y, pt.y);
  const std::uint32_t full = (1u << n) - 1;

  std::vector<Complex> ratio_x(full + 1), ratio_y(full + 1);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (mode == BorderMode::closed_product) {
      ratio_x[mask] = closed_ratio(a, mask);
      ratio_y[mask] = closed_ratio(b, mask);
    } else {
      ratio_x[mask] = bordered_ratio(w.x, a, mask);
      ratio_y[mask] = bordered_ratio(w.y, b, mask);
    }
  }

  Complex numerator(0), det_e(0);
  for_each_permutation(n, [&](const std::vector<std::size_t>& rho, int sign) {
    const Complex weight = permutation_weight(w, rho, sign);
    Complex inner(0);
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      std::uint32_t image = 0;
      for (std::size_t k = 0; k < n; ++k)
        if (mask & (1u << k)) image |= 1u << rho[k];
      const Complex term = ratio_x[mask] * ratio_y[image];
      // (-1)^n with n + 1 = |subset|
      if (std::popcount(mask) % 2 == 1) {
        inner += term;
      } else {
        inner -= term;
      }
    }
    numerator += weight * inner;
    det_e += weight;
  });
  return num::lower(numerator / det_e);
}

template <class Real>
cdouble permutation_product(const ProblemPair& pair, const ResolventPoint& pt) {
  using Complex = std::complex<Real>;
  const auto w = lift_pair<Real>(pair);
  const auto a = resolvent_weights(w.x, pt.x);
  const auto b = resolvent_weights(w.y, pt.y);
  Complex numerator(0), det_e(0);
  for_each_permutation(pair.size(), [&](const std::vector<std::size_t>& rho, int sign) {
    const Complex weight = permutation_weight(w, rho, sign);
    Complex product(1);
    for (std::size_t i = 0; i < rho.size(); ++i) product *= Complex(1) - a[i] * b[rho[i]];
    numerator += weight * (Complex(1) - product);
    det_e += weight;
  });
  return num::lower(numerator / det_e);
}

}  // namespace oracle_detail

/// W(x, y) from the original subset sum over S_N, divided by det E (itself a
/// Leibniz sum). `automatic` precision means at least binary128.
inline cdouble morozov_subset_sum(const ProblemPair& pair, const ResolventPoint& pt,
                                  BorderMode mode = BorderMode::closed_product,
                                  Precision precision = Precision::automatic,
                                  double pole_tol = kDefaultPoleTol) {
  if (pair.size() > kSubsetSumMaxN)
    throw DimensionTooLarge("subset-sum oracle is limited to N <= 6");
  check_off_pole(pair, pt, pole_tol);
  const Precision p = resolve_precision(pair, precision, Precision::binary128);
  return dispatch_precision(
      p, [&]<class Real>() { return oracle_detail::subset_sum<Real>(pair, pt, mode); });
}

/// W(x, y) from sum_rho sgn(rho) e^{..} [1 - prod_i (1 - a_i b_rho(i))] / det E.
inline cdouble permutation_product_form(const ProblemPair& pair, const ResolventPoint& pt,
                                        Precision precision = Precision::automatic,
                                        double pole_tol = kDefaultPoleTol) {
  if (pair.size() > kPermutationProductMaxN)
    throw DimensionTooLarge("permutation-product oracle is limited to N <= 7");
  check_off_pole(pair, pt, pole_tol);
  const Precision p = resolve_precision(pair, precision, Precision::binary128);
  return dispatch_precision(
      p, [&]<class Real>() { return oracle_detail::permutation_product<Real>(pair, pt); });
}

}  // namespace ucorr
