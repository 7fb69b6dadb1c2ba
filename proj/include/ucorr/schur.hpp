#pragma once

// Hook Schur polynomials S_r(v_1..v_{n+1}): the ratio of a bordered
// Vandermonde determinant (powers 0..n-1 plus a last row of r-th powers) to
// the plain (n+1)x(n+1) Vandermonde, which equals the complete homogeneous
// symmetric polynomial h_{r-n}(v).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "clinalg.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "numeric.hpp"
#include "spectra.hpp"

namespace ucorr {

struct HookSchurInput {
  std::vector<cdouble> variables;  // n + 1 values
  int degree_r = 0;
};

namespace detail {

inline void check_degree(std::size_t count, int r) {
  if (count == 0) throw InvalidArgument("hook Schur polynomial needs at least one variable");
  const int n = static_cast<int>(count) - 1;
  if (r < n)
    throw InvalidDegree("degree r = " + std::to_string(r) + " is below n = " + std::to_string(n));
}

inline cdouble ipow(cdouble z, int k) {
  cdouble out{1.0, 0.0};
  for (int i = 0; i < k; ++i) out *= z;
  return out;
}

}  // namespace detail

/// Determinant-ratio form. Requires r >= n and distinct variables.
inline cdouble schur_hook_det(const HookSchurInput& in,
                              double separation_tol = kDefaultSeparationTol) {
  const auto& v = in.variables;
  detail::check_degree(v.size(), in.degree_r);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (!(std::abs(v[i] - v[j]) > separation_tol))
        throw DegenerateVariables("hook Schur variables " + std::to_string(i) + " and " +
                                  std::to_string(j) + " coincide");

  const std::size_t m = v.size();
  if (m == 1) return detail::ipow(v[0], in.degree_r);

  Matrix<cdouble> num(m, m), den(m, m);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t p = 0; p < m; ++p) den(p, c) = detail::ipow(v[c], static_cast<int>(p));
    for (std::size_t p = 0; p + 1 < m; ++p) num(p, c) = den(p, c);
    num(m - 1, c) = detail::ipow(v[c], in.degree_r);
  }
  const LuFactorization<double> ln(std::move(num));
  const LuFactorization<double> ld(std::move(den));
  return (ln.log_determinant() / ld.log_determinant()).value();
}

namespace detail {

/// h_0..h_k of the given variables via h_k(v_1..v_m) = h_k(v_1..v_{m-1}) + v_m h_{k-1}(v_1..v_m).
inline std::vector<cdouble> homogeneous_table(std::span<const cdouble> vars, std::size_t k_max) {
  std::vector<cdouble> h(k_max + 1, cdouble{0.0, 0.0});
  h[0] = 1.0;
  for (const auto& v : vars)
    for (std::size_t k = 1; k <= k_max; ++k) h[k] += v * h[k - 1];
  return h;
}

}  // namespace detail

/// Monomial-sum form, S_r = h_{r-n}(variables). Variables may repeat.
inline cdouble schur_hook_sum(std::span<const cdouble> variables, int degree_r) {
  detail::check_degree(variables.size(), degree_r);
  const auto k = static_cast<std::size_t>(degree_r - static_cast<int>(variables.size()) + 1);
  return detail::homogeneous_table(variables, k)[k];
}

struct SchurSeries {
  cdouble partial_sum;    // sum_{r=n}^{R_max} S_r / x^{r+1}
  cdouble product_value;  // prod_k 1/(x - v_k)
};

template <class Real>
struct SchurSeriesIn {
  std::complex<Real> partial_sum;
  std::complex<Real> product_value;
};

/// schur_generating_partial carried out in Real; with binary128 the gap
/// between the two members is the truncation error alone, free of rounding.
template <class Real>
SchurSeriesIn<Real> schur_generating_partial_in(std::span<const cdouble> variables, cdouble x,
                                                 int r_max) {
  using Complex = std::complex<Real>;
  if (variables.empty()) throw InvalidArgument("generating function needs at least one variable");
  const int n = static_cast<int>(variables.size()) - 1;
  if (r_max < n) throw InvalidDegree("R_max is below n");
  double vmax = 0.0;
  for (const auto& v : variables) vmax = std::max(vmax, std::abs(v));
  if (!(std::abs(x) > vmax))
    throw DivergentSeries("generating function needs |x| > max |v_k|");

  // sum_m h_m(v) x^{-(m+n+1)} = x^{-(n+1)} sum_m h_m(v/x), which keeps every
  // term O(rho^m) instead of forming v^r and x^r separately.
  const Complex xx = num::lift<Real>(x);
  std::vector<Complex> h(static_cast<std::size_t>(r_max - n) + 1, Complex(0));
  h[0] = Complex(1);
  for (const auto& v : variables) {
    const Complex z = num::lift<Real>(v) / xx;
    for (std::size_t k = 1; k < h.size(); ++k) h[k] += z * h[k - 1];
  }
  Complex series(0);
  for (std::size_t m = h.size(); m-- > 0;) series += h[m];  // small terms first
  Complex lead(1);
  for (int k = 0; k <= n; ++k) lead /= xx;

  Complex product(1);
  for (const auto& v : variables) product /= (xx - num::lift<Real>(v));
  return {series * lead, product};
}

/// Truncated generating function next to its closed form. Terms with r < n
/// vanish; requires |x| > max |v_k|.
inline SchurSeries schur_generating_partial(std::span<const cdouble> variables, cdouble x,
                                            int r_max) {
  const auto s = schur_generating_partial_in<double>(variables, x, r_max);
  return {s.partial_sum, s.product_value};
}

/// Geometric tail estimate (n+1) rho^{R-n+1} / ((1-rho) |x|), rho = max|v_k|/|x|.
inline double schur_generating_tail_bound(int n, double rho, int r_max, double abs_x) {
  return (n + 1) * std::pow(rho, r_max - n + 1) / ((1.0 - rho) * abs_x);
}

}  // namespace ucorr
