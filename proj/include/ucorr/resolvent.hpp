#pragma once

// Two-point resolvent correlator
//
//   W(x, y) = < tr( (x - X)^{-1} U (y - Y)^{-1} U^dagger ) >
//           = 1 - det( I - (x - X)^{-1} E (y - Y)^{-1} E^{-1} )
//           = 1 - det( E - (x - X)^{-1} E (y - Y)^{-1} ) / det E .
//
// W is rational in x and y with poles only on the spectra, so both forms are
// evaluated at any off-pole point, not just outside the spectral disks.
//
// Row scaling of E is a similarity on D_x E D_y E^{-1}, so both forms are
// evaluated on the scaled kernel S directly:
//   D_x E D_y E^{-1} = diag(e^m) [D_x S D_y S^{-1}] diag(e^-m).

#include <cstddef>
#include <span>
#include <vector>

#include "clinalg.hpp"
#include "correlator_matrix.hpp"
#include "errors.hpp"
#include "precision.hpp"
#include "spectra.hpp"

namespace ucorr {

inline constexpr double kDefaultPoleTol = 1e-8;

struct ResolventPoint {
  cdouble x;
  cdouble y;
};

struct ResolventValue {
  cdouble w;
};

struct ResolventOptions {
  Precision precision = Precision::automatic;
  double pole_tol = kDefaultPoleTol;
};

inline void check_off_pole(const ProblemPair& pair, const ResolventPoint& pt, double pole_tol) {
  const double dx = pair.x().distance_to(pt.x);
  const double dy = pair.y().distance_to(pt.y);
  if (!(dx > pole_tol) || !(dy > pole_tol))
    throw PoleProximity("evaluation point lies within " + std::to_string(std::min(dx, dy)) +
                        " of a pole (tolerance " + std::to_string(pole_tol) + ")");
}

/// A pair with its kernel factorized once; evaluations at any number of points
/// reuse the factorization. Immutable, so safe to share between threads.
template <class Real>
class ResolventEvaluator {
 public:
  using Complex = std::complex<Real>;

  explicit ResolventEvaluator(ProblemPair pair, double pole_tol = kDefaultPoleTol)
      : pair_(std::move(pair)), factorization_(pair_), pole_tol_(pole_tol) {}

  const ProblemPair& pair() const { return pair_; }
  const KernelFactorization<Real>& factorization() const { return factorization_; }
  std::size_t size() const { return pair_.size(); }

  /// a_k = 1/(x - x_k)
  std::vector<Complex> x_weights(cdouble x) const { return weights(pair_.x(), x); }
  /// b_k = 1/(y - y_k)
  std::vector<Complex> y_weights(cdouble y) const { return weights(pair_.y(), y); }

  /// K = S D_v S^{-1}, via one right-solve per row.
  Matrix<Complex> y_operator(std::span<const Complex> v) const {
    const auto& s = factorization_.kernel().scaled_entries();
    Matrix<Complex> f(size(), size());
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) f(i, j) = s(i, j) * v[j];
    return factorization_.solve_right_scaled(f);
  }

  /// 1 - det(I - D_u K)
  Complex one_minus_det(std::span<const Complex> u, const Matrix<Complex>& k) const {
    Matrix<Complex> a(size(), size());
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j)
        a(i, j) = (i == j ? Complex(1) : Complex(0)) - u[i] * k(i, j);
    return Complex(1) - LuFactorization<Real>(std::move(a)).determinant();
  }

  /// Identity-minus form.
  ResolventValue operator()(const ResolventPoint& pt) const {
    check_off_pole(pair_, pt, pole_tol_);
    const auto u = x_weights(pt.x);
    const auto v = y_weights(pt.y);
    return {num::lower(one_minus_det(u, y_operator(v)))};
  }

  /// Ratio form, 1 - det(S - D_u S D_v) / det S. No solve.
  ResolventValue ratio_form(const ResolventPoint& pt) const {
    check_off_pole(pair_, pt, pole_tol_);
    const auto u = x_weights(pt.x);
    const auto v = y_weights(pt.y);
    const auto& s = factorization_.kernel().scaled_entries();
    Matrix<Complex> t(size(), size());
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) t(i, j) = s(i, j) * (Complex(1) - u[i] * v[j]);
    const LogComplex ratio = LuFactorization<Real>(std::move(t)).log_determinant() /
                             factorization_.log_determinant_scaled();
    return {cdouble{1.0, 0.0} - ratio.value()};
  }

 private:
  static std::vector<Complex> weights(const Spectrum& s, cdouble z) {
    const Complex zz = num::lift<Real>(z);
    std::vector<Complex> w(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) w[k] = Complex(1) / (zz - num::lift<Real>(s[k]));
    return w;
  }

  ProblemPair pair_;
  KernelFactorization<Real> factorization_;
  double pole_tol_;
};

/// W(x, y) by the identity-minus determinant with E^{-1} applied as a solve.
inline ResolventValue resolvent_w(const ProblemPair& pair, const ResolventPoint& pt,
                                  const ResolventOptions& opts = {}) {
  check_off_pole(pair, pt, opts.pole_tol);
  const Precision p = resolve_precision(pair, opts.precision);
  return dispatch_precision(p, [&]<class Real>() {
    return ResolventEvaluator<Real>(pair, opts.pole_tol)(pt);
  });
}

/// W(x, y) as a ratio of two determinants; independent cross-check of resolvent_w.
inline ResolventValue resolvent_w_ratio_form(const ProblemPair& pair, const ResolventPoint& pt,
                                             const ResolventOptions& opts = {}) {
  check_off_pole(pair, pt, opts.pole_tol);
  const Precision p = resolve_precision(pair, opts.precision);
  return dispatch_precision(p, [&]<class Real>() {
    return ResolventEvaluator<Real>(pair, opts.pole_tol).ratio_form(pt);
  });
}

/// Relative gap between W(pt) and its pole expansion sum_ij P_ij / ((x - x_i)(y - y_j)).
inline double pole_expansion_check(const ProblemPair& pair, const CorrelatorMatrix& p,
                                   const ResolventPoint& pt, const ResolventOptions& opts = {}) {
  if (p.n != pair.size() || p.p.rows() != pair.size() || p.p.cols() != pair.size())
    throw DimensionMismatch("correlator matrix does not match the pair's dimension");
  const cdouble w = resolvent_w(pair, pt, opts).w;
  cdouble expansion{0.0, 0.0};
  for (std::size_t i = 0; i < p.n; ++i)
    for (std::size_t j = 0; j < p.n; ++j)
      expansion += p.p(i, j) / ((pt.x - pair.x()[i]) * (pt.y - pair.y()[j]));
  return std::abs(w - expansion) / (std::abs(w) + 1e-300);
}

}  // namespace ucorr
