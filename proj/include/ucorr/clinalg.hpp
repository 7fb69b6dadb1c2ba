#pragma once

// Overflow-safe complex linear algebra for the kernel E_ij = exp(x_i y_j).
//
// E is never stored raw. Each row i is divided by exp(m_i), m_i = max_j
// Re(x_i y_j), so the stored ("scaled") entries have modulus <= 1 and the
// factor exp(sum m_i) is carried separately in log form. E^{-1} is never
// formed: right-solves go through one LU of the transposed scaled matrix.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "log_complex.hpp"
#include "matrix.hpp"
#include "numeric.hpp"
#include "spectra.hpp"

namespace ucorr {

/// LU with partial (row) pivoting, P A = L U. An exactly zero pivot column is
/// recorded rather than thrown; callers decide whether singularity is an error.
template <class Real>
class LuFactorization {
 public:
  using Complex = std::complex<Real>;

  explicit LuFactorization(Matrix<Complex> a) : lu_(std::move(a)), perm_(lu_.rows()) {
    const std::size_t n = lu_.rows();
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      Real best = num::abs1(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i) {
        const Real m = num::abs1(lu_(i, k));
        if (m > best) {
          best = m;
          p = i;
        }
      }
      if (best == Real(0)) {
        singular_ = true;
        continue;
      }
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        std::swap(perm_[k], perm_[p]);
        negate_ = !negate_;
      }
      const Complex pivot = lu_(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        const Complex l = lu_(i, k) / pivot;
        lu_(i, k) = l;
        if (l == Complex(0)) continue;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= l * lu_(k, j);
      }
    }
  }

  std::size_t size() const { return lu_.rows(); }
  bool singular() const { return singular_; }

  Complex determinant() const {
    if (singular_) return Complex(0);
    Complex d = negate_ ? Complex(-1) : Complex(1);
    for (std::size_t k = 0; k < size(); ++k) d *= lu_(k, k);
    return d;
  }

  /// Same value as determinant(), accumulated as sum of log|u_kk| and a unit
  /// phase in the working precision, converted to double at the end.
  LogComplex log_determinant() const {
    if (singular_) return LogComplex::zero();
    Real log_magnitude(0);
    std::complex<Real> phase = negate_ ? Complex(-1) : Complex(1);
    for (std::size_t k = 0; k < size(); ++k) {
      const Real m = num::abs(lu_(k, k));
      log_magnitude += num::log(m);
      phase *= Complex(lu_(k, k).real() / m, lu_(k, k).imag() / m);
      phase = num::unit(phase);
    }
    return LogComplex::from_parts(num::to_double(log_magnitude), num::lower(phase));
  }

  /// Solves A z = b.
  std::vector<Complex> solve(std::span<const Complex> b) const {
    const std::size_t n = size();
    std::vector<Complex> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < i; ++k) z[i] -= lu_(i, k) * z[k];
    for (std::size_t ii = n; ii-- > 0;) {
      for (std::size_t k = ii + 1; k < n; ++k) z[ii] -= lu_(ii, k) * z[k];
      z[ii] /= lu_(ii, ii);
    }
    return z;
  }

  /// Solves A^T z = b, using A^T = U^T L^T P.
  std::vector<Complex> solve_transposed(std::span<const Complex> b) const {
    const std::size_t n = size();
    std::vector<Complex> w(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < i; ++k) w[i] -= lu_(k, i) * w[k];
      w[i] /= lu_(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;)
      for (std::size_t k = ii + 1; k < n; ++k) w[ii] -= lu_(k, ii) * w[k];
    std::vector<Complex> z(n);
    for (std::size_t i = 0; i < n; ++i) z[perm_[i]] = w[i];
    return z;
  }

 private:
  Matrix<Complex> lu_;
  std::vector<std::size_t> perm_;
  bool negate_ = false;
  bool singular_ = false;
};

/// Row-scaled kernel: E_ij = exp(m_i) * scaled(i, j).
template <class Real>
class KernelMatrix {
 public:
  using Complex = std::complex<Real>;

  KernelMatrix(std::vector<Real> row_shifts, Matrix<Complex> scaled)
      : row_shifts_(std::move(row_shifts)), scaled_(std::move(scaled)) {}

  std::size_t size() const { return scaled_.rows(); }
  const std::vector<Real>& row_shifts() const { return row_shifts_; }
  const Matrix<Complex>& scaled_entries() const { return scaled_; }

  Real total_shift() const {
    Real t(0);
    for (const auto& m : row_shifts_) t += m;
    return t;
  }

  /// E_ij itself, in log form.
  LogComplex entry(std::size_t i, std::size_t j) const {
    return LogComplex::from(scaled_(i, j)).scaled_by_exp(num::to_double(row_shifts_[i]));
  }

  /// Same E with every shift moved by `c` and entries rescaled by exp(-c).
  KernelMatrix with_shift_offset(Real c) const {
    KernelMatrix k = *this;
    const Real f = num::exp(-c);
    for (auto& m : k.row_shifts_) m += c;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) k.scaled_(i, j) *= f;
    return k;
  }

 private:
  std::vector<Real> row_shifts_;
  Matrix<Complex> scaled_;
};

/// Kernel for raw value lists; no distinctness checks (tests use this to build
/// deliberately singular kernels).
template <class Real = double>
KernelMatrix<Real> build_kernel(std::span<const cdouble> x, std::span<const cdouble> y) {
  using Complex = std::complex<Real>;
  if (x.size() != y.size()) throw DimensionMismatch("kernel spectra have different lengths");
  const std::size_t n = x.size();
  std::vector<Real> shifts(n);
  Matrix<Complex> scaled(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex xi = num::lift<Real>(x[i]);
    std::vector<Complex> prod(n);
    Real m(0);
    for (std::size_t j = 0; j < n; ++j) {
      prod[j] = xi * num::lift<Real>(y[j]);
      if (j == 0 || prod[j].real() > m) m = prod[j].real();
    }
    shifts[i] = m;
    for (std::size_t j = 0; j < n; ++j) scaled(i, j) = num::exp(prod[j] - Complex(m));
  }
  return {std::move(shifts), std::move(scaled)};
}

template <class Real = double>
KernelMatrix<Real> build_kernel(const ProblemPair& pair) {
  return build_kernel<Real>(pair.x().values(), pair.y().values());
}

/// One LU of the transposed scaled kernel, shared by every determinant, solve
/// and condition estimate on the same pair. Immutable after construction.
template <class Real>
class KernelFactorization {
 public:
  using Complex = std::complex<Real>;

  explicit KernelFactorization(KernelMatrix<Real> k)
      : kernel_(std::move(k)), lu_(kernel_.scaled_entries().transpose()) {
    if (lu_.singular()) throw SingularKernel();
  }

  explicit KernelFactorization(const ProblemPair& pair)
      : KernelFactorization(build_kernel<Real>(pair)) {}

  const KernelMatrix<Real>& kernel() const { return kernel_; }
  std::size_t size() const { return kernel_.size(); }

  /// det E = exp(sum m_i) * det(scaled).
  LogComplex log_determinant() const {
    return lu_.log_determinant().scaled_by_exp(num::to_double(kernel_.total_shift()));
  }

  /// log det of the scaled matrix alone.
  LogComplex log_determinant_scaled() const { return lu_.log_determinant(); }

  /// H with H * scaled = F.
  Matrix<Complex> solve_right_scaled(const Matrix<Complex>& f) const {
    const std::size_t n = size();
    if (f.cols() != n) throw DimensionMismatch("right-hand side has wrong column count");
    Matrix<Complex> h(f.rows(), n);
    for (std::size_t r = 0; r < f.rows(); ++r) {
      // (H S)_r = F_r  <=>  S^T h_r = f_r
      const auto z = lu_.solve(f.row(r));
      std::copy(z.begin(), z.end(), h.row(r).begin());
    }
    return h;
  }

  /// G with G * E = F, i.e. F E^{-1}.
  Matrix<Complex> solve_right(const Matrix<Complex>& f) const {
    Matrix<Complex> g = solve_right_scaled(f);
    for (std::size_t j = 0; j < size(); ++j) {
      const Real s = num::exp(-kernel_.row_shifts()[j]);
      for (std::size_t r = 0; r < g.rows(); ++r) g(r, j) *= s;
    }
    return g;
  }

  /// 1-norm condition estimate of the scaled matrix, ||S||_1 ||S^{-1}||_1,
  /// with ||S^{-1}||_1 from Hager's estimator (Higham's refinement). A lower
  /// bound on the true value, usually within a small factor.
  double condition_estimate() const {
    const std::size_t n = size();
    const auto& s = kernel_.scaled_entries();
    Real norm_s(0);
    for (std::size_t j = 0; j < n; ++j) {
      Real col(0);
      for (std::size_t i = 0; i < n; ++i) col += num::abs(s(i, j));
      if (col > norm_s) norm_s = col;
    }

    auto one_norm = [](const std::vector<Complex>& v) {
      Real t(0);
      for (const auto& c : v) t += num::abs(c);
      return t;
    };
    // S y = b  <=>  (S^T)^T y = b
    auto solve_s = [&](const std::vector<Complex>& b) { return lu_.solve_transposed(b); };
    // S^H z = b  <=>  S^T conj(z) = conj(b)
    auto solve_sh = [&](const std::vector<Complex>& b) {
      std::vector<Complex> cb(b.size());
      for (std::size_t i = 0; i < b.size(); ++i) cb[i] = std::conj(b[i]);
      auto z = lu_.solve(cb);
      for (auto& c : z) c = std::conj(c);
      return z;
    };

    std::vector<Complex> x(n, Complex(Real(1) / Real(static_cast<double>(n))));
    Real est(0);
    std::size_t last_j = n;
    for (int iter = 0; iter < 5; ++iter) {
      const auto y = solve_s(x);
      const Real e = one_norm(y);
      if (iter > 0 && e <= est) break;
      est = e;
      std::vector<Complex> xi(n);
      for (std::size_t i = 0; i < n; ++i) xi[i] = num::unit(y[i]);
      const auto z = solve_sh(xi);
      std::size_t j = 0;
      Real zmax(-1);
      for (std::size_t i = 0; i < n; ++i) {
        const Real m = num::abs(z[i]);
        if (m > zmax) {
          zmax = m;
          j = i;
        }
      }
      if (j == last_j) break;
      last_j = j;
      std::fill(x.begin(), x.end(), Complex(0));
      x[j] = Complex(1);
    }
    if (n > 1) {
      std::vector<Complex> b(n);
      for (std::size_t i = 0; i < n; ++i) {
        const Real mag = Real(1) + Real(static_cast<double>(i)) / Real(static_cast<double>(n - 1));
        b[i] = Complex(i % 2 == 0 ? mag : -mag);
      }
      const Real alt = Real(2) * one_norm(solve_s(b)) / Real(static_cast<double>(3 * n));
      if (alt > est) est = alt;
    }
    const double kappa = num::to_double(norm_s * est);
    return std::max(1.0, kappa);
  }

 private:
  KernelMatrix<Real> kernel_;
  LuFactorization<Real> lu_;  // of scaled^T
};

/// det E as LogComplex. Throws SingularKernel on an exact zero pivot.
template <class Real>
LogComplex logdet(const KernelMatrix<Real>& k) {
  return KernelFactorization<Real>(k).log_determinant();
}

/// F E^{-1} without forming E^{-1}.
template <class Real>
Matrix<std::complex<Real>> solve_right(const KernelMatrix<Real>& k,
                                       const Matrix<std::complex<Real>>& f) {
  return KernelFactorization<Real>(k).solve_right(f);
}

template <class Real>
double condition_estimate(const KernelMatrix<Real>& k) {
  return KernelFactorization<Real>(k).condition_estimate();
}

}  // namespace ucorr
