#pragma once

// Test-side references. Nothing here calls the library's LU, kernel or
// resolvent code: determinants are Leibniz sums in binary128.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "ucorr/ucorr.hpp"

namespace testref {

using ucorr::cdouble;
using q128 = ucorr::float128;
using cq = std::complex<q128>;
using CMat = std::vector<std::vector<cq>>;

inline cq lift(cdouble z) { return {q128(z.real()), q128(z.imag())}; }
inline cdouble lower(cq z) { return {double(z.real()), double(z.imag())}; }

inline cq cexp(cq z) {
  const q128 m = expq(z.real());
  return {m * cosq(z.imag()), m * sinq(z.imag())};
}

inline cq leibniz(const CMat& a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  cq total(0);
  do {
    int inv = 0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t s = r + 1; s < n; ++s) inv += p[r] > p[s];
    cq term(inv % 2 ? -1 : 1);
    for (std::size_t r = 0; r < n; ++r) term *= a[r][p[r]];
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

/// E_kl = e^{x_k y_l} with no scaling (fine for unit-square spectra).
inline CMat kernel(const ucorr::ProblemPair& pair) {
  const std::size_t n = pair.size();
  CMat e(n, std::vector<cq>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) e[k][l] = cexp(lift(pair.x()[k]) * lift(pair.y()[l]));
  return e;
}

/// P_ij from the four corners of det T(u_i, v_j) with T_kl = E_kl (1 - u_k v_l),
/// the other weights frozen at u_k = 1/(x_i - x_k), v_l = 1/(y_j - y_l).
inline cdouble four_corner_entry(const ucorr::ProblemPair& pair, std::size_t i, std::size_t j) {
  const std::size_t n = pair.size();
  const CMat e = kernel(pair);
  std::vector<cq> u(n), v(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (k != i) u[k] = cq(1) / (lift(pair.x()[i]) - lift(pair.x()[k]));
    if (k != j) v[k] = cq(1) / (lift(pair.y()[j]) - lift(pair.y()[k]));
  }
  auto det_t = [&](q128 ui, q128 vj) {
    auto uu = u;
    auto vv = v;
    uu[i] = ui;
    vv[j] = vj;
    CMat t(n, std::vector<cq>(n));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) t[k][l] = e[k][l] * (cq(1) - uu[k] * vv[l]);
    return leibniz(t);
  };
  const cq d = det_t(1, 1) - det_t(1, 0) - det_t(0, 1) + det_t(0, 0);
  return lower(-d / leibniz(e));
}

/// W straight from its definition 1 - det(E - D_u E D_v) / det E.
inline cdouble resolvent_reference(const ucorr::ProblemPair& pair, cdouble x, cdouble y) {
  const std::size_t n = pair.size();
  const CMat e = kernel(pair);
  CMat t = e;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      t[k][l] -= e[k][l] / ((lift(x) - lift(pair.x()[k])) * (lift(y) - lift(pair.y()[l])));
  return lower(cq(1) - leibniz(t) / leibniz(e));
}

/// h_k(v) by enumerating every multiset of size k.
inline cdouble homogeneous_bruteforce(const std::vector<cdouble>& v, int k) {
  std::function<cq(std::size_t, int)> rec = [&](std::size_t start, int left) -> cq {
    if (left == 0) return cq(1);
    cq total(0);
    for (std::size_t s = start; s < v.size(); ++s) total += lift(v[s]) * rec(s, left - 1);
    return total;
  };
  return lower(rec(0, k));
}

inline double rel(cdouble a, cdouble b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline ucorr::ProblemPair real_pair(std::vector<double> x, std::vector<double> y) {
  std::vector<cdouble> cx(x.begin(), x.end()), cy(y.begin(), y.end());
  return {ucorr::validate_spectrum(cx), ucorr::validate_spectrum(cy)};
}

}  // namespace testref
