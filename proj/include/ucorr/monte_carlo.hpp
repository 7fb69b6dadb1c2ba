#pragma once

// Monte Carlo references over probability Haar measure on U(N).
//
// Samples are split into fixed blocks; block b draws from its own stream
// derive_stream(seed, b) and block partial sums are reduced in block order,
// so an estimate depends on (seed, samples, blocks) only, never on how many
// threads ran the blocks. Standard errors are leave-one-block-out jackknife.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "numeric.hpp"
#include "parallel.hpp"
#include "spectra.hpp"

namespace ucorr {

using Rng = std::mt19937_64;

/// Stream k of master seed `seed`: mt19937_64 seeded through
/// std::seed_seq{seed_lo, seed_hi, k_lo, k_hi}.
inline Rng derive_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

struct HaarSample {
  Matrix<cdouble> u;
};

/// Ginibre matrix -> Householder QR -> columns of Q rotated by the phases of
/// diag(R), which makes R's diagonal positive and the law of Q exactly Haar.
inline HaarSample sample_haar_unitary(std::size_t n, Rng& rng) {
  if (n == 0) throw InvalidArgument("unitary dimension must be >= 1");
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  Matrix<cdouble> a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      a(i, j) = {re, im};
    }

  // Householder reflectors v_k stored separately; R overwrites a.
  std::vector<std::vector<cdouble>> reflectors(n);
  std::vector<cdouble> r_diag(n);
  for (std::size_t k = 0; k < n; ++k) {
    double norm2 = 0.0;
    for (std::size_t i = k; i < n; ++i) norm2 += std::norm(a(i, k));
    const double norm = std::sqrt(norm2);
    const cdouble x0 = a(k, k);
    const cdouble phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cdouble{1.0, 0.0};
    const cdouble alpha = -phase * norm;
    std::vector<cdouble> v(n - k);
    for (std::size_t i = k; i < n; ++i) v[i - k] = a(i, k);
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (const auto& c : v) vnorm2 += std::norm(c);
    if (vnorm2 > 0.0) {
      const double inv = 1.0 / std::sqrt(vnorm2);
      for (auto& c : v) c *= inv;
      // a[k:, k:] -= 2 v (v^H a[k:, k:])
      for (std::size_t j = k; j < n; ++j) {
        cdouble dot{0.0, 0.0};
        for (std::size_t i = k; i < n; ++i) dot += std::conj(v[i - k]) * a(i, j);
        for (std::size_t i = k; i < n; ++i) a(i, j) -= 2.0 * v[i - k] * dot;
      }
    }
    r_diag[k] = a(k, k);
    reflectors[k] = std::move(v);
  }

  // Q = H_0 H_1 ... H_{n-1}, applied to the identity from the right end.
  Matrix<cdouble> q = Matrix<cdouble>::identity(n);
  for (std::size_t kk = n; kk-- > 0;) {
    const auto& v = reflectors[kk];
    for (std::size_t j = 0; j < n; ++j) {
      cdouble dot{0.0, 0.0};
      for (std::size_t i = kk; i < n; ++i) dot += std::conj(v[i - kk]) * q(i, j);
      for (std::size_t i = kk; i < n; ++i) q(i, j) -= 2.0 * v[i - kk] * dot;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double m = std::abs(r_diag[k]);
    const cdouble ph = m > 0.0 ? r_diag[k] / m : cdouble{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) q(i, k) *= ph;
  }
  return {std::move(q)};
}

struct MCEstimate {
  cdouble mean;
  double std_error = 0.0;
  std::size_t samples = 0;
};

struct MCOptions {
  std::uint64_t seed = 0;
  std::size_t samples = 200000;
  std::size_t blocks = 100;
  unsigned threads = 1;
};

inline constexpr std::size_t kMinMonteCarloSamples = 1000;
inline constexpr double kMaxMonteCarloExponent = 20.0;

namespace mc_detail {

inline void check_preconditions(const ProblemPair& pair, const MCOptions& opts) {
  if (opts.samples < kMinMonteCarloSamples)
    throw InvalidArgument("Monte Carlo needs at least 1000 samples");
  if (opts.blocks < 2 || opts.blocks > opts.samples)
    throw InvalidArgument("Monte Carlo needs 2 <= blocks <= samples");
  for (const auto& x : pair.x())
    for (const auto& y : pair.y())
      if (std::abs((x * y).real()) > kMaxMonteCarloExponent)
        throw InvalidArgument("Monte Carlo needs max |Re(x_i y_j)| <= 20");
}

inline std::size_t block_size(const MCOptions& opts, std::size_t b) {
  return opts.samples / opts.blocks + (b < opts.samples % opts.blocks ? 1 : 0);
}

/// tr(X U^dagger Y U) = sum_{k,i} x_i y_k |U_ki|^2
inline cdouble iz_exponent(const ProblemPair& pair, const Matrix<cdouble>& u) {
  cdouble t{0.0, 0.0};
  for (std::size_t k = 0; k < pair.size(); ++k)
    for (std::size_t i = 0; i < pair.size(); ++i) t += pair.x()[i] * pair.y()[k] * std::norm(u(k, i));
  return t;
}

/// Jackknife over blocks of a ratio sum(num)/sum(den) (den = counts for a mean).
/// Returns the bias-corrected estimate and its standard error.
inline std::pair<cdouble, double> jackknife_ratio(const std::vector<cdouble>& num,
                                                  const std::vector<cdouble>& den) {
  const std::size_t blocks = num.size();
  cdouble total_num{0.0, 0.0}, total_den{0.0, 0.0};
  for (std::size_t b = 0; b < blocks; ++b) {
    total_num += num[b];
    total_den += den[b];
  }
  const cdouble full = total_num / total_den;
  std::vector<cdouble> loo(blocks);
  cdouble loo_mean{0.0, 0.0};
  for (std::size_t b = 0; b < blocks; ++b) {
    loo[b] = (total_num - num[b]) / (total_den - den[b]);
    loo_mean += loo[b];
  }
  const double nb = static_cast<double>(blocks);
  loo_mean /= nb;
  double spread = 0.0;
  for (const auto& t : loo) spread += std::norm(t - loo_mean);
  const double se = std::sqrt((nb - 1.0) / nb * spread);
  return {nb * full - (nb - 1.0) * loo_mean, se};
}

}  // namespace mc_detail

/// Haar average of e^{tr(X U^dagger Y U)}: estimates hciz_probability_normalized.
inline MCEstimate mc_hciz(const ProblemPair& pair, const MCOptions& opts) {
  mc_detail::check_preconditions(pair, opts);
  const std::size_t n = pair.size();
  std::vector<cdouble> sums(opts.blocks), counts(opts.blocks);
  parallel_for(opts.blocks, opts.threads, [&](std::size_t b) {
    Rng rng = derive_stream(opts.seed, b);
    const std::size_t m = mc_detail::block_size(opts, b);
    cdouble s{0.0, 0.0};
    for (std::size_t t = 0; t < m; ++t) s += std::exp(mc_detail::iz_exponent(pair, sample_haar_unitary(n, rng).u));
    sums[b] = s;
    counts[b] = static_cast<double>(m);
  });
  const auto [mean, se] = mc_detail::jackknife_ratio(sums, counts);
  if (!std::isfinite(se) || !std::isfinite(mean.real()) || !std::isfinite(mean.imag()))
    throw VarianceOverflow();
  return {mean, se, opts.samples};
}

/// Ratio estimators for every P(i, j) = <|U_ji|^2> under the weight
/// e^{tr(X U^dagger Y U)} = e^{sum x_i y_k |U_ki|^2}; all entries share the
/// same samples. Entry (i, j) pairs x_i with y_j, matching CorrelatorMatrix.
inline Matrix<MCEstimate> mc_correlator_matrix(const ProblemPair& pair, const MCOptions& opts) {
  mc_detail::check_preconditions(pair, opts);
  const std::size_t n = pair.size();
  std::vector<cdouble> weight_sums(opts.blocks), counts(opts.blocks);
  std::vector<Matrix<cdouble>> observable_sums(opts.blocks);
  parallel_for(opts.blocks, opts.threads, [&](std::size_t b) {
    Rng rng = derive_stream(opts.seed, b);
    const std::size_t m = mc_detail::block_size(opts, b);
    cdouble ws{0.0, 0.0};
    Matrix<cdouble> os(n, n, cdouble{0.0, 0.0});
    for (std::size_t t = 0; t < m; ++t) {
      const auto u = sample_haar_unitary(n, rng).u;
      const cdouble w = std::exp(mc_detail::iz_exponent(pair, u));
      ws += w;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) os(i, j) += std::norm(u(j, i)) * w;
    }
    weight_sums[b] = ws;
    counts[b] = static_cast<double>(m);
    observable_sums[b] = std::move(os);
  });

  const auto [w_mean, w_se] = mc_detail::jackknife_ratio(weight_sums, counts);
  if (!std::isfinite(w_se) || !std::isfinite(std::abs(w_mean))) throw VarianceOverflow();
  if (std::abs(w_mean) <= 2.0 * w_se) throw DegenerateDenominator();

  Matrix<MCEstimate> out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<cdouble> num(opts.blocks);
      for (std::size_t b = 0; b < opts.blocks; ++b) num[b] = observable_sums[b](i, j);
      const auto [mean, se] = mc_detail::jackknife_ratio(num, weight_sums);
      if (!std::isfinite(se)) throw VarianceOverflow();
      out(i, j) = {mean, se, opts.samples};
    }
  return out;
}

/// Single entry of mc_correlator_matrix.
inline MCEstimate mc_correlator(const ProblemPair& pair, std::size_t i, std::size_t j,
                                const MCOptions& opts) {
  if (i >= pair.size() || j >= pair.size()) throw IndexOutOfRange("correlator index out of range");
  return mc_correlator_matrix(pair, opts)(i, j);
}

}  // namespace ucorr
