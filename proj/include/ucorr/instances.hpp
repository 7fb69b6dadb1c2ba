#pragma once

// Seeded random problem instances for verification campaigns.

#include <cstddef>
#include <random>
#include <vector>

#include "errors.hpp"
#include "monte_carlo.hpp"
#include "resolvent.hpp"
#include "spectra.hpp"

namespace ucorr {

/// Axis-aligned box in the complex plane.
struct Box {
  double re_min = 0.0;
  double re_max = 1.0;
  double im_min = 0.0;
  double im_max = 1.0;
};

inline constexpr Box kUnitSquare{};
inline constexpr Box kUnitInterval{0.0, 1.0, 0.0, 0.0};

/// n points uniform in `box`, redrawn until every pairwise gap exceeds min_gap.
inline Spectrum random_spectrum(std::size_t n, Rng& rng, const Box& box = kUnitSquare,
                                double min_gap = 0.1) {
  std::uniform_real_distribution<double> re(box.re_min, box.re_max);
  std::uniform_real_distribution<double> im(box.im_min, box.im_max);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::vector<cdouble> v(n);
    for (auto& z : v) z = {re(rng), box.im_max > box.im_min ? im(rng) : box.im_min};
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = i + 1; j < n && ok; ++j) ok = std::abs(v[i] - v[j]) > min_gap;
    if (ok) return validate_spectrum(std::move(v));
  }
  throw InvalidArgument("could not place " + std::to_string(n) + " points with the requested gap");
}

inline ProblemPair random_pair(std::size_t n, Rng& rng, const Box& box = kUnitSquare,
                               double min_gap = 0.1) {
  Spectrum x = random_spectrum(n, rng, box, min_gap);
  Spectrum y = random_spectrum(n, rng, box, min_gap);
  return {std::move(x), std::move(y)};
}

/// Uniform point in `box` at distance > min_distance from both spectra.
inline ResolventPoint random_point(const ProblemPair& pair, Rng& rng,
                                   const Box& box = {-1.0, 2.0, -1.0, 2.0},
                                   double min_distance = 0.1) {
  std::uniform_real_distribution<double> re(box.re_min, box.re_max);
  std::uniform_real_distribution<double> im(box.im_min, box.im_max);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const cdouble x{re(rng), im(rng)};
    const cdouble y{re(rng), im(rng)};
    if (pair.x().distance_to(x) > min_distance && pair.y().distance_to(y) > min_distance)
      return {x, y};
  }
  throw InvalidArgument("could not find an off-pole point");
}

/// Same spectra multiplied by `factor`.
inline ProblemPair scaled_pair(const ProblemPair& pair, double factor) {
  auto scale = [&](const Spectrum& s) {
    std::vector<cdouble> v(s.begin(), s.end());
    for (auto& z : v) z *= factor;
    return validate_spectrum(std::move(v));
  };
  return {scale(pair.x()), scale(pair.y())};
}

}  // namespace ucorr
