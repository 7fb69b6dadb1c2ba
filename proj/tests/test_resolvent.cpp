#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using namespace ucorr;

TEST(Resolvent, OneByOneClosedForm) {
  Rng rng = derive_stream(41, 0);
  for (int t = 0; t < 50; ++t) {
    const auto pair = random_pair(1, rng);
    const auto pt = random_point(pair, rng);
    const cdouble expected = 1.0 / ((pt.x - pair.x()[0]) * (pt.y - pair.y()[0]));
    EXPECT_LT(testref::rel(resolvent_w(pair, pt).w, expected), 1e-13);
  }
}

TEST(Resolvent, MatchesDefinitionInBinary128) {
  Rng rng = derive_stream(42, 0);
  for (std::size_t n = 2; n <= 5; ++n)
    for (int t = 0; t < 5; ++t) {
      const auto pair = random_pair(n, rng);
      const auto pt = random_point(pair, rng);
      const cdouble ref = testref::resolvent_reference(pair, pt.x, pt.y);
      EXPECT_LT(testref::rel(resolvent_w(pair, pt).w, ref), 1e-9) << n;
    }
}

TEST(Resolvent, RatioFormAgrees) {
  Rng rng = derive_stream(43, 0);
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto pair = random_pair(n, rng);
    const auto pt = random_point(pair, rng);
    EXPECT_LT(testref::rel(resolvent_w_ratio_form(pair, pt).w, resolvent_w(pair, pt).w), 1e-9) << n;
  }
}

TEST(Resolvent, ExchangeSymmetry) {
  Rng rng = derive_stream(44, 0);
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto pair = random_pair(n, rng);
    const auto pt = random_point(pair, rng);
    const cdouble a = resolvent_w(pair, pt).w;
    const cdouble b = resolvent_w(pair.swapped(), {pt.y, pt.x}).w;
    EXPECT_LT(testref::rel(b, a), 1e-9) << n;
  }
}

TEST(Resolvent, LargeXAsymptotics) {
  Rng rng = derive_stream(45, 0);
  const auto pair = random_pair(4, rng);
  const cdouble y{0.4, -0.7};
  const cdouble x{1e8, 0.0};
  cdouble tail{0.0};
  for (const auto& yj : pair.y()) tail += 1.0 / (y - yj);
  EXPECT_LT(testref::rel(x * resolvent_w(pair, {x, y}).w, tail), 1e-6);
}

TEST(Resolvent, PoleProximityIsRejected) {
  const auto pair = testref::real_pair({0.0, 1.0}, {0.0, 1.0});
  EXPECT_THROW(resolvent_w(pair, {cdouble{1.0 + 1e-12, 0.0}, cdouble{3.0, 0.0}}), PoleProximity);
  EXPECT_THROW(resolvent_w(pair, {cdouble{3.0, 0.0}, cdouble{0.0, 0.0}}), PoleProximity);
  EXPECT_NO_THROW(resolvent_w(pair, {cdouble{1.0 + 1e-6, 0.0}, cdouble{3.0, 0.0}}));
}

TEST(Resolvent, PrecisionsAgree) {
  Rng rng = derive_stream(46, 0);
  const auto pair = random_pair(3, rng);
  const auto pt = random_point(pair, rng);
  const cdouble a = resolvent_w(pair, pt, {Precision::binary128}).w;
  EXPECT_LT(testref::rel(resolvent_w(pair, pt, {Precision::binary64}).w, a), 1e-10);
  EXPECT_LT(testref::rel(resolvent_w(pair, pt, {Precision::multiprecision}).w, a), 1e-25);
}

TEST(Resolvent, PoleExpansionReproducesW) {
  Rng rng = derive_stream(47, 0);
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto pair = random_pair(n, rng);
    const auto p = correlator_matrix(pair);
    for (int k = 0; k < 5; ++k) EXPECT_LT(pole_expansion_check(pair, p, random_point(pair, rng)), 1e-9) << n;
  }
}
