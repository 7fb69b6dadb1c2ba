#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using namespace ucorr;

TEST(Hciz, TwoByTwoClosedForm) {
  // det [[1,1],[1,e]] / ((0-1)(0-1)) = e - 1
  const auto pair = testref::real_pair({0.0, 1.0}, {0.0, 1.0});
  const LogComplex v = hciz_value(pair);
  EXPECT_NEAR(v.log_magnitude(), 0.5413248546129181, 1e-14);
  EXPECT_NEAR(std::abs(v.phase() - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(v.value().real(), std::exp(1.0) - 1.0, 1e-14);
}

TEST(Hciz, OneByOneIsExponential) {
  const ProblemPair pair{validate_spectrum({cdouble{2.0, 0.0}}), validate_spectrum({cdouble{3.0, 0.0}})};
  EXPECT_LT(testref::rel(hciz_value(pair).value(), std::exp(6.0)), 1e-15);
  EXPECT_LT(testref::rel(hciz_probability_normalized(pair).value(), std::exp(6.0)), 1e-15);
}

TEST(Hciz, MatchesLeibnizReference) {
  Rng rng = derive_stream(31, 0);
  for (std::size_t n = 2; n <= 5; ++n)
    for (int t = 0; t < 5; ++t) {
      const auto pair = random_pair(n, rng);
      const cdouble ref = testref::lower(testref::leibniz(testref::kernel(pair))) /
                          (vandermonde(pair.x()).value() * vandermonde(pair.y()).value());
      EXPECT_LT(testref::rel(hciz_value(pair).value(), ref), 1e-9) << n;
    }
}

TEST(Hciz, SymmetricUnderExchange) {
  Rng rng = derive_stream(32, 0);
  const auto pair = random_pair(4, rng);
  EXPECT_LT(testref::rel(hciz_value(pair).value(), hciz_value(pair.swapped()).value()), 1e-10);
}

TEST(Hciz, NormalizationConstant) {
  EXPECT_NEAR(log_unitary_normalization(1), 0.0, 1e-15);
  EXPECT_NEAR(log_unitary_normalization(3), std::log(2.0), 1e-15);
  EXPECT_NEAR(log_unitary_normalization(4), std::log(12.0), 1e-14);
  EXPECT_NEAR(log_unitary_normalization(5), std::log(288.0), 1e-13);
}

TEST(Hciz, ProbabilityNormalizedTendsToOne) {
  for (std::size_t n = 2; n <= 4; ++n) {
    std::vector<cdouble> x, y;
    for (std::size_t k = 0; k < n; ++k) {
      x.push_back(1e-3 * double(k));
      y.push_back(1e-3 * double(k * k + 1));
    }
    const ProblemPair pair{validate_spectrum(x), validate_spectrum(y)};
    EXPECT_NEAR(std::abs(hciz_probability_normalized(pair).value() - 1.0), 0.0, 1e-2) << n;
  }
}

TEST(Hciz, LargeSpectraStayFinite) {
  const auto pair = testref::real_pair({0.0, 20.0, 40.0}, {0.0, 20.0, 40.0});
  const LogComplex v = hciz_value(pair);
  EXPECT_TRUE(std::isfinite(v.log_magnitude()));
  EXPECT_GT(v.log_magnitude(), 709.0);  // e^{2000} / (20*40*20)^2 overflows double
}

TEST(Hciz, PrecisionsAgree) {
  Rng rng = derive_stream(33, 0);
  const auto pair = random_pair(3, rng);
  const cdouble a = hciz_value(pair, Precision::binary64).value();
  EXPECT_LT(testref::rel(hciz_value(pair, Precision::binary128).value(), a), 1e-10);
  EXPECT_LT(testref::rel(hciz_value(pair, Precision::multiprecision).value(), a), 1e-10);
}
