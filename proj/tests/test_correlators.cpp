#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using namespace ucorr;

TEST(Correlators, TwoByTwoClosedForm) {
  // P_11 = e/(e-1) - 1 = 1/(e-1)
  const auto pair = testref::real_pair({0.0, 1.0}, {0.0, 1.0});
  const auto p = correlator_matrix(pair);
  const double expected = 1.0 / (std::exp(1.0) - 1.0);
  EXPECT_NEAR(expected, 0.5819767068693265, 1e-16);
  EXPECT_NEAR(p.p(1, 1).real(), expected, 1e-12);
  EXPECT_NEAR(p.p(0, 0).real(), expected, 1e-12);
  EXPECT_NEAR(p.p(0, 1).real(), 1.0 - expected, 1e-12);
  EXPECT_NEAR(std::abs(p.p(1, 1).imag()), 0.0, 1e-15);
}

TEST(Correlators, OneByOneIsOne) {
  const ProblemPair pair{validate_spectrum({cdouble{0.3, 0.7}}), validate_spectrum({cdouble{-2.0, 1.0}})};
  EXPECT_NEAR(std::abs(correlator_matrix(pair).p(0, 0) - 1.0), 0.0, 1e-14);
}

TEST(Correlators, MatchFourCornerExtraction) {
  Rng rng = derive_stream(51, 0);
  for (std::size_t n = 2; n <= 4; ++n)
    for (int t = 0; t < 3; ++t) {
      const auto pair = random_pair(n, rng);
      const auto p = correlator_matrix(pair);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          EXPECT_LT(std::abs(p.p(i, j) - testref::four_corner_entry(pair, i, j)), 1e-10)
              << n << " " << i << " " << j;
    }
}

TEST(Correlators, DoublyStochasticUpToEight) {
  Rng rng = derive_stream(52, 0);
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto p = correlator_matrix(random_pair(n, rng));
    EXPECT_LT(p.max_sum_deviation(), 1e-8) << n;
  }
}

TEST(Correlators, TransposeUnderExchange) {
  Rng rng = derive_stream(53, 0);
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto pair = random_pair(n, rng);
    const auto p = correlator_matrix(pair);
    const auto q = correlator_matrix(pair.swapped());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) EXPECT_LT(std::abs(p.p(i, j) - q.p(j, i)), 1e-9);
  }
}

TEST(Correlators, DerivativeOfLogHciz) {
  // sum_j y_j P_ij = d/dx_i log I(X, Y), by central differences
  Rng rng = derive_stream(54, 0);
  const auto pair = random_pair(3, rng);
  const auto p = correlator_matrix(pair);
  const double h = 1e-5;
  for (std::size_t i = 0; i < 3; ++i) {
    auto shifted = [&](double d) {
      std::vector<cdouble> x(pair.x().begin(), pair.x().end());
      x[i] += d;
      return hciz_value({validate_spectrum(x), pair.y()}, Precision::binary128);
    };
    const LogComplex ratio = shifted(h) / shifted(-h);
    const cdouble dlog = cdouble(ratio.log_magnitude(), std::arg(ratio.phase())) / (2 * h);
    cdouble s{0.0};
    for (std::size_t j = 0; j < 3; ++j) s += pair.y()[j] * p.p(i, j);
    EXPECT_LT(std::abs(s - dlog), 1e-8);
  }
}

TEST(Correlators, QuadratureAgreesWithAffine) {
  Rng rng = derive_stream(55, 0);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto pair = random_pair(n, rng);
    const auto p = correlator_matrix(pair);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        EXPECT_LT(std::abs(correlator_entry_quadrature(pair, i, j) - p.p(i, j)), 1e-8);
  }
}

TEST(Correlators, SingleEntryMatchesMatrix) {
  Rng rng = derive_stream(56, 0);
  const auto pair = random_pair(4, rng);
  const auto p = correlator_matrix(pair);
  EXPECT_LT(std::abs(correlator_entry_affine(pair, 2, 1) - p.p(2, 1)), 1e-12);
}

TEST(Correlators, IndexChecks) {
  const auto pair = testref::real_pair({0.0, 1.0}, {0.0, 1.0});
  EXPECT_THROW(correlator_entry_affine(pair, 2, 0), IndexOutOfRange);
  EXPECT_THROW(correlator_entry_quadrature(pair, 0, 5), IndexOutOfRange);
}

TEST(Correlators, SumRuleViolationCarriesCondition) {
  Rng rng = derive_stream(57, 0);
  const auto pair = random_pair(8, rng);
  try {
    correlator_matrix(pair, {Precision::binary64, 1e-300});
    FAIL() << "expected StochasticityViolation";
  } catch (const StochasticityViolation& e) {
    EXPECT_GT(e.condition, 1.0);
    EXPECT_GT(e.deviation, 0.0);
  }
}

TEST(Correlators, IndependentOfThreadCount) {
  Rng rng = derive_stream(58, 0);
  const auto pair = random_pair(5, rng);
  const auto a = correlator_matrix(pair, {Precision::automatic, 1e-8, 1});
  const auto b = correlator_matrix(pair, {Precision::automatic, 1e-8, 3});
  EXPECT_TRUE(a.p == b.p);
}
