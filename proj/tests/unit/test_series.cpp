#include "wavemap/series.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wavemap::series;

TEST(Series, MultiplyTruncatesToFirstArgument) {
  const Series<double> a{1.0, 2.0, 3.0}, b{4.0, 5.0, 6.0, 7.0};
  const auto c = multiply<double>(a, b);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_DOUBLE_EQ(c[0], 4.0);
  EXPECT_DOUBLE_EQ(c[1], 13.0);
  EXPECT_DOUBLE_EQ(c[2], 28.0);
}

TEST(Series, SinCosOfLinearSeriesMatchesTaylor) {
  const Series<double> a{0.3, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  const auto [s, c] = sin_cos<double>(a);
  // sin(0.3 + x) = sum sin^(k)(0.3) x^k / k!
  double fact = 1.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    const double ds = std::sin(0.3 + static_cast<double>(k) * M_PI / 2.0) / fact;
    const double dc = std::cos(0.3 + static_cast<double>(k) * M_PI / 2.0) / fact;
    EXPECT_NEAR(s[k], ds, 1e-15);
    EXPECT_NEAR(c[k], dc, 1e-15);
  }
}

TEST(Series, SinSquaredPlusCosSquaredIsOne) {
  const Series<double> a{0.7, -1.3, 0.4, 2.0, -0.5, 0.1, 0.9};
  const auto [s, c] = sin_cos<double>(a);
  const auto ss = multiply<double>(s, s), cc = multiply<double>(c, c);
  EXPECT_NEAR(ss[0] + cc[0], 1.0, 1e-15);
  for (std::size_t k = 1; k < a.size(); ++k) EXPECT_NEAR(ss[k] + cc[k], 0.0, 1e-12) << k;
}

TEST(Series, ReciprocalTimesSeriesIsOne) {
  const Series<double> a{2.0, -1.0, 0.5, 0.25, 3.0};
  const auto r = reciprocal<double>(a);
  const auto p = multiply<double>(a, r);
  EXPECT_NEAR(p[0], 1.0, 1e-15);
  for (std::size_t k = 1; k < p.size(); ++k) EXPECT_NEAR(p[k], 0.0, 1e-13);
}

TEST(Series, BinomialMatchesPow) {
  const auto b = binomial(-2.5, 20);
  EXPECT_NEAR(evaluate<double>(b, 0.1), std::pow(0.9, -2.5), 1e-14);
}

TEST(Series, EvaluateAndDerivative) {
  const Series<double> a{1.0, -2.0, 3.0};
  EXPECT_DOUBLE_EQ(evaluate<double>(a, 2.0), 9.0);
  EXPECT_DOUBLE_EQ(evaluate_derivative<double>(a, 2.0), 10.0);
}
