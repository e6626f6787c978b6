#include "wavemap/error.hpp"
#include "wavemap/factorization.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wavemap;

TEST(Factorization, BumpDerivativesMatchDifferences) {
  const auto b = bump(0.2, 0.7, 1.5);
  const double h = 1e-5;
  for (double r : {0.25, 0.4, 0.45, 0.6, 0.68}) {
    EXPECT_NEAR(b.du(r), (b.u(r + h) - b.u(r - h)) / (2 * h), 1e-5 * (1 + std::abs(b.du(r))));
    EXPECT_NEAR(b.d2u(r), (b.du(r + h) - b.du(r - h)) / (2 * h), 1e-4 * (1 + std::abs(b.d2u(r))));
  }
  EXPECT_EQ(b.u(0.1), 0.0);
  EXPECT_EQ(b.u(0.8), 0.0);
  EXPECT_NEAR(b.u(0.45), 1.5 * std::exp(-1.0), 1e-15);
}

TEST(Factorization, ProductRule) {
  const auto b = bump(0.1, 0.9);
  const auto m = multiply(
      b, [](double r) { return std::sin(4 * r); }, [](double r) { return 4 * std::cos(4 * r); },
      [](double r) { return -16 * std::sin(4 * r); });
  const double h = 1e-5;
  for (double r : {0.2, 0.5, 0.8}) {
    EXPECT_NEAR(m.u(r), b.u(r) * std::sin(4 * r), 1e-15);
    EXPECT_NEAR(m.du(r), (m.u(r + h) - m.u(r - h)) / (2 * h), 1e-6);
    EXPECT_NEAR(m.d2u(r), (m.du(r + h) - m.du(r - h)) / (2 * h), 1e-5);
  }
}

TEST(Factorization, RandomBumpsFactorAndAreNonnegative) {
  std::mt19937_64 rng(20240);
  for (int t = 0; t < 100; ++t) {
    const auto u = random_bump(rng);
    ASSERT_GT(u.support_lo, 0.0);
    ASSERT_LT(u.support_hi, 1.0);
    const auto r = factorization_check(u, u);
    EXPECT_LT(r.relative_residual, 1e-6) << t;
    EXPECT_GE(r.quadratic_form, -1e-10 * r.norm_squared) << t;
    EXPECT_NEAR(r.quadratic_form, r.b_norm_squared, 1e-8 * (r.b_norm_squared + r.norm_squared)) << t;
  }
}

TEST(Factorization, AdjointPair) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto u = random_bump(rng), v = random_bump(rng);
    const auto r = factorization_check(u, v);
    EXPECT_LT(r.adjointness_defect, 1e-9 * (1 + std::sqrt(r.b_norm_squared * r.norm_squared))) << t;
  }
}

TEST(Factorization, Rejections) {
  EXPECT_THROW(bump(0.5, 0.4), InvalidArgument);
  TestFunction bad = bump(0.2, 0.5);
  bad.support_lo = 0.0;
  EXPECT_THROW(factorization_check(bad, bump(0.2, 0.5)), InvalidArgument);
  bad = bump(0.2, 0.5);
  bad.support_hi = 1.0;
  EXPECT_THROW(factorization_check(bump(0.2, 0.5), bad), InvalidArgument);
}
