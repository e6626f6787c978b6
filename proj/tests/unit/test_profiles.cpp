#include "wavemap/error.hpp"
#include "wavemap/profiles.hpp"
#include "wavemap/slp.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>
#include <map>

using namespace wavemap;

namespace {

const Profile& profile(int n, int ell = 1) {
  static std::map<std::pair<int, int>, Profile> cache;
  auto it = cache.find({n, ell});
  if (it == cache.end()) it = cache.emplace(std::make_pair(n, ell), shoot_profile(n, ell, 1e-12)).first;
  return it->second;
}

// Chebyshev collocation of rho^2 (1 - rho^2) f'' + 2 rho (1 - rho^2) f' - k sin 2f = 0,
// f(0) = 0, f(1) = pi/2, by Newton from a perturbed guess; returns f'(0).
double collocation_slope(const Profile& guess, int N) {
  const double k = guess.ell() * (guess.ell() + 1.0) / 2.0;
  Eigen::VectorXd x(N + 1), r(N + 1);
  for (int i = 0; i <= N; ++i) {
    x(i) = std::cos(M_PI * i / N);
    r(i) = 0.5 * (1.0 - x(i));  // rho from 0 to 1
  }
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N; ++j) {
      const double ci = (i == 0 || i == N) ? 2.0 : 1.0, cj = (j == 0 || j == N) ? 2.0 : 1.0;
      if (i != j) D(i, j) = ci / cj * ((i + j) % 2 ? -1.0 : 1.0) / (x(i) - x(j));
    }
  }
  for (int i = 0; i <= N; ++i) {
    double s = 0.0;
    for (int j = 0; j <= N; ++j) if (j != i) s += D(i, j);
    D(i, i) = -s;
  }
  D *= -2.0;  // d/drho = -2 d/dx
  const Eigen::MatrixXd D2 = D * D;

  Eigen::VectorXd f(N + 1);
  for (int i = 0; i <= N; ++i) f(i) = guess.evaluate(r(i)) + 1e-3 * std::sin(M_PI * r(i));
  for (int it = 0; it < 40; ++it) {
    const Eigen::VectorXd f1 = D * f, f2 = D2 * f;
    Eigen::VectorXd F(N + 1);
    Eigen::MatrixXd J(N + 1, N + 1);
    for (int i = 0; i <= N; ++i) {
      const double p = r(i) * r(i) * (1.0 - r(i) * r(i)), s = 2.0 * r(i) * (1.0 - r(i) * r(i));
      F(i) = p * f2(i) + s * f1(i) - k * std::sin(2.0 * f(i));
      J.row(i) = p * D2.row(i) + s * D.row(i);
      J(i, i) -= 2.0 * k * std::cos(2.0 * f(i));
    }
    // r(0) = 0, r(N) = 1
    F(0) = f(0);
    J.row(0).setZero();
    J(0, 0) = 1.0;
    F(N) = f(N) - M_PI / 2.0;
    J.row(N).setZero();
    J(N, N) = 1.0;
    const Eigen::VectorXd dx = J.partialPivLu().solve(F);
    f -= dx;
    if (dx.lpNorm<Eigen::Infinity>() < 1e-13) break;
  }
  return (D * f)(0);
}

}  // namespace

TEST(Profiles, ClosedFormGroundState) {
  const auto p = profile_closed_form_f0();
  EXPECT_TRUE(p.is_closed_form());
  for (double r : {0.0, 0.1, 0.5, 0.9, 0.999}) EXPECT_NEAR(p.evaluate(r), 2.0 * std::atan(r), 1e-15);
  EXPECT_DOUBLE_EQ(p.b(), 2.0);
  EXPECT_DOUBLE_EQ(p.c(), 1.0);
}

TEST(Profiles, ShotGroundStateMatchesArctan) {
  const auto& p = profile(0);
  EXPECT_FALSE(p.is_closed_form());
  double worst = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double r = i / 4000.0;
    worst = std::max(worst, std::abs(p.evaluate(r) - 2.0 * std::atan(r)));
  }
  EXPECT_LT(worst, 1e-8);
  EXPECT_NEAR(p.b(), 2.0, 1e-9);
  EXPECT_NEAR(p.c(), 1.0, 1e-9);
}

TEST(Profiles, FirstExcitedSlopeAgreesWithCollocation) {
  const auto& p = profile(1);
  const double b = collocation_slope(p, 200);
  EXPECT_NEAR(b / p.b(), 1.0, 1e-7) << "shooting " << p.b() << " collocation " << b;
}

TEST(Profiles, CenterSeriesOfArctan) {
  // 2 arctan(rho) = 2 (rho - rho^3/3 + rho^5/5 - ...)
  const auto s = profile_detail::center_series(1, 2.0, 9);
  for (int k = 0; k <= 9; ++k) {
    const double expect = (k % 2 == 1) ? 2.0 * ((k / 2) % 2 ? -1.0 : 1.0) / k : 0.0;
    EXPECT_NEAR(s[k], expect, 1e-14) << k;
  }
}

TEST(Profiles, BoundarySeriesOfArctan) {
  // d/dt 2 arctan(1 - t) = -1 / (1 - t + t^2/2) = -sum d_k t^k
  const int K = 10;
  std::vector<double> d(K, 0.0);
  for (int k = 0; k < K; ++k) d[k] = (k == 0 ? 1.0 : 0.0) + (k >= 1 ? d[k - 1] : 0.0) - (k >= 2 ? 0.5 * d[k - 2] : 0.0);
  const auto s = profile_detail::boundary_series(1, 1.0, K);
  EXPECT_NEAR(s[0], M_PI / 2.0, 1e-15);
  for (int k = 1; k <= K; ++k) EXPECT_NEAR(s[k], -d[k - 1] / k, 1e-13) << k;
}

TEST(Profiles, IntersectionCountEqualsIndex) {
  for (int n = 0; n <= 4; ++n) EXPECT_EQ(intersection_count(profile(n)), n) << n;
  EXPECT_EQ(intersection_count(profile(0, 2)), 0);
  EXPECT_EQ(intersection_count(profile(1, 2)), 1);
}

TEST(Profiles, BoundaryValues) {
  for (int n = 0; n <= 3; ++n) {
    const auto& p = profile(n);
    EXPECT_NEAR(p.evaluate(0.0), 0.0, 1e-15);
    EXPECT_NEAR(p.evaluate(1.0), M_PI / 2.0, 1e-14);
    EXPECT_LT(p.matching_residual(), 1e-9);
  }
}

TEST(Profiles, SlopesGrowGeometrically) {
  // consecutive b_n approach the ratio exp(2 pi / sqrt 7)
  const double limit = std::exp(2.0 * M_PI / std::sqrt(7.0));
  double prev_gap = 1e9;
  for (int n = 1; n <= 3; ++n) {
    const double gap = std::abs(profile(n + 1).b() / profile(n).b() - limit);
    EXPECT_LT(gap, prev_gap) << n;
    prev_gap = gap;
  }
  EXPECT_LT(prev_gap, 0.05 * limit);
}

TEST(Profiles, SeriesAgreeWithIntegratedSolution) {
  const auto& p = profile(2);
  const auto z = p.series_at_zero(8);
  const double r = 0.5 * p.center_offset();
  double sum = 0.0;
  for (int k = 8; k >= 0; --k) sum = sum * r + z[k];
  EXPECT_NEAR(sum, p.evaluate(r), 1e-12);
  const auto o = p.series_at_one(8);
  const double t = 0.5 * p.boundary_offset();
  sum = 0.0;
  for (int k = 8; k >= 0; --k) sum = sum * t + o[k];
  EXPECT_NEAR(sum, p.evaluate(1.0 - t), 1e-12);
}

TEST(Profiles, DerivativesSatisfyProfileEquation) {
  const auto& p = profile(2);
  const double k = 1.0;
  for (double r : {0.02, 0.2, 0.5, 0.8, 0.97}) {
    const auto d = p.derivatives(r);
    const double res = d[2] + 2.0 * d[1] / r - k * std::sin(2.0 * d[0]) / (r * r * (1.0 - r * r));
    EXPECT_LT(std::abs(res), 1e-8 * (1.0 + std::abs(d[2]))) << r;
    // derivative agrees with a centered difference of the values
    const double h = 1e-5;
    EXPECT_NEAR(d[1], (p.evaluate(r + h) - p.evaluate(r - h)) / (2 * h), 1e-6 * (1.0 + std::abs(d[1])));
  }
}

TEST(Profiles, GaugeModeSolvesLinearizedEquation) {
  for (int n = 0; n <= 3; ++n) {
    const auto& p = profile(n);
    const auto prob = SLProblem::from_profile(p);
    double worst = 0.0;
    int sign_changes = 0;
    double prev = gauge_mode(p, 1e-3)[0];
    for (int i = 0; i <= 900; ++i) {
      const double r = 0.05 + 0.9 * i / 900.0;
      const auto g = gauge_mode(p, r);
      worst = std::max(worst, std::abs(apply_operator(prob, r, g[0], g[1], g[2])) / (1.0 + std::abs(g[0])));
    }
    for (int i = 1; i <= 20000; ++i) {
      const double r = 1e-3 + (1.0 - 2e-3) * i / 20000.0;
      const double v = gauge_mode(p, r)[0];
      if ((v < 0) != (prev < 0)) ++sign_changes;
      prev = v;
    }
    EXPECT_LT(worst, 1e-6) << n;
    EXPECT_EQ(sign_changes, n) << n;
  }
}

TEST(Profiles, IntersectionCountFromSamples) {
  std::vector<double> r, f, df;
  for (int i = 0; i <= 200; ++i) {
    const double x = i / 200.0;
    r.push_back(x);
    f.push_back(M_PI / 2.0 + std::sin(9.0 * x) * (1.0 - x));
    df.push_back(9.0 * std::cos(9.0 * x) * (1.0 - x) - std::sin(9.0 * x));
  }
  // sin(9x) changes sign at pi/9 and 2pi/9 inside (0, 1)
  EXPECT_EQ(intersection_count(r, f, df), 2);
}

TEST(Profiles, ErrorsAreSignalled) {
  EXPECT_THROW(shoot_profile(-1, 1, 1e-10), InvalidArgument);
  EXPECT_THROW(shoot_profile(0, 0, 1e-10), InvalidArgument);
  ProfileOptions o;
  o.b_max = 3.0;
  EXPECT_THROW(shoot_profile(3, 1, 1e-10, o), ProfileNotFound);
}
