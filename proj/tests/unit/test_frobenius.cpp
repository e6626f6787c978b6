#include "wavemap/error.hpp"
#include "wavemap/frobenius.hpp"
#include "wavemap/odeint.hpp"
#include "wavemap/profiles.hpp"
#include "wavemap/slp.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wavemap;
using namespace wavemap::frobenius;

namespace {

const SLProblem& a0() {
  static const SLProblem p = SLProblem::from_profile(profile_closed_form_f0());
  return p;
}

}  // namespace

TEST(Frobenius, IndicesAtCenterAreEllAndMinusEllMinusOne) {
  for (int ell : {1, 2, 3}) {
    const auto p = shoot_profile(0, ell, 1e-10);
    const auto d = SLProblem::from_profile(p).indicial_roots(Endpoint::zero, -4.0);
    EXPECT_NEAR(d.indices[0].real(), ell, 1e-12);
    EXPECT_NEAR(d.indices[1].real(), -ell - 1.0, 1e-12);
    EXPECT_TRUE(d.degenerate);
  }
}

TEST(Frobenius, IndicesAtBoundaryDependOnMu) {
  for (double mu : {0.5, 3.0, 40.0}) {
    const auto d = a0().indicial_roots(Endpoint::one, -mu * mu);
    EXPECT_NEAR(d.indices[0].real(), 0.5 * (1.0 + mu), 1e-12);
    EXPECT_NEAR(d.indices[1].real(), 0.5 * (1.0 - mu), 1e-12);
  }
  const auto z = a0().indicial_roots(Endpoint::one, 0.0);
  EXPECT_NEAR(z.indices[0].real(), 0.5, 1e-12);
  EXPECT_TRUE(z.degenerate);
}

TEST(Frobenius, LimitCircleIndicesOfTheLimitOperator) {
  const auto d = SLProblem::infinity().indicial_roots(Endpoint::zero, -1.0);
  EXPECT_NEAR(d.indices[0].real(), -0.5, 1e-12);
  EXPECT_NEAR(std::abs(d.indices[0].imag()), std::sqrt(7.0) / 2.0, 1e-12);
  EXPECT_NEAR(d.indices[1].real(), -0.5, 1e-12);
  const auto cls = SLProblem::infinity().endpoint_class();
  EXPECT_EQ(cls[0], EndpointClass::limit_circle);
  EXPECT_EQ(cls[1], EndpointClass::limit_point);
  EXPECT_EQ(a0().endpoint_class()[0], EndpointClass::limit_point);
}

TEST(Frobenius, RejectsNonRoot) {
  const auto eq = a0().local_equation(Endpoint::zero, -1.0, 6);
  EXPECT_THROW(series_solution(eq, 0.3, 6), InvalidArgument);
}

TEST(Frobenius, ResonantBranchNeedsLogarithm) {
  // at rho = 0 the indices 1 and -2 differ by an integer
  const auto eq = a0().local_equation(Endpoint::zero, -1.0, 6);
  EXPECT_THROW(series_solution(eq, -2.0, 6), UnsupportedBranch);
}

TEST(Frobenius, RealProblemGivesRealCoefficients) {
  const auto eq = a0().local_equation(Endpoint::one, -9.0, 10);
  const auto s = series_solution(eq, 2.0, 10);
  EXPECT_LT(s.imaginary_defect(), 1e-14);
}

// truncation error of the series against a tightly integrated solution grows like s^(K+1)
TEST(Frobenius, TruncationErrorDecaysWithOrder) {
  const double mu = 2.0, lambda = -mu * mu;
  const int K = 6;
  const auto eq = a0().local_equation(Endpoint::one, lambda, 16);
  const auto exact = series_solution(eq, 0.5 * (1.0 + mu), 16);
  const auto eqk = a0().local_equation(Endpoint::one, lambda, K);
  const auto trunc = series_solution(eqk, 0.5 * (1.0 + mu), K);

  // integrate (u, p u') inward from t = 1e-4 using the high-order series
  const double t0 = 1e-4;
  odeint::IVPSpec spec;
  spec.rhs = [&](double r, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1] / (r * r);
    dy[1] = a0().shifted_potential(r, lambda) * y[0];
  };
  spec.t0 = 1.0 - t0;
  spec.t1 = 0.8;
  spec.initial_state = {exact.value(t0).real(), spec.t0 * spec.t0 * exact.derivative_rho(t0).real()};
  spec.rel_tol = 1e-14;
  spec.abs_tol = 1e-18;
  const auto sol = odeint::integrate(spec);

  double prev = 0.0;
  for (double t : {0.02, 0.04, 0.08}) {
    const double err = std::abs(trunc.value(t).real() - sol.evaluate(1.0 - t, 0)) / std::abs(sol.evaluate(1.0 - t, 0));
    if (prev > 0.0) {
      const double order = std::log2(err / prev);
      EXPECT_GT(order, K) << "t=" << t;
    }
    prev = err;
  }
  // the high-order series itself agrees with the integration
  EXPECT_NEAR(exact.value(0.05).real(), sol.evaluate(0.95, 0), 1e-10 * std::abs(sol.evaluate(0.95, 0)));
}

TEST(Frobenius, EndpointFromRejectsInterior) {
  EXPECT_EQ(endpoint_from(0.0), Endpoint::zero);
  EXPECT_EQ(endpoint_from(1.0), Endpoint::one);
  EXPECT_THROW(endpoint_from(0.5), InvalidArgument);
}
