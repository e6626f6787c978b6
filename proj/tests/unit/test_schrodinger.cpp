#include "wavemap/error.hpp"
#include "wavemap/factorization.hpp"
#include "wavemap/profiles.hpp"
#include "wavemap/schrodinger.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace wavemap;

namespace {

// Zeros of the zero-energy solution of -v'' + V v = 0 with v ~ x^(l+1), by fixed-step RK4.
int zero_energy_nodes(const SchrodingerPotential& pot, double X, int steps) {
  const double x0 = 1e-4, h = (X - x0) / steps;
  const int l = pot.ell();
  double v = std::pow(x0, l + 1), dv = (l + 1) * std::pow(x0, l);
  auto acc = [&](double x, double y) { return pot.V(x) * y; };
  int nodes = 0;
  double x = x0;
  for (int i = 0; i < steps; ++i) {
    const double k1v = dv, k1d = acc(x, v);
    const double k2v = dv + 0.5 * h * k1d, k2d = acc(x + 0.5 * h, v + 0.5 * h * k1v);
    const double k3v = dv + 0.5 * h * k2d, k3d = acc(x + 0.5 * h, v + 0.5 * h * k2v);
    const double k4v = dv + h * k3d, k4d = acc(x + h, v + h * k3v);
    const double vn = v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    dv += h / 6 * (k1d + 2 * k2d + 2 * k3d + k4d);
    if ((vn < 0) != (v < 0)) ++nodes;
    v = vn;
    x += h;
  }
  return nodes;
}

}  // namespace

TEST(Schrodinger, RemainderAtTheOriginForGroundState) {
  const auto pot = schrodinger_transform(SLProblem::from_profile(profile_closed_form_f0()));
  EXPECT_NEAR(pot.Q(1e-4), -50.0 / 3.0, 1e-6);
  for (double x : {0.01, 0.049, 0.051, 0.5, 2.0, 8.0}) {
    const double s = std::sinh(x), f = 2 * std::atan(std::tanh(x));
    EXPECT_NEAR(pot.V(x), 2 * std::cos(2 * f) / (s * s), 1e-9 * (1 + std::abs(pot.V(x)))) << x;
  }
}

TEST(Schrodinger, RemainderAtTheOriginFromSlope) {
  const auto p = shoot_profile(2, 1, 1e-12);
  const auto pot = schrodinger_transform(SLProblem::from_profile(p));
  EXPECT_NEAR(pot.Q(1e-5), 2.0 * (-1.0 / 3.0 - 2.0 * p.b() * p.b()), 1e-4 * p.b() * p.b());
}

TEST(Schrodinger, LiouvilleMapIsAnIsometry) {
  std::mt19937_64 rng(11);
  const auto prob = SLProblem::from_profile(profile_closed_form_f0());
  using boost::math::quadrature::gauss_kronrod;
  for (int t = 0; t < 5; ++t) {
    const auto b = random_bump(rng);
    const double h = gauss_kronrod<double, 61>::integrate(
        [&](double r) { return b.u(r) * b.u(r) * prob.w(r); }, b.support_lo, b.support_hi, 15, 1e-13);
    const double l2 = gauss_kronrod<double, 61>::integrate(
        [&](double x) {
          const double v = liouville_transform(b.u, x);
          return v * v;
        },
        std::atanh(b.support_lo), std::atanh(b.support_hi), 15, 1e-13);
    EXPECT_NEAR(h, l2, 1e-10 * h);
  }
}

TEST(Schrodinger, ZeroEnergyNodesCountBoundStates) {
  for (int n = 0; n <= 3; ++n) {
    const auto p = n == 0 ? profile_closed_form_f0() : shoot_profile(n, 1, 1e-12);
    const auto pot = schrodinger_transform(SLProblem::from_profile(p));
    EXPECT_EQ(zero_energy_nodes(pot, 30.0, 200000), n) << n;
  }
}

TEST(Schrodinger, Rejections) {
  EXPECT_THROW(schrodinger_transform(SLProblem::infinity()), InvalidArgument);
  const auto pot = schrodinger_transform(SLProblem::from_profile(profile_closed_form_f0()));
  EXPECT_THROW(pot.Q(0.0), InvalidArgument);
  EXPECT_THROW(liouville_transform([](double) { return 1.0; }, -1.0), InvalidArgument);
}
