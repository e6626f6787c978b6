#include "wavemap/error.hpp"
#include "wavemap/gamma.hpp"
#include "wavemap/hyp_infty.hpp"

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>
#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>

using namespace wavemap;
using cplx = std::complex<double>;

namespace {

const double s7 = std::sqrt(7.0);

const InftySpectrum& phase_roots() {
  static const InftySpectrum s = infty_eigenvalues(3);
  return s;
}

const BoundaryFunction& chi() {
  static const BoundaryFunction c = chi_boundary_function();
  return c;
}

// m(0) from the solution recessive at rho = 1: integrate (rho^2 u')' = q u from
// u = t^(1/2) (1 - t / 4) + O(t^(5/2)), t = 1 - rho, and fit u rho^(1/2) = A cos(phi) + B sin(phi) + rho^2 terms,
// phi = (sqrt7 / 2) ln rho. With u = C e^(i phi) + conj(C) e^(-i phi), m = conj(C) / C.
cplx m_zero_by_fitting() {
  namespace ode = boost::numeric::odeint;
  using state = std::array<double, 2>;  // u, rho^2 u'
  auto rhs = [](const state& y, state& dy, double r) {
    dy[0] = y[1] / (r * r);
    dy[1] = (r * r - 2.0) / ((1 - r * r) * (1 - r * r)) * y[0];
  };
  const double t0 = 1e-6;
  double r = 1.0 - t0;
  state y{std::sqrt(t0) * (1 - t0 / 4), -r * r * (0.5 - 0.375 * t0) / std::sqrt(t0)};
  auto stepper = ode::make_controlled(1e-14, 1e-14, ode::runge_kutta_dopri5<state>());
  const int M = 60;
  Eigen::MatrixXd X(M, 4);
  Eigen::VectorXd Y(M);
  double dt = -1e-12;
  for (int i = 0; i < M; ++i) {
    const double target = 1e-3 * std::pow(1e-2, static_cast<double>(i) / (M - 1));
    ode::integrate_adaptive(stepper, rhs, y, r, target, dt);
    r = target;
    const double phi = 0.5 * s7 * std::log(r);
    X.row(i) << std::cos(phi), std::sin(phi), r * r * std::cos(phi), r * r * std::sin(phi);
    Y(i) = y[0] * std::sqrt(r);
  }
  const Eigen::VectorXd coef = X.colPivHouseholderQr().solve(Y);
  const cplx C = 0.5 * cplx(coef(0), -coef(1));
  return std::conj(C) / C;
}

}  // namespace

TEST(HypInfty, ParametersAndUnitModulus) {
  for (double mu = 0.0; mu < 3000.0; mu = mu * 1.1 + 0.05) {
    const auto d = m_coefficient(-mu * mu);
    EXPECT_NEAR(d.mu, mu, 1e-12 * (1 + mu));
    EXPECT_NEAR(std::abs(d.a - cplx((1 + 2 * mu) / 4, s7 / 4)), 0.0, 1e-12 * (1 + mu));
    EXPECT_NEAR(std::abs(d.b - d.a - 0.5), 0.0, 1e-12 * (1 + mu));
    EXPECT_NEAR(std::abs(d.c - cplx(1.0, s7 / 2)), 0.0, 1e-15);
    EXPECT_LT(std::abs(std::abs(d.m) - 1.0), 1e-10) << mu;
    EXPECT_LT(d.modulus_defect, 1e-10);
  }
}

TEST(HypInfty, ConjugationIdentity) {
  // a + 1 - c = conj(a), b + 1 - c = conj(b), 1 - c = conj(c - 1)
  for (double mu : {0.0, 1.0, 5.3, 40.0, 120.0}) {
    const auto d = m_coefficient(-mu * mu);
    const cplx g = gamma_complex(d.a) * gamma_complex(d.b), h = gamma_complex(d.c - 1.0);
    const cplx expect = std::conj(g) / g * (h / std::conj(h));
    EXPECT_LT(std::abs(d.m - expect), 1e-12) << mu;
    EXPECT_LT(std::abs(d.a + 1.0 - d.c - std::conj(d.a)), 1e-14);
  }
}

TEST(HypInfty, ZeroValueAgreesWithConnectionFit) {
  const cplx fit = m_zero_by_fitting();
  const cplx m0 = m_coefficient(0.0).m;
  EXPECT_LT(std::abs(fit - m0), 1e-7) << fit << " vs " << m0;
}

TEST(HypInfty, PhaseIsMonotone) {
  double prev = m_coefficient(-0.25).phase;
  for (double mu = 0.51; mu < 700.0; mu *= 1.01) {
    const double ph = m_coefficient(-mu * mu).phase;
    EXPECT_LT(ph, prev) << mu;
    prev = ph;
  }
}

TEST(HypInfty, PhaseRoots) {
  const auto& s = phase_roots();
  ASSERT_EQ(s.records.size(), 3u);
  EXPECT_FALSE(s.truncated);
  EXPECT_NEAR(s.records[0].mu, 5.3009, 5e-5);
  EXPECT_NEAR(s.records[1].mu, 57.637, 5e-4);
  EXPECT_NEAR(s.records[2].mu, 619.61, 5e-3);
  const cplx m0 = m_coefficient(0.0).m;
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& r = s.records[k];
    EXPECT_EQ(r.n, -1);
    EXPECT_EQ(r.j, static_cast<int>(k) + 1);
    EXPECT_LT(std::abs(m_coefficient(r.lambda).m - m0), 1e-11);
    EXPECT_LT(r.wronskian_residual, 1e-11);
  }
  // geometric spacing exp(2 pi / sqrt 7)
  EXPECT_NEAR(s.records[2].mu / s.records[1].mu, std::exp(2 * M_PI / s7), 0.01 * std::exp(2 * M_PI / s7));
}

TEST(HypInfty, CeilingTruncates) {
  InftyOptions o;
  o.mu_ceiling = 100.0;
  const auto s = infty_eigenvalues(3, o);
  EXPECT_TRUE(s.truncated);
  EXPECT_EQ(s.records.size(), 2u);
}

TEST(HypInfty, DirectShootingAgrees) {
  const auto direct = infty_eigenvalues_direct(3, chi());
  const auto& phase = phase_roots();
  ASSERT_EQ(direct.records.size(), 3u);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(direct.records[k].mu / phase.records[k].mu, 1.0, 1e-8) << k;
}

TEST(HypInfty, BracketAwayFromEigenvalues) {
  const auto at_one = bracket_at_zero(chi(), 1.0);
  EXPECT_TRUE(at_one.converged);
  const auto at_root = bracket_at_zero(chi(), phase_roots().records[0].mu);
  EXPECT_GT(std::abs(at_one.value), 1e3 * std::abs(at_root.value));
  EXPECT_GT(std::abs(at_one.value), 1e-3);
}

TEST(HypInfty, ScalingChiKeepsRoots) {
  const auto scaled = chi().scaled(2.0);
  EXPECT_NEAR(scaled.chi(0.3), 2.0 * chi().chi(0.3), 1e-14);
  const auto a = infty_eigenvalues_direct(2, chi()), b = infty_eigenvalues_direct(2, scaled);
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(a.records[k].mu, b.records[k].mu, 1e-9 * a.records[k].mu);
}

TEST(HypInfty, CutoffPlacementDoesNotMatter) {
  const auto other = chi_boundary_function(0.6, 0.9);
  const auto a = infty_eigenvalues_direct(3, chi()), b = infty_eigenvalues_direct(3, other);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(a.records[k].mu / b.records[k].mu, 1.0, 1e-6) << k;
}

TEST(HypInfty, BoundaryFunctionShape) {
  const auto& c = chi();
  for (double r : {0.81, 0.9, 0.999}) {
    EXPECT_EQ(c.chi(r), 0.0);
    EXPECT_EQ(c.flux(r), 0.0);
  }
  // a_inf chi = 0 below the cutoff: (p chi')' = q chi
  const auto inf = SLProblem::infinity();
  const double h = 1e-6;
  for (double r : {1e-3, 0.05, 0.3, 0.5}) {
    const double dflux = (c.flux(r + h) - c.flux(r - h)) / (2 * h);
    EXPECT_NEAR(dflux, inf.q(r) * c.chi(r), 1e-6 * (std::abs(dflux) + std::abs(c.chi(r)) / (r * r)));
    EXPECT_NEAR(c.flux(r), r * r * c.derivative(r), 1e-12 * (1 + std::abs(c.flux(r))));
  }
  EXPECT_DOUBLE_EQ(lagrange_bracket(c.chi(0.2), c.flux(0.2), c.chi(0.2), c.flux(0.2)), 0.0);
}

TEST(HypInfty, Rejections) {
  EXPECT_THROW(m_coefficient(1.0), InvalidArgument);
  EXPECT_THROW(infty_eigenvalues(0), InvalidArgument);
  EXPECT_THROW(chi_boundary_function(0.4, 0.8), InvalidArgument);
  EXPECT_THROW(chi_boundary_function(0.5, 0.8), InvalidArgument);
  EXPECT_THROW(chi_boundary_function(0.8, 0.7), InvalidArgument);
  EXPECT_THROW(chi_boundary_function(0.6, 1.0), InvalidArgument);
  EXPECT_THROW(bracket_at_zero(chi(), -1.0), InvalidArgument);
}
