#pragma once

// The limit operator A_infinity: f = pi/2, l = 1, q = (rho^2 - 2) / (1 - rho^2)^2.
// rho = 0 is limit-circle with indices (-1 +- i sqrt 7) / 2 and takes the
// boundary condition [u, chi]_p(0) = 0. With z = rho^2 and
// v = z^alpha (1 - z)^beta u, the eigenvalue equation is hypergeometric with
//   a = (1 + 2 mu + i sqrt 7) / 4,  b = (3 + 2 mu + i sqrt 7) / 4,  c = 1 + i sqrt 7 / 2,
//   m(lambda) = Gamma(a+1-c) Gamma(b+1-c) Gamma(c-1) / (Gamma(a) Gamma(b) Gamma(1-c)),
// and the eigenvalues solve m(lambda) = m(0).

#include "wavemap/odeint.hpp"
#include "wavemap/slp.hpp"

#include <complex>
#include <memory>
#include <vector>

namespace wavemap {

struct ConnectionData {
  double lambda = 0.0;
  double mu = 0.0;
  std::complex<double> a, b, c, alpha, beta;
  std::complex<double> m;
  /// Im log m, continuous in mu.
  double phase = 0.0;
  /// ||m| - 1|
  double modulus_defect = 0.0;
};

/// Requires lambda <= 0.
ConnectionData m_coefficient(double lambda);

struct InftyOptions {
  /// Roots with mu above this are not searched; the result is flagged truncated.
  double mu_ceiling = 1e6;
  /// Bracketing grid: geometric in mu from mu_floor with this step in log mu.
  double log_step = 0.02;
  double mu_floor = 1e-3;
  double root_tol = 1e-14;
};

struct InftySpectrum {
  /// lambda descending, n = -1.
  std::vector<EigenvalueRecord> records;
  bool truncated = false;
};

/// First `count` eigenvalues from the phase condition arg m(lambda) = arg m(0)
/// mod 2 pi. The residual field holds |m(lambda) - m(0)|.
InftySpectrum infty_eigenvalues(int count, const InftyOptions& opts = {});

/// chi = (1 - S) chi~ with chi~ the solution of a_inf chi~ = 0 behaving like
/// (1 - rho)^(1/2) at rho = 1 and S a C-infinity step from 0 at rho_a to 1 at rho_b.
class BoundaryFunction {
 public:
  double chi(double rho) const;
  double derivative(double rho) const;
  /// p chi'
  double flux(double rho) const;
  double cutoff_lo() const noexcept { return lo_; }
  double cutoff_hi() const noexcept { return hi_; }
  /// Smallest rho where chi is available.
  double lower_limit() const;
  BoundaryFunction scaled(double factor) const;

 private:
  friend BoundaryFunction chi_boundary_function(double rho_a, double rho_b);

  void tilde(double rho, double& u, double& P) const;

  std::shared_ptr<const odeint::DenseSolution> sol_;  // (chi~, p chi~')
  double lo_ = 0.55, hi_ = 0.8;
  double scale_ = 1.0;
};

/// Throws InvalidArgument unless 1/2 < rho_a < rho_b < 1.
BoundaryFunction chi_boundary_function(double rho_a = 0.55, double rho_b = 0.8);

/// [u, v]_p = p (u v' - u' v) from values and fluxes P = p u'.
inline double lagrange_bracket(double u, double pu, double v, double pv) { return u * pv - pu * v; }

struct DirectOptions {
  double eps = 1e-6;
  int series_order = 8;
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double mu_min = 0.5;
  double mu_max = 5000.0;
  double grid_ratio = 1.05;
  double root_tol = 1e-12;
  /// Extrapolation window [rho_hi / window_ratio, rho_hi], rho_hi = min(window_hi, window_scale / mu).
  double window_hi = 1e-3;
  double window_scale = 0.02;
  double window_ratio = 100.0;
  int window_samples = 40;
  /// Fits with larger relative rms misfit count as non-convergent.
  double max_misfit = 1e-6;
};

struct BracketLimit {
  /// [u, chi]_p(0) for the recessive u scaled to unit Pruefer amplitude at the window top.
  double value = 0.0;
  /// rms misfit of the extrapolation relative to the size of the two bracket terms.
  double misfit = 0.0;
  bool converged = false;
};

/// Extrapolates [u, chi]_p to rho = 0 with the basis {1, rho^2, rho^2 cos(sqrt7 ln rho), rho^2 sin(sqrt7 ln rho)}.
BracketLimit bracket_at_zero(const BoundaryFunction& chi, double mu, const DirectOptions& opts = {});

/// Eigenvalues as roots of the extrapolated bracket in mu. Roots where the
/// extrapolation does not converge are discarded.
InftySpectrum infty_eigenvalues_direct(int count, const BoundaryFunction& chi, const DirectOptions& opts = {});

}  // namespace wavemap
