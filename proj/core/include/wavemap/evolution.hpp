#pragma once

// Linear evolution u_ss + A u = 0 in similarity time s = sigma, for A = A_{n,l}.
// With x = atanh(rho) and v = sinh(x) u this is the wave equation
//   v_ss = v_xx - V(x) v,   V = l(l+1) cos(2f) / sinh^2(x),
// discretized by linear finite elements with a lumped mass on a graded grid
// over [0, X], X = atanh(1 - delta): v(0) = 0, natural (reflecting) closure at X.
// The discrete energy v^T K v + v_s^T M v is exactly conserved by the
// semi-discrete system.

#include "wavemap/error.hpp"
#include "wavemap/slp.hpp"

#include <functional>
#include <random>
#include <span>
#include <vector>

namespace wavemap {

class DiscreteOperator {
 public:
  /// grid_size intervals; throws InvalidArgument for grid_size < 128 or delta outside (0, 0.1).
  static DiscreteOperator build(const SLProblem& prob, int grid_size, double delta = 1e-3);

  /// Unknowns: nodes 1..N (node 0 carries the Dirichlet value).
  int size() const noexcept { return static_cast<int>(mass_.size()); }
  std::span<const double> x() const noexcept { return x_; }
  /// tanh(x) at all N + 1 nodes.
  std::span<const double> rho() const noexcept { return rho_; }
  std::span<const double> mass() const noexcept { return mass_; }
  std::span<const double> diagonal() const noexcept { return diag_; }
  std::span<const double> off_diagonal() const noexcept { return off_; }
  double h_min() const noexcept { return h_min_; }
  double delta() const noexcept { return delta_; }

  /// out = K v
  void stiffness(std::span<const double> v, std::span<double> out) const;
  /// out = M^{-1} K v, the discrete a.
  void apply(std::span<const double> v, std::span<double> out) const;
  /// v^T K v
  double quadratic_form(std::span<const double> v) const;
  /// v^T M w
  double mass_product(std::span<const double> v, std::span<const double> w) const;
  /// Gershgorin bound on the spectrum of M^{-1} K.
  double spectral_bound() const;
  /// Largest stable RK4 step, min(0.5 h_min, 2 / sqrt(bound)).
  double stable_step() const;

  /// Liouville samples v_i = sinh(x_i) u(tanh x_i), i = 1..N.
  std::vector<double> sample(const std::function<double(double)>& u) const;
  /// u on all N + 1 rho nodes from Liouville samples.
  std::vector<double> to_rho(std::span<const double> v) const;

 private:
  std::vector<double> x_, rho_, mass_, diag_, off_;
  double h_min_ = 0.0, delta_ = 1e-3;
};

struct ModeSeed {
  enum class Kind { zero, eigenmode, gauge, custom };
  Kind kind = Kind::custom;
  /// Eigenvalue index for eigenmode seeds, else 0.
  int j = 0;
  /// mu_j for eigenmode seeds, else 0.
  double mu = 0.0;
  double amplitude = 1.0;
  /// u(0, rho) and u_s(0, rho).
  std::function<double(double)> u0, u1;

  static ModeSeed zero();
  /// Eigenfunction j of the problem with u1 = +mu u0 (growing) or -mu u0.
  static ModeSeed eigenmode(const SLProblem& prob, int j, bool growing = true, double amplitude = 1.0,
                            const ShootingOptions& opts = {});
  /// u0 = theta_n, u1 = 0. Requires a problem built from a profile.
  static ModeSeed gauge(const SLProblem& prob, double amplitude = 1.0);
  static ModeSeed custom(std::function<double(double)> u0, std::function<double(double)> u1, double amplitude = 1.0);
  /// Sum of a few smooth bumps supported in [0.05, 0.9] for u0 and u1.
  static ModeSeed random_smooth(std::mt19937_64& rng);
};

struct EvolutionState {
  double sigma = 0.0;
  /// rho nodes including rho = 0.
  std::vector<double> grid;
  /// u and u_s on the grid.
  std::vector<double> u, v;
  /// (A u | u)_H + ||u_s||_H^2
  double energy = 0.0;
  /// ||u||_H
  double h_norm = 0.0;
};

struct EvolutionOptions {
  double delta = 1e-3;
  /// Spacing of emitted states.
  double output_interval = 0.05;
  /// Requested step; 0 selects the stable step. Larger requests are reduced.
  double max_step = 0.0;
};

/// Non-finite values during the evolution; carries the last finite state.
class EvolutionAborted : public Error {
 public:
  EvolutionAborted(const std::string& what, EvolutionState last)
      : Error(ErrorKind::evolution_aborted, what), last_(std::move(last)) {}
  const EvolutionState& last_good_state() const noexcept { return last_; }

 private:
  EvolutionState last_;
};

/// Classical RK4 from sigma = 0 to sigma_max. States at sigma = 0, the
/// output interval and sigma_max. Throws InvalidArgument for a seed with
/// non-finite samples and EvolutionAborted when the solution overflows.
std::vector<EvolutionState> evolve(const DiscreteOperator& op, const ModeSeed& seed, double sigma_max,
                                   const EvolutionOptions& opts = {});
std::vector<EvolutionState> evolve(const SLProblem& prob, const ModeSeed& seed, double sigma_max, int grid_size,
                                   const EvolutionOptions& opts = {});

/// Least-squares slope of log ||u||_H over states with sigma in [lo, hi].
/// Throws InvalidArgument with fewer than 3 states or a vanishing norm.
double growth_rate(std::span<const EvolutionState> traj, double lo, double hi);

/// Exact solution of the semi-discrete system through the eigendecomposition of
/// M^{-1/2} K M^{-1/2}: cos / sin for positive eigenvalues, cosh / sinh for negative.
EvolutionState propagate_spectral(const DiscreteOperator& op, const ModeSeed& seed, double sigma);
EvolutionState propagate_spectral(const SLProblem& prob, const ModeSeed& seed, double sigma, int grid_size,
                                  double delta = 1e-3);

/// Eigenvalues of the discrete operator, ascending.
std::vector<double> discrete_spectrum(const DiscreteOperator& op);

}  // namespace wavemap
