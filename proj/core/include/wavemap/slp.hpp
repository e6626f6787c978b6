#pragma once

// Sturm-Liouville problems a u = (1/w)(-(p u')' + q u) on (0, 1) with
//   w = rho^2 / (1 - rho^2)^2,   p = rho^2,
//   q = (l(l+1)(1 - rho^2) cos(2f) - rho^2) / (1 - rho^2)^2,
// and their negative point spectrum.

#include "wavemap/frobenius.hpp"
#include "wavemap/odeint.hpp"
#include "wavemap/profiles.hpp"

#include <array>
#include <memory>
#include <optional>
#include <vector>

namespace wavemap {

enum class EndpointClass { limit_point, limit_circle };

class SLProblem {
 public:
  /// Problem for A_{n,l} built on a profile.
  static SLProblem from_profile(const Profile& profile);
  /// Problem for A_infinity (f = pi/2, l = 1).
  static SLProblem infinity();

  double w(double rho) const;
  double p(double rho) const noexcept { return rho * rho; }
  double q(double rho) const;
  /// q - lambda w, evaluated without cancellation near rho = 1.
  double shifted_potential(double rho, double lambda) const;
  double cos2f(double rho) const;

  int ell() const noexcept { return ell_; }
  /// Profile index; empty for A_infinity.
  std::optional<int> n() const;
  bool is_infinity() const noexcept { return !profile_; }
  const Profile* source_profile() const noexcept { return profile_.get(); }
  /// Weyl classification at rho = 0 and rho = 1.
  std::array<EndpointClass, 2> endpoint_class() const noexcept;

  /// Normal form of (lambda - a) u = 0 at the given endpoint, truncated at `order`.
  frobenius::LocalEquation local_equation(frobenius::Endpoint point, double lambda, int order) const;
  frobenius::SingularPointData indicial_roots(frobenius::Endpoint point, double lambda) const;

  /// Taylor coefficients of cos(2f) at the endpoint in the local variable.
  series::Series<double> cos2f_series(frobenius::Endpoint point, int order) const;

 private:
  SLProblem() = default;

  int ell_ = 1;
  std::shared_ptr<const Profile> profile_;
};

/// Samples on a mesh, optionally with the first two derivatives.
struct GridFunction {
  std::vector<double> mesh;
  std::vector<double> values;
  std::vector<double> first;
  std::vector<double> second;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// (u|v)_H = int u v w over the mesh range. uv is interpolated piecewise
/// quadratically and integrated against w exactly. Throws InvalidArgument for
/// different meshes or a mesh reaching rho = 1.
QuadratureResult inner_product_w(const GridFunction& u, const GridFunction& v);

/// (1/w)(-(p u')' + q u) at the mesh nodes. With derivative samples the result
/// is pointwise; otherwise second-order differences are used and the two end
/// nodes are dropped. Throws InvalidArgument when the mesh touches 0 or 1.
GridFunction apply_operator(const SLProblem& prob, const GridFunction& u);

/// Pointwise a u from u, u', u''.
double apply_operator(const SLProblem& prob, double rho, double u, double du, double d2u);

struct ShootingOptions {
  double eps = 1e-6;
  int series_order = 8;
  double rho_match = 0.5;
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double mu_min = 0.5;
  double grid_ratio = 1.05;
  /// Relative tolerance on mu for the root refinement.
  double root_tol = 1e-13;
};

/// Eigenfunction assembled from the two one-sided Pruefer solutions and the
/// endpoint series, scaled to unit H-norm and positive near rho = 0. The sides
/// are joined where their angles agree best, since far from the bulk of the
/// eigenfunction each side carries an exponentially growing contamination.
class Eigenfunction {
 public:
  double value(double rho) const;
  double derivative(double rho) const;
  double left_offset() const noexcept { return eps_left_; }
  double right_offset() const noexcept { return eps_right_; }
  /// Integrator nodes of both sides in increasing order.
  std::vector<double> mesh() const;
  /// log of the H-norm of the unscaled shooting solution.
  double log_norm_before_scaling() const noexcept { return log_raw_norm_; }
  /// Interior zeros, from the Pruefer angle crossing multiples of pi.
  int zero_count() const noexcept { return zeros_; }
  /// Point where the two one-sided solutions are joined.
  double gluing_point() const noexcept { return rho_match_; }
  /// |sin(theta_L - theta_R)| at the gluing point: the Wronskian of the two
  /// one-sided solutions scaled to unit Pruefer amplitude.
  double wronskian_residual() const noexcept { return wronskian_; }

 private:
  friend class EigenSolver;

  struct Side {
    std::shared_ptr<const odeint::DenseSolution> sol;  // (theta, ln r)
    frobenius::FrobeniusExpansion series;
    double log_scale = 0.0;
    double sign = 1.0;
  };
  double side_value(const Side& s, double rho, bool left) const;
  double side_derivative(const Side& s, double rho, bool left) const;

  double rho_match_ = 0.5;
  double eps_left_ = 0.0;
  double eps_right_ = 0.0;
  double log_raw_norm_ = 0.0;
  double wronskian_ = 0.0;
  int zeros_ = 0;
  Side left_, right_;
};

struct EigenvalueRecord {
  double lambda = 0.0;
  double mu = 0.0;
  /// -1 marks A_infinity.
  int n = 0;
  int ell = 1;
  /// 1-based position in order of decreasing lambda.
  int j = 0;
  /// Normalized Wronskian of the one-sided solutions at the gluing point.
  double wronskian_residual = 0.0;
  std::shared_ptr<const Eigenfunction> eigenfunction;
};

struct ShootingDiagnostics {
  int grid_points = 0;
  /// Scan cells holding more than one root that were subdivided.
  int refined_cells = 0;
  int mismatch_evaluations = 0;
};

/// Pruefer-angle mismatch theta_L(rho_m) - theta_R(rho_m) for lambda = -mu^2;
/// strictly decreasing in mu, eigenvalues where it is a multiple of pi.
double shooting_mismatch(const SLProblem& prob, double mu, const ShootingOptions& opts = {});

/// All eigenvalues lambda = -mu^2 with mu in [mu_min, mu_max], sorted by lambda
/// descending. Requires a limit-point problem (A_{n,l}).
std::vector<EigenvalueRecord> eigenvalues_shooting(const SLProblem& prob, double mu_max,
                                                   const ShootingOptions& opts = {},
                                                   ShootingDiagnostics* diagnostics = nullptr);

/// Single eigenfunction at a known eigenvalue.
std::shared_ptr<const Eigenfunction> eigenfunction(const SLProblem& prob, double mu, const ShootingOptions& opts = {});

}  // namespace wavemap
