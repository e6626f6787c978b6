#pragma once

// Self-similar co-rotational profiles f_{n,l}: solutions of
//
//   f'' + (2/rho) f' - (l(l+1)/2) sin(2f) / (rho^2 (1 - rho^2)) = 0,
//   f(0) = 0,  f(1) = pi/2,
//
// with n crossings of pi/2 on [0, 1).

#include "wavemap/odeint.hpp"
#include "wavemap/series.hpp"

#include <array>
#include <memory>
#include <span>
#include <vector>

namespace wavemap {

struct ProfileOptions {
  /// Offset of the integration start from both singular endpoints.
  double eps = 1e-6;
  /// Order of the local power series used at rho = 0 and rho = 1.
  int series_order = 8;
  double rho_match = 0.5;
  double ode_rel_tol = 1e-13;
  double ode_abs_tol = 1e-15;
  /// Geometric scan of the centre slope b used to bracket f_n.
  double b_min = 0.25;
  double b_max = 1e9;
  double scan_ratio = 1.3;
  int max_newton = 60;
};

class Profile {
 public:
  /// Integrates both one-sided solutions for the given shooting parameters
  /// without any matching; `n` is the label the caller claims.
  static Profile from_parameters(int n, int ell, double b, double c, double tol,
                                 const ProfileOptions& options = {});

  int n() const noexcept { return n_; }
  int ell() const noexcept { return ell_; }
  /// f ~ b rho^l near 0.
  double b() const noexcept { return b_; }
  /// f ~ pi/2 - c (1 - rho) near 1.
  double c() const noexcept { return c_; }
  double tol() const noexcept { return tol_; }
  bool is_closed_form() const noexcept { return closed_form_; }
  const ProfileOptions& options() const noexcept { return options_; }

  double evaluate(double rho) const;
  double evaluate_derivative(double rho) const;
  /// f, f', f'', f''' (higher derivatives from the profile equation).
  std::array<double, 4> derivatives(double rho) const;

  /// Taylor coefficients of f in rho at rho = 0.
  series::Series<double> series_at_zero(int order) const;
  /// Taylor coefficients of f in t = 1 - rho at rho = 1 (constant term pi/2).
  series::Series<double> series_at_one(int order) const;

  /// Where the series representation hands over to the integrated solution.
  double center_offset() const noexcept { return eps_left_; }
  double boundary_offset() const noexcept { return eps_right_; }
  double rho_match() const noexcept { return options_.rho_match; }

  /// |f_L - f_R| + |f_L' - f_R'| at the matching point.
  double matching_residual() const;

  /// Sorted nodes covering [0, 1]: the integrator meshes plus the endpoints.
  std::vector<double> mesh() const;

 private:
  friend Profile profile_closed_form_f0();
  friend Profile shoot_profile(int, int, double, const ProfileOptions&);

  Profile() = default;

  int n_ = 0;
  int ell_ = 1;
  double b_ = 0.0;
  double c_ = 0.0;
  double tol_ = 0.0;
  bool closed_form_ = false;
  ProfileOptions options_;
  double eps_left_ = 0.0;
  double eps_right_ = 0.0;
  series::Series<double> zero_series_;
  series::Series<double> one_series_;
  std::shared_ptr<const odeint::DenseSolution> left_;
  std::shared_ptr<const odeint::DenseSolution> right_;
};

/// f_0 = 2 arctan(rho) for l = 1, evaluated analytically.
Profile profile_closed_form_f0();

/// Two-sided shooting and matching for f_{n,l}. Throws ProfileNotFound when no
/// bracket exists in the scan range and NewtonDivergence when the matching
/// iteration fails.
Profile shoot_profile(int n, int ell, double tol, const ProfileOptions& options = {});

/// Sign changes of f - pi/2 on [0, 1). Throws MeshTooCoarse when a
/// near-tangency cannot be resolved.
int intersection_count(const Profile& p);

/// Same count from samples of f and f' on an increasing mesh; a final node at
/// rho = 1 is excluded.
int intersection_count(std::span<const double> rho, std::span<const double> f, std::span<const double> df);

/// theta(rho) = rho sqrt(1 - rho^2) f'(rho) and its first two derivatives;
/// solves a_{n,l} theta = 0.
std::array<double, 3> gauge_mode(const Profile& p, double rho);

namespace profile_detail {

/// Local series of the profile equation at rho = 0 (in rho) and at rho = 1
/// (in t = 1 - rho), given the free coefficient (b resp. c).
series::Series<double> center_series(int ell, double b, int order);
series::Series<double> boundary_series(int ell, double c, int order);

}  // namespace profile_detail

}  // namespace wavemap
