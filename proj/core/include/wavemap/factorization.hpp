#pragma once

// A_0 = B^ B for the ground state f_0 = 2 arctan(rho), l = 1, with
//   B u  =  (1 - rho^2) u' - (1 - 3 rho^2) / (rho (1 + rho^2)) u,
//   B^ u = -(1 - rho^2) u' - (3 - rho^2)  / (rho (1 + rho^2)) u.

#include <functional>
#include <random>

namespace wavemap {

/// Smooth function with two derivatives, supported in [support_lo, support_hi].
struct TestFunction {
  std::function<double(double)> u, du, d2u;
  double support_lo = 0.0;
  double support_hi = 1.0;
};

/// amplitude * exp(-1 / (1 - s^2)), s mapping [lo, hi] onto [-1, 1].
TestFunction bump(double lo, double hi, double amplitude = 1.0);

/// Bump with random support in [0.02, 0.98] times a random smooth modulation.
TestFunction random_bump(std::mt19937_64& rng);

/// Product of a test function with a smooth factor g (given with g', g'').
TestFunction multiply(const TestFunction& t, std::function<double(double)> g, std::function<double(double)> dg,
                      std::function<double(double)> d2g);

struct FactorizationReport {
  /// ||A_0 u - B^ B u||_H / ||A_0 u||_H
  double relative_residual = 0.0;
  /// |(B u | v)_H - (u | B^ v)_H|
  double adjointness_defect = 0.0;
  /// (A_0 u | u)_H
  double quadratic_form = 0.0;
  /// ||B u||_H^2
  double b_norm_squared = 0.0;
  /// ||u||_H^2
  double norm_squared = 0.0;
};

/// Throws InvalidArgument unless both supports lie strictly inside (0, 1).
FactorizationReport factorization_check(const TestFunction& u, const TestFunction& v, int panels = 400);

}  // namespace wavemap
