#pragma once

// Indicial analysis and truncated series solutions at the regular singular
// endpoints rho = 0 and rho = 1 of the radial operators.

#include "wavemap/series.hpp"

#include <array>
#include <complex>
#include <vector>

namespace wavemap::frobenius {

using cplx = std::complex<double>;

enum class Endpoint { zero, one };

/// Maps 0 and 1 to an Endpoint; interior points are ordinary points and are
/// rejected with InvalidArgument.
Endpoint endpoint_from(double rho);
double location(Endpoint e) noexcept;

/// Normal form at a singular point, in the local variable s = |rho - base|:
///   s^2 u_ss + s A(s) u_s + B(s) u = 0,
/// with A and B given by their Taylor coefficients in s.
struct LocalEquation {
  Endpoint point = Endpoint::zero;
  series::Series<cplx> a;
  series::Series<cplx> b;

  /// Indicial polynomial r(r-1) + A_0 r + B_0.
  cplx indicial(cplx r) const;
};

struct SingularPointData {
  double location = 0.0;
  /// Ordered by descending real part, then descending imaginary part.
  std::array<cplx, 2> indices{};
  /// Roots coincide or differ by an integer.
  bool degenerate = false;
};

struct FrobeniusExpansion {
  double base_point = 0.0;
  cplx index{};
  series::Series<cplx> coefficients;  // c_0 = 1
  int truncation_order = 0;

  /// u(s) = s^index * sum_k c_k s^k at offset s > 0 from the base point.
  cplx value(double s) const;
  /// du/ds at offset s.
  cplx derivative(double s) const;
  /// du/drho at offset s (sign flips at rho = 1 where s = 1 - rho).
  cplx derivative_rho(double s) const;
  /// sum_k c_k s^k; lets callers handle the s^index factor in log form.
  cplx regular_part(double s) const;
  cplx regular_part_derivative(double s) const;
  /// Largest |Im c_k|; zero for expansions of real problems at real indices.
  double imaginary_defect() const;
};

SingularPointData indicial_roots(const LocalEquation& eq);

/// Frobenius recursion c_m F(r+m) = -sum_{k=1}^m c_{m-k} [(r+m-k) A_k + B_k].
/// Throws InvalidArgument when `index` is not an indicial root, and
/// UnsupportedBranch when the recursion hits F(r+m) = 0 (the branch would need
/// a logarithm).
FrobeniusExpansion series_solution(const LocalEquation& eq, cplx index, int order);

}  // namespace wavemap::frobenius
