#pragma once

// Liouville form of a_{n,l}: with x = atanh(rho) and v(x) = sinh(x) u(tanh x),
//   a u = lambda u   <=>   -v'' + V v = lambda v   on (0, inf),
//   V(x) = l(l+1) cos(2 f(tanh x)) / sinh^2(x) = l(l+1)/x^2 + Q(x).
// The map u -> v is an isometry from H onto L^2(0, inf).

#include "wavemap/slp.hpp"

#include <functional>

namespace wavemap {

class SchrodingerPotential {
 public:
  int ell() const noexcept { return ell_; }
  /// Bounded remainder Q = V - l(l+1)/x^2; finite limit at x = 0.
  double Q(double x) const;
  double centrifugal(double x) const;
  double V(double x) const;

 private:
  friend SchrodingerPotential schrodinger_transform(const SLProblem& prob);

  int ell_ = 1;
  std::shared_ptr<const Profile> profile_;
};

/// Requires a problem built from a profile.
SchrodingerPotential schrodinger_transform(const SLProblem& prob);

/// v(x) = sinh(x) u(tanh x).
double liouville_transform(const std::function<double(double)>& u, double x);

}  // namespace wavemap
