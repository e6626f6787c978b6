#include "wavemap/schrodinger.hpp"

#include "wavemap/error.hpp"

#include <cmath>

namespace wavemap {

namespace {

// 1/sinh^2(x) - 1/x^2
double csch2_minus_inv2(double x) {
  if (x < 0.05) {
    const double x2 = x * x;
    return -1.0 / 3.0 + x2 * (1.0 / 15.0 + x2 * (-2.0 / 189.0 + x2 / 675.0));
  }
  const double s = std::sinh(x);
  return 1.0 / (s * s) - 1.0 / (x * x);
}

}  // namespace

SchrodingerPotential schrodinger_transform(const SLProblem& prob) {
  const Profile* p = prob.source_profile();
  if (!p) throw InvalidArgument("schrodinger_transform: needs a problem built from a profile");
  SchrodingerPotential out;
  out.ell_ = prob.ell();
  out.profile_ = std::make_shared<const Profile>(*p);
  return out;
}

double SchrodingerPotential::centrifugal(double x) const {
  if (!(x > 0.0)) throw InvalidArgument("schrodinger potential: x must be positive");
  return ell_ * (ell_ + 1.0) / (x * x);
}

double SchrodingerPotential::Q(double x) const {
  if (!(x > 0.0)) throw InvalidArgument("schrodinger potential: x must be positive");
  const double L = ell_ * (ell_ + 1.0);
  if (x > 300.0) return -L / (x * x);
  const double f = profile_->evaluate(std::tanh(x));
  const double sf = std::sin(f);
  const double s = std::sinh(x);
  // cos(2f) = 1 - 2 sin^2 f separates the 1/x^2 singularity
  return L * (csch2_minus_inv2(x) - 2.0 * sf * sf / (s * s));
}

double SchrodingerPotential::V(double x) const { return centrifugal(x) + Q(x); }

double liouville_transform(const std::function<double(double)>& u, double x) {
  if (!(x >= 0.0)) throw InvalidArgument("liouville_transform: x must be nonnegative");
  return std::sinh(x) * u(std::tanh(x));
}

}  // namespace wavemap
