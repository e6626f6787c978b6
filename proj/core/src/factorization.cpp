#include "wavemap/factorization.hpp"

#include "wavemap/error.hpp"
#include "wavemap/profiles.hpp"
#include "wavemap/slp.hpp"

#include <algorithm>
#include <cmath>

namespace wavemap {

namespace {

constexpr double gl_x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                            0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double gl_w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                            0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

double g_of(double r) { return (1.0 - 3.0 * r * r) / (r * (1.0 + r * r)); }
double dg_of(double r) {
  const double q = 1.0 + r * r;
  return (3.0 * r * r * r * r - 6.0 * r * r - 1.0) / (r * r * q * q);
}
double gh_of(double r) { return (3.0 - r * r) / (r * (1.0 + r * r)); }

}  // namespace

TestFunction bump(double lo, double hi, double amplitude) {
  if (!(lo < hi)) throw InvalidArgument("bump: empty support");
  const double k = 2.0 / (hi - lo), mid = 0.5 * (lo + hi);
  TestFunction t;
  t.support_lo = lo;
  t.support_hi = hi;
  auto phi = [=](double r, int d) {
    const double s = (r - mid) * k;
    if (std::abs(s) >= 1.0) return 0.0;
    const double one = 1.0 - s * s;
    const double e = amplitude * std::exp(-1.0 / one);
    if (d == 0) return e;
    if (d == 1) return e * (-2.0 * s / (one * one)) * k;
    return e * (6.0 * s * s * s * s - 2.0) / (one * one * one * one) * k * k;
  };
  t.u = [phi](double r) { return phi(r, 0); };
  t.du = [phi](double r) { return phi(r, 1); };
  t.d2u = [phi](double r) { return phi(r, 2); };
  return t;
}

TestFunction multiply(const TestFunction& t, std::function<double(double)> g, std::function<double(double)> dg,
                      std::function<double(double)> d2g) {
  TestFunction out;
  out.support_lo = t.support_lo;
  out.support_hi = t.support_hi;
  out.u = [t, g](double r) { return t.u(r) * g(r); };
  out.du = [t, g, dg](double r) { return t.du(r) * g(r) + t.u(r) * dg(r); };
  out.d2u = [t, g, dg, d2g](double r) { return t.d2u(r) * g(r) + 2.0 * t.du(r) * dg(r) + t.u(r) * d2g(r); };
  return out;
}

TestFunction random_bump(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double lo = 0.02 + 0.78 * U(rng);
  const double hi = lo + 0.05 + (0.98 - lo - 0.05) * U(rng);
  const double amp = (U(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 1.5 * U(rng));
  const double alpha = 0.8 * U(rng), omega = 20.0 * U(rng), phase = 6.283185307179586 * U(rng);
  return multiply(
      bump(lo, hi, amp), [=](double r) { return 1.0 + alpha * std::cos(omega * r + phase); },
      [=](double r) { return -alpha * omega * std::sin(omega * r + phase); },
      [=](double r) { return -alpha * omega * omega * std::cos(omega * r + phase); });
}

FactorizationReport factorization_check(const TestFunction& u, const TestFunction& v, int panels) {
  for (const auto* t : {&u, &v}) {
    if (!(t->support_lo > 0.0 && t->support_hi < 1.0 && t->support_lo < t->support_hi)) {
      throw InvalidArgument("factorization_check: test functions must be compactly supported in (0, 1)");
    }
  }
  if (panels < 1) throw InvalidArgument("factorization_check: panels must be positive");
  static const SLProblem prob = SLProblem::from_profile(profile_closed_form_f0());

  auto Bu = [](const TestFunction& f, double r) { return (1.0 - r * r) * f.du(r) - g_of(r) * f.u(r); };
  auto dBu = [](const TestFunction& f, double r) {
    return -2.0 * r * f.du(r) + (1.0 - r * r) * f.d2u(r) - dg_of(r) * f.u(r) - g_of(r) * f.du(r);
  };

  FactorizationReport rep;
  double res2 = 0.0, a2 = 0.0;
  const double lo = std::min(u.support_lo, v.support_lo), hi = std::max(u.support_hi, v.support_hi);
  const double h = (hi - lo) / panels;
  for (int i = 0; i < panels; ++i) {
    const double c = lo + (i + 0.5) * h;
    for (int k = 0; k < 8; ++k) {
      const double r = c + 0.5 * h * gl_x[k];
      const double wq = gl_w[k] * 0.5 * h * prob.w(r);
      const double uu = u.u(r);
      const double au = apply_operator(prob, r, uu, u.du(r), u.d2u(r));
      const double bu = Bu(u, r);
      const double bbu = -(1.0 - r * r) * dBu(u, r) - gh_of(r) * bu;
      const double bhv = -(1.0 - r * r) * v.du(r) - gh_of(r) * v.u(r);
      res2 += wq * (au - bbu) * (au - bbu);
      a2 += wq * au * au;
      rep.quadratic_form += wq * au * uu;
      rep.b_norm_squared += wq * bu * bu;
      rep.norm_squared += wq * uu * uu;
      rep.adjointness_defect += wq * (bu * v.u(r) - uu * bhv);
    }
  }
  rep.adjointness_defect = std::abs(rep.adjointness_defect);
  rep.relative_residual = a2 > 0.0 ? std::sqrt(res2 / a2) : std::sqrt(res2);
  return rep;
}

}  // namespace wavemap
