#include "wavemap/hyp_infty.hpp"

#include "pruefer.hpp"
#include "wavemap/error.hpp"
#include "wavemap/gamma.hpp"

#include <lapacke.h>

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wavemap {

using cd = std::complex<double>;
using frobenius::Endpoint;

namespace {

const double sqrt7 = std::sqrt(7.0);

cd log_m(cd a, cd b, cd c) {
  return log_gamma_complex(a + 1.0 - c) + log_gamma_complex(b + 1.0 - c) + log_gamma_complex(c - 1.0) -
         log_gamma_complex(a) - log_gamma_complex(b) - log_gamma_complex(1.0 - c);
}

double phase_of(double mu) {
  const cd a(0.25 * (1.0 + 2.0 * mu), 0.25 * sqrt7), b(0.25 * (3.0 + 2.0 * mu), 0.25 * sqrt7), c(1.0, 0.5 * sqrt7);
  return log_m(a, b, c).imag();
}

template <class F>
double toms748(F&& f, double lo, double hi, double flo, double fhi, double rel) {
  boost::uintmax_t iters = 200;
  auto tol = [rel](double x, double y) { return std::abs(x - y) <= rel * std::max(std::abs(x), std::abs(y)); };
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (r.first + r.second);
}

// C-infinity step 0 -> 1 on [0, 1] and its derivative
void smooth_step(double x, double& s, double& ds) {
  if (x <= 0.0) {
    s = 0.0;
    ds = 0.0;
    return;
  }
  if (x >= 1.0) {
    s = 1.0;
    ds = 0.0;
    return;
  }
  const double h0 = std::exp(-1.0 / x), h1 = std::exp(-1.0 / (1.0 - x));
  const double dh0 = h0 / (x * x), dh1 = -h1 / ((1.0 - x) * (1.0 - x));
  const double d = h0 + h1;
  s = h0 / d;
  ds = (dh0 * h1 - h0 * dh1) / (d * d);
}

EigenvalueRecord infty_record(double mu, int j, double residual) {
  EigenvalueRecord r;
  r.mu = mu;
  r.lambda = -mu * mu;
  r.n = -1;
  r.ell = 1;
  r.j = j;
  r.wronskian_residual = residual;
  return r;
}

}  // namespace

ConnectionData m_coefficient(double lambda) {
  if (!(lambda <= 0.0)) throw InvalidArgument("m_coefficient: lambda must be <= 0");
  ConnectionData d;
  d.lambda = lambda;
  d.mu = std::sqrt(-lambda);
  d.a = cd(0.25 * (1.0 + 2.0 * d.mu), 0.25 * sqrt7);
  d.b = cd(0.25 * (3.0 + 2.0 * d.mu), 0.25 * sqrt7);
  d.c = cd(1.0, 0.5 * sqrt7);
  d.alpha = -0.25 * cd(-1.0, sqrt7);
  d.beta = -0.5 * (1.0 + d.mu);
  const cd lm = log_m(d.a, d.b, d.c);
  d.m = std::exp(lm);
  d.phase = lm.imag();
  d.modulus_defect = std::abs(std::abs(d.m) - 1.0);
  return d;
}

InftySpectrum infty_eigenvalues(int count, const InftyOptions& o) {
  if (count < 1) throw InvalidArgument("infty_eigenvalues: count must be >= 1");
  if (!(o.log_step > 0.0 && o.log_step <= 0.02)) throw InvalidArgument("infty_eigenvalues: log_step must lie in (0, 0.02]");
  if (!(o.mu_floor > 0.0 && o.mu_ceiling > o.mu_floor)) throw InvalidArgument("infty_eigenvalues: bad mu range");
  const double ph0 = phase_of(0.0);
  const cd m0 = m_coefficient(0.0).m;
  auto g = [&](double mu) { return phase_of(mu) - ph0; };

  InftySpectrum out;
  const int steps = static_cast<int>(std::ceil(std::log(o.mu_ceiling / o.mu_floor) / o.log_step));
  double mu_prev = o.mu_floor, g_prev = g(mu_prev);
  for (int i = 1; i <= steps && static_cast<int>(out.records.size()) < count; ++i) {
    const double mu = std::min(o.mu_ceiling, o.mu_floor * std::exp(i * o.log_step));
    const double gv = g(mu);
    if (std::abs(gv - g_prev) > std::numbers::pi) {
      throw MeshTooCoarse("infty_eigenvalues: phase jumps by more than pi between grid points", mu);
    }
    // nonzero multiples of 2 pi crossed in (mu_prev, mu]
    const double two_pi = 2.0 * std::numbers::pi;
    long k0 = std::lround(std::floor(g_prev / two_pi)), k1 = std::lround(std::floor(gv / two_pi));
    for (long k = std::min(k0, k1) + 1; k <= std::max(k0, k1); ++k) {
      if (k == 0) continue;
      const double target = two_pi * static_cast<double>(k);
      auto h = [&](double x) { return g(x) - target; };
      const double root = toms748(h, mu_prev, mu, g_prev - target, gv - target, o.root_tol);
      const cd mr = m_coefficient(-root * root).m;
      out.records.push_back(infty_record(root, static_cast<int>(out.records.size()) + 1, std::abs(mr - m0)));
      if (static_cast<int>(out.records.size()) == count) break;
    }
    mu_prev = mu;
    g_prev = gv;
  }
  out.truncated = static_cast<int>(out.records.size()) < count;
  return out;
}

// ---------------------------------------------------------------------------
// Boundary function

void BoundaryFunction::tilde(double rho, double& u, double& P) const {
  if (rho < lower_limit() || rho > 1.0) throw InvalidArgument("boundary function: rho outside the integrated range");
  double y[2];
  sol_->evaluate(std::min(rho, sol_->t_begin()), y);
  u = y[0];
  P = y[1];
}

double BoundaryFunction::lower_limit() const { return sol_->t_end(); }

double BoundaryFunction::chi(double rho) const {
  if (rho >= hi_) return 0.0;
  double u, P, s, ds;
  tilde(rho, u, P);
  smooth_step((rho - lo_) / (hi_ - lo_), s, ds);
  return scale_ * (1.0 - s) * u;
}

double BoundaryFunction::flux(double rho) const {
  if (rho >= hi_) return 0.0;
  double u, P, s, ds;
  tilde(rho, u, P);
  smooth_step((rho - lo_) / (hi_ - lo_), s, ds);
  return scale_ * ((1.0 - s) * P - rho * rho * ds / (hi_ - lo_) * u);
}

double BoundaryFunction::derivative(double rho) const { return flux(rho) / (rho * rho); }

BoundaryFunction BoundaryFunction::scaled(double factor) const {
  BoundaryFunction b = *this;
  b.scale_ *= factor;
  return b;
}

BoundaryFunction chi_boundary_function(double rho_a, double rho_b) {
  if (!(rho_a > 0.5 && rho_a < rho_b && rho_b < 1.0)) {
    throw InvalidArgument("chi_boundary_function: cutoff interval must satisfy 1/2 < rho_a < rho_b < 1");
  }
  static const std::shared_ptr<const odeint::DenseSolution> tilde_sol = [] {
    const SLProblem prob = SLProblem::infinity();
    const int order = 10;
    const double t = 1e-6;
    const auto eq = prob.local_equation(Endpoint::one, 0.0, order);
    const auto ser = frobenius::series_solution(eq, 0.5, order);
    const double rho = 1.0 - t;
    const double u = ser.value(t).real();
    const double P = rho * rho * ser.derivative_rho(t).real();
    odeint::IVPSpec spec;
    spec.rhs = [prob](double r, std::span<const double> y, std::span<double> dy) {
      dy[0] = y[1] / (r * r);
      dy[1] = prob.q(r) * y[0];
    };
    spec.t0 = rho;
    spec.t1 = 1e-9;
    spec.initial_state = {u, P};
    spec.rel_tol = 1e-13;
    spec.abs_tol = 1e-16;
    return std::make_shared<const odeint::DenseSolution>(odeint::integrate(spec));
  }();
  BoundaryFunction b;
  b.sol_ = tilde_sol;
  b.lo_ = rho_a;
  b.hi_ = rho_b;
  return b;
}

// ---------------------------------------------------------------------------
// Direct shooting

BracketLimit bracket_at_zero(const BoundaryFunction& chi, double mu, const DirectOptions& o) {
  if (!(mu > 0.0)) throw InvalidArgument("bracket_at_zero: mu must be positive");
  if (o.window_samples < 8) throw InvalidArgument("bracket_at_zero: need at least 8 window samples");
  const SLProblem prob = SLProblem::infinity();
  const double hi = std::min(o.window_hi, o.window_scale / mu), lo = hi / o.window_ratio;
  if (lo < chi.lower_limit()) throw InvalidArgument("bracket_at_zero: window below the range of chi");

  const double off = detail::right_start_offset(o.eps, mu);
  const auto st = detail::right_start(prob, mu, off, o.series_order);
  const auto sol = detail::integrate_pruefer(prob, mu, st, lo, o.rel_tol, o.abs_tol, true);
  const double log_r_top = sol.evaluate(hi, 1);

  const int K = o.window_samples;
  std::vector<double> A(static_cast<std::size_t>(K) * 4), y(static_cast<std::size_t>(K));
  double scale = 0.0;
  for (int k = 0; k < K; ++k) {
    const double r = lo * std::pow(hi / lo, static_cast<double>(k) / (K - 1));
    double s[2];
    sol.evaluate(r, s);
    const double amp = std::exp(s[1] - log_r_top);
    const double u = amp * std::sin(s[0]), pu = amp * std::cos(s[0]), c = chi.chi(r), pc = chi.flux(r);
    const double br = lagrange_bracket(u, pu, c, pc);
    const double x = (r / hi) * (r / hi), ph = sqrt7 * std::log(r);
    A[4 * k + 0] = 1.0;
    A[4 * k + 1] = x;
    A[4 * k + 2] = x * std::cos(ph);
    A[4 * k + 3] = x * std::sin(ph);
    y[k] = br;
    scale = std::max({scale, std::abs(u * pc), std::abs(pu * c)});
  }
  const std::vector<double> y0 = y, A0 = A;
  const lapack_int info = LAPACKE_dgels(LAPACK_ROW_MAJOR, 'N', K, 4, 1, A.data(), 4, y.data(), 1);
  if (info != 0) throw InvalidArgument("bracket_at_zero: least-squares fit failed");
  double ss = 0.0;
  for (int k = 0; k < K; ++k) {
    double f = 0.0;
    for (int j = 0; j < 4; ++j) f += A0[4 * k + j] * y[j];
    ss += (f - y0[k]) * (f - y0[k]);
  }
  BracketLimit out;
  out.value = y[0];
  out.misfit = scale > 0.0 ? std::sqrt(ss / K) / scale : 0.0;
  out.converged = out.misfit <= o.max_misfit;
  return out;
}

InftySpectrum infty_eigenvalues_direct(int count, const BoundaryFunction& chi, const DirectOptions& o) {
  if (count < 1) throw InvalidArgument("infty_eigenvalues_direct: count must be >= 1");
  if (!(o.grid_ratio > 1.0 && o.mu_min > 0.0 && o.mu_max > o.mu_min)) {
    throw InvalidArgument("infty_eigenvalues_direct: bad scan grid");
  }
  auto f = [&](double mu) { return bracket_at_zero(chi, mu, o).value; };
  InftySpectrum out;
  double mu_prev = o.mu_min, f_prev = f(mu_prev);
  while (mu_prev < o.mu_max && static_cast<int>(out.records.size()) < count) {
    const double mu = std::min(o.mu_max, mu_prev * o.grid_ratio);
    const double fv = f(mu);
    if ((f_prev < 0.0) != (fv < 0.0)) {
      const double root = toms748(f, mu_prev, mu, f_prev, fv, o.root_tol);
      const auto lim = bracket_at_zero(chi, root, o);
      if (lim.converged) {
        out.records.push_back(infty_record(root, static_cast<int>(out.records.size()) + 1, std::abs(lim.value)));
      }
    }
    mu_prev = mu;
    f_prev = fv;
  }
  out.truncated = static_cast<int>(out.records.size()) < count;
  return out;
}

}  // namespace wavemap
