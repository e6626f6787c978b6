#include "wavemap/evolution.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

namespace wavemap {

// ---------------------------------------------------------------------------
// Discrete operator

DiscreteOperator DiscreteOperator::build(const SLProblem& prob, int grid_size, double delta) {
  if (grid_size < 128) throw InvalidArgument("evolution: grid_size must be >= 128");
  if (!(delta > 0.0 && delta < 0.1)) throw InvalidArgument("evolution: delta must lie in (0, 0.1)");
  const int N = grid_size;
  const double X = std::atanh(1.0 - delta);
  double target = X / N;
  if (const Profile* p = prob.source_profile()) {
    target = std::min(target, 0.05 * std::pow(std::max(p->b(), 1.0), -1.0 / p->ell()));
  }
  const double kappa = std::clamp(1.0 - target * N / X, 0.0, 0.9);

  DiscreteOperator op;
  op.delta_ = delta;
  op.x_.resize(N + 1);
  op.rho_.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double s = static_cast<double>(i) / N;
    op.x_[i] = X * ((1.0 - kappa) * s + kappa * s * s);
    op.rho_[i] = std::tanh(op.x_[i]);
  }
  op.x_[N] = X;
  std::vector<double> h(N);
  for (int i = 0; i < N; ++i) h[i] = op.x_[i + 1] - op.x_[i];
  op.h_min_ = *std::min_element(h.begin(), h.end());

  const double L = prob.ell() * (prob.ell() + 1.0);
  op.mass_.resize(N);
  op.diag_.resize(N);
  op.off_.resize(N - 1);
  for (int i = 1; i <= N; ++i) {
    const double m = i < N ? 0.5 * (h[i - 1] + h[i]) : 0.5 * h[N - 1];
    const double sh = std::sinh(op.x_[i]);
    const double V = L * prob.cos2f(op.rho_[i]) / (sh * sh);
    op.mass_[i - 1] = m;
    op.diag_[i - 1] = 1.0 / h[i - 1] + (i < N ? 1.0 / h[i] : 0.0) + V * m;
    if (i < N) op.off_[i - 1] = -1.0 / h[i];
  }
  return op;
}

void DiscreteOperator::stiffness(std::span<const double> v, std::span<double> out) const {
  const std::size_t n = mass_.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag_[i] * v[i];
    if (i > 0) s += off_[i - 1] * v[i - 1];
    if (i + 1 < n) s += off_[i] * v[i + 1];
    out[i] = s;
  }
}

void DiscreteOperator::apply(std::span<const double> v, std::span<double> out) const {
  stiffness(v, out);
  for (std::size_t i = 0; i < mass_.size(); ++i) out[i] /= mass_[i];
}

double DiscreteOperator::quadratic_form(std::span<const double> v) const {
  std::vector<double> k(v.size());
  stiffness(v, k);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * k[i];
  return s;
}

double DiscreteOperator::mass_product(std::span<const double> v, std::span<const double> w) const {
  double s = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) s += mass_[i] * v[i] * w[i];
  return s;
}

double DiscreteOperator::spectral_bound() const {
  double g = 0.0;
  const std::size_t n = mass_.size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = std::abs(diag_[i]);
    if (i > 0) r += std::abs(off_[i - 1]);
    if (i + 1 < n) r += std::abs(off_[i]);
    g = std::max(g, r / mass_[i]);
  }
  return g;
}

double DiscreteOperator::stable_step() const { return std::min(0.5 * h_min_, 2.0 / std::sqrt(spectral_bound())); }

std::vector<double> DiscreteOperator::sample(const std::function<double(double)>& u) const {
  std::vector<double> v(mass_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sinh(x_[i + 1]) * u(rho_[i + 1]);
  return v;
}

std::vector<double> DiscreteOperator::to_rho(std::span<const double> v) const {
  std::vector<double> u(x_.size(), 0.0);
  for (std::size_t i = 1; i < x_.size(); ++i) u[i] = v[i - 1] / std::sinh(x_[i]);
  return u;
}

// ---------------------------------------------------------------------------
// Seeds

ModeSeed ModeSeed::zero() {
  ModeSeed s;
  s.kind = Kind::zero;
  s.amplitude = 0.0;
  s.u0 = [](double) { return 0.0; };
  s.u1 = [](double) { return 0.0; };
  return s;
}

ModeSeed ModeSeed::eigenmode(const SLProblem& prob, int j, bool growing, double amplitude, const ShootingOptions& opts) {
  if (j < 1) throw InvalidArgument("eigenmode seed: j must be >= 1");
  const auto n = prob.n();
  if (!n) throw InvalidArgument("eigenmode seed: needs a problem built from a profile");
  const auto eig = eigenvalues_shooting(prob, 2e4, opts);
  if (j > static_cast<int>(eig.size())) {
    throw InvalidArgument("eigenmode seed: the problem has only " + std::to_string(eig.size()) + " negative eigenvalues");
  }
  const auto& rec = eig[static_cast<std::size_t>(j - 1)];
  auto ef = rec.eigenfunction ? rec.eigenfunction : eigenfunction(prob, rec.mu, opts);
  ModeSeed s;
  s.kind = Kind::eigenmode;
  s.j = j;
  s.mu = rec.mu;
  s.amplitude = amplitude;
  const double rate = growing ? rec.mu : -rec.mu;
  s.u0 = [ef, amplitude](double r) { return r <= 0.0 ? 0.0 : amplitude * ef->value(r); };
  s.u1 = [ef, amplitude, rate](double r) { return r <= 0.0 ? 0.0 : rate * amplitude * ef->value(r); };
  return s;
}

ModeSeed ModeSeed::gauge(const SLProblem& prob, double amplitude) {
  const Profile* p = prob.source_profile();
  if (!p) throw InvalidArgument("gauge seed: needs a problem built from a profile");
  auto prof = std::make_shared<const Profile>(*p);
  ModeSeed s;
  s.kind = Kind::gauge;
  s.amplitude = amplitude;
  s.u0 = [prof, amplitude](double r) { return r <= 0.0 ? 0.0 : amplitude * gauge_mode(*prof, r)[0]; };
  s.u1 = [](double) { return 0.0; };
  return s;
}

ModeSeed ModeSeed::custom(std::function<double(double)> u0, std::function<double(double)> u1, double amplitude) {
  ModeSeed s;
  s.kind = Kind::custom;
  s.amplitude = amplitude;
  s.u0 = [u0 = std::move(u0), amplitude](double r) { return amplitude * u0(r); };
  s.u1 = [u1 = std::move(u1), amplitude](double r) { return amplitude * u1(r); };
  return s;
}

ModeSeed ModeSeed::random_smooth(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  struct Bump {
    double lo, hi, a;
  };
  auto draw = [&] {
    std::vector<Bump> bs(3);
    for (auto& b : bs) {
      b.lo = 0.05 + 0.6 * U(rng);
      b.hi = b.lo + 0.1 + (0.9 - b.lo - 0.1) * U(rng);
      b.a = 2.0 * U(rng) - 1.0;
    }
    return [bs](double r) {
      double s = 0.0;
      for (const auto& b : bs) {
        const double t = (2.0 * r - b.lo - b.hi) / (b.hi - b.lo);
        if (std::abs(t) < 1.0) s += b.a * std::exp(-1.0 / (1.0 - t * t));
      }
      return s;
    };
  };
  return custom(draw(), draw());
}

// ---------------------------------------------------------------------------
// Evolution

namespace {

EvolutionState make_state(const DiscreteOperator& op, double sigma, std::span<const double> v,
                          std::span<const double> vs) {
  EvolutionState st;
  st.sigma = sigma;
  st.grid.assign(op.rho().begin(), op.rho().end());
  st.u = op.to_rho(v);
  st.v = op.to_rho(vs);
  st.energy = op.quadratic_form(v) + op.mass_product(vs, vs);
  st.h_norm = std::sqrt(op.mass_product(v, v));
  return st;
}

bool all_finite(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::vector<EvolutionState> evolve(const DiscreteOperator& op, const ModeSeed& seed, double sigma_max,
                                   const EvolutionOptions& o) {
  if (!(sigma_max > 0.0)) throw InvalidArgument("evolve: sigma_max must be positive");
  if (!(o.output_interval > 0.0)) throw InvalidArgument("evolve: output_interval must be positive");
  const std::size_t n = static_cast<std::size_t>(op.size());
  std::vector<double> q = op.sample(seed.u0), p = op.sample(seed.u1);
  if (!all_finite(q) || !all_finite(p)) throw InvalidArgument("evolve: seed has non-finite samples");

  double dt = op.stable_step();
  if (o.max_step > 0.0) dt = std::min(dt, o.max_step);
  const double interval = o.output_interval;
  // whole steps per output interval
  const long per_out = std::max(1L, static_cast<long>(std::ceil(interval / dt)));
  dt = interval / static_cast<double>(per_out);

  std::vector<EvolutionState> out;
  out.push_back(make_state(op, 0.0, q, p));
  std::vector<double> k1q(n), k1p(n), k2q(n), k2p(n), k3q(n), k3p(n), k4q(n), k4p(n), tq(n), tp(n);
  auto rhs = [&](const std::vector<double>& qq, const std::vector<double>& pp, std::vector<double>& dq,
                 std::vector<double>& dp) {
    dq = pp;
    op.apply(qq, dp);
    for (auto& x : dp) x = -x;
  };

  double sigma = 0.0;
  long step = 0;
  while (sigma < sigma_max * (1.0 - 1e-14)) {
    const double h = std::min(dt, sigma_max - sigma);
    rhs(q, p, k1q, k1p);
    for (std::size_t i = 0; i < n; ++i) tq[i] = q[i] + 0.5 * h * k1q[i], tp[i] = p[i] + 0.5 * h * k1p[i];
    rhs(tq, tp, k2q, k2p);
    for (std::size_t i = 0; i < n; ++i) tq[i] = q[i] + 0.5 * h * k2q[i], tp[i] = p[i] + 0.5 * h * k2p[i];
    rhs(tq, tp, k3q, k3p);
    for (std::size_t i = 0; i < n; ++i) tq[i] = q[i] + h * k3q[i], tp[i] = p[i] + h * k3p[i];
    rhs(tq, tp, k4q, k4p);
    for (std::size_t i = 0; i < n; ++i) {
      tq[i] = q[i] + h / 6.0 * (k1q[i] + 2.0 * k2q[i] + 2.0 * k3q[i] + k4q[i]);
      tp[i] = p[i] + h / 6.0 * (k1p[i] + 2.0 * k2p[i] + 2.0 * k3p[i] + k4p[i]);
    }
    if (!all_finite(tq) || !all_finite(tp)) {
      throw EvolutionAborted("evolve: non-finite values at sigma = " + std::to_string(sigma + h),
                             make_state(op, sigma, q, p));
    }
    q.swap(tq);
    p.swap(tp);
    sigma += h;
    ++step;
    if (step % per_out == 0 || sigma >= sigma_max * (1.0 - 1e-14)) out.push_back(make_state(op, sigma, q, p));
  }
  return out;
}

std::vector<EvolutionState> evolve(const SLProblem& prob, const ModeSeed& seed, double sigma_max, int grid_size,
                                   const EvolutionOptions& o) {
  return evolve(DiscreteOperator::build(prob, grid_size, o.delta), seed, sigma_max, o);
}

double growth_rate(std::span<const EvolutionState> traj, double lo, double hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int k = 0;
  for (const auto& s : traj) {
    if (s.sigma < lo || s.sigma > hi) continue;
    if (!(s.h_norm > 0.0)) throw InvalidArgument("growth_rate: vanishing norm in the window");
    const double y = std::log(s.h_norm);
    sx += s.sigma;
    sy += y;
    sxx += s.sigma * s.sigma;
    sxy += s.sigma * y;
    ++k;
  }
  if (k < 3) throw InvalidArgument("growth_rate: window holds fewer than 3 states");
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// Spectral propagator

namespace {

struct Eigen {
  std::vector<double> values;
  std::vector<double> vectors;  // column-major n x n
};

// M^{-1/2} K M^{-1/2} as diagonal and off-diagonal
void scaled_tridiagonal(const DiscreteOperator& op, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = static_cast<std::size_t>(op.size());
  const auto m = op.mass();
  d.resize(n);
  e.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) d[i] = op.diagonal()[i] / m[i];
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = op.off_diagonal()[i] / std::sqrt(m[i] * m[i + 1]);
}

Eigen decompose(const DiscreteOperator& op) {
  const lapack_int n = op.size();
  std::vector<double> d, e;
  scaled_tridiagonal(op, d, e);
  Eigen out;
  out.vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
  const lapack_int info = LAPACKE_dstevd(LAPACK_COL_MAJOR, 'V', n, d.data(), e.data(), out.vectors.data(), n);
  if (info != 0) throw InvalidArgument("propagate_spectral: eigendecomposition failed");
  out.values = std::move(d);
  return out;
}

// symmetry of M^{-1} K in the mass inner product on a pair of probe vectors
void check_symmetry(const DiscreteOperator& op) {
  const std::size_t n = static_cast<std::size_t>(op.size());
  std::vector<double> a(n), b(n), Aa(n), Ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = std::sin(0.37 * static_cast<double>(i) + 0.1);
    b[i] = std::cos(1.13 * static_cast<double>(i) * static_cast<double>(i) + 0.3);
  }
  op.apply(a, Aa);
  op.apply(b, Ab);
  const double l = op.mass_product(Aa, b), r = op.mass_product(a, Ab);
  const double defect = std::abs(l - r) / std::max({std::abs(l), std::abs(r), 1e-300});
  if (defect > 1e-10) throw NotSymmetric("propagate_spectral: discrete operator is not symmetric", defect);
}

}  // namespace

std::vector<double> discrete_spectrum(const DiscreteOperator& op) {
  std::vector<double> d, e;
  scaled_tridiagonal(op, d, e);
  const lapack_int info = LAPACKE_dsterf(op.size(), d.data(), e.data());
  if (info != 0) throw InvalidArgument("discrete_spectrum: eigenvalue computation failed");
  return d;
}

EvolutionState propagate_spectral(const DiscreteOperator& op, const ModeSeed& seed, double sigma) {
  if (!(sigma >= 0.0)) throw InvalidArgument("propagate_spectral: sigma must be nonnegative");
  const std::vector<double> q0 = op.sample(seed.u0), p0 = op.sample(seed.u1);
  if (sigma == 0.0) return make_state(op, 0.0, q0, p0);
  check_symmetry(op);
  const std::size_t n = static_cast<std::size_t>(op.size());
  const auto eig = decompose(op);
  const auto m = op.mass();
  std::vector<double> sq(n), sp(n);
  for (std::size_t i = 0; i < n; ++i) {
    sq[i] = std::sqrt(m[i]) * q0[i];
    sp[i] = std::sqrt(m[i]) * p0[i];
  }
  std::vector<double> wq(n, 0.0), wp(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double* col = eig.vectors.data() + k * n;
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      a += col[i] * sq[i];
      b += col[i] * sp[i];
    }
    const double lam = eig.values[k];
    double c, g, dc, dg;  // u = c a + g b, u_s = dc a + dg b
    if (lam > 0.0) {
      const double w = std::sqrt(lam);
      c = std::cos(sigma * w);
      g = std::sin(sigma * w) / w;
      dc = -w * std::sin(sigma * w);
      dg = std::cos(sigma * w);
    } else if (lam < 0.0) {
      const double w = std::sqrt(-lam);
      c = std::cosh(sigma * w);
      g = std::sinh(sigma * w) / w;
      dc = w * std::sinh(sigma * w);
      dg = std::cosh(sigma * w);
    } else {
      c = 1.0;
      g = sigma;
      dc = 0.0;
      dg = 1.0;
    }
    const double uq = c * a + g * b, up = dc * a + dg * b;
    for (std::size_t i = 0; i < n; ++i) {
      wq[i] += uq * col[i];
      wp[i] += up * col[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    wq[i] /= std::sqrt(m[i]);
    wp[i] /= std::sqrt(m[i]);
  }
  return make_state(op, sigma, wq, wp);
}

EvolutionState propagate_spectral(const SLProblem& prob, const ModeSeed& seed, double sigma, int grid_size,
                                  double delta) {
  return propagate_spectral(DiscreteOperator::build(prob, grid_size, delta), seed, sigma);
}

}  // namespace wavemap
