#include "wavemap/slp.hpp"

#include "pruefer.hpp"
#include "wavemap/error.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace wavemap {

using frobenius::Endpoint;
using series::Series;

namespace {

constexpr double pi = std::numbers::pi;

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr double gl_x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                            0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double gl_w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                            0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss_legendre(double a, double b, F&& f) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 8; ++i) s += gl_w[i] * f(c + h * gl_x[i]);
  return s * h;
}

Series<double> padded(Series<double> s, int order) {
  s.resize(static_cast<std::size_t>(order) + 1, 0.0);
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// SLProblem

SLProblem SLProblem::from_profile(const Profile& profile) {
  SLProblem p;
  p.ell_ = profile.ell();
  p.profile_ = std::make_shared<const Profile>(profile);
  return p;
}

SLProblem SLProblem::infinity() {
  SLProblem p;
  p.ell_ = 1;
  return p;
}

std::optional<int> SLProblem::n() const {
  if (!profile_) return std::nullopt;
  return profile_->n();
}

std::array<EndpointClass, 2> SLProblem::endpoint_class() const noexcept {
  if (!profile_) return {EndpointClass::limit_circle, EndpointClass::limit_point};
  return {EndpointClass::limit_point, EndpointClass::limit_point};
}

double SLProblem::cos2f(double rho) const {
  if (!profile_) return -1.0;
  return std::cos(2.0 * profile_->evaluate(rho));
}

double SLProblem::w(double rho) const {
  const double om = (1.0 - rho) * (1.0 + rho);
  return rho * rho / (om * om);
}

double SLProblem::shifted_potential(double rho, double lambda) const {
  const double om = (1.0 - rho) * (1.0 + rho);
  const double ll = ell_ * (ell_ + 1.0);
  return (ll * om * cos2f(rho) - (1.0 + lambda) * rho * rho) / (om * om);
}

double SLProblem::q(double rho) const { return shifted_potential(rho, 0.0); }

Series<double> SLProblem::cos2f_series(Endpoint point, int order) const {
  Series<double> out(static_cast<std::size_t>(order) + 1, 0.0);
  if (!profile_) {
    out[0] = -1.0;
    return out;
  }
  if (point == Endpoint::zero) {
    auto s = padded(profile_->series_at_zero(order), order);
    for (auto& x : s) x *= 2.0;
    return series::sin_cos(std::span<const double>(s)).second;
  }
  auto g = padded(profile_->series_at_one(order), order);
  g[0] = 0.0;
  for (auto& x : g) x *= 2.0;
  auto c = series::sin_cos(std::span<const double>(g)).second;
  for (auto& x : c) x = -x;
  return c;
}

frobenius::LocalEquation SLProblem::local_equation(Endpoint point, double lambda, int order) const {
  if (order < 0) throw InvalidArgument("local_equation: negative order");
  const std::size_t len = static_cast<std::size_t>(order) + 1;
  const double ll = ell_ * (ell_ + 1.0);
  const auto C = cos2f_series(point, order);
  Series<double> A(len, 0.0), B;
  if (point == Endpoint::zero) {
    // rho^2 u'' + 2 rho u' - G u = 0
    A[0] = 2.0;
    Series<double> om(len, 0.0);
    om[0] = 1.0;
    if (len > 2) om[2] = -1.0;
    auto N = series::multiply(std::span<const double>(C), std::span<const double>(om));
    for (auto& x : N) x *= ll;
    if (len > 2) N[2] -= 1.0 + lambda;
    Series<double> inv(len, 0.0);
    for (std::size_t j = 0; 2 * j < len; ++j) inv[2 * j] = static_cast<double>(j + 1);
    B = series::multiply(std::span<const double>(N), std::span<const double>(inv));
  } else {
    // t = 1 - rho: t^2 u_tt - (2t/(1-t)) t u_t - t^2 G/(1-t)^2 u = 0
    for (std::size_t j = 1; j < len; ++j) A[j] = -2.0;
    Series<double> t2t(len, 0.0);
    if (len > 1) t2t[1] = 2.0;
    if (len > 2) t2t[2] = -1.0;
    auto N = series::multiply(std::span<const double>(C), std::span<const double>(t2t));
    for (auto& x : N) x *= ll;
    const double sq[3] = {1.0, -2.0, 1.0};
    for (std::size_t j = 0; j < std::min<std::size_t>(3, len); ++j) N[j] -= (1.0 + lambda) * sq[j];
    Series<double> a(len, 0.0), b(len, 0.0);
    const double two_minus_sq[3] = {4.0, -4.0, 1.0};
    for (std::size_t j = 0; j < std::min<std::size_t>(3, len); ++j) {
      a[j] = two_minus_sq[j];
      b[j] = sq[j];
    }
    const auto D = series::multiply(std::span<const double>(a), std::span<const double>(b));
    const auto Dinv = series::reciprocal(std::span<const double>(D));
    B = series::multiply(std::span<const double>(N), std::span<const double>(Dinv));
  }
  for (auto& x : B) x = -x;
  frobenius::LocalEquation eq;
  eq.point = point;
  eq.a = series::to_complex(std::span<const double>(A));
  eq.b = series::to_complex(std::span<const double>(B));
  return eq;
}

frobenius::SingularPointData SLProblem::indicial_roots(Endpoint point, double lambda) const {
  return frobenius::indicial_roots(local_equation(point, lambda, 0));
}

// ---------------------------------------------------------------------------
// Operator application

double apply_operator(const SLProblem& prob, double rho, double u, double du, double d2u) {
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("apply_operator: rho must lie in (0, 1)");
  return (-rho * rho * d2u - 2.0 * rho * du + prob.q(rho) * u) / prob.w(rho);
}

GridFunction apply_operator(const SLProblem& prob, const GridFunction& u) {
  const auto& x = u.mesh;
  const std::size_t n = x.size();
  if (u.values.size() != n) throw InvalidArgument("apply_operator: values and mesh differ in length");
  if (n == 0) return {};
  if (!(x.front() > 0.0 && x.back() < 1.0)) throw InvalidArgument("apply_operator: mesh must avoid rho = 0 and rho = 1");
  GridFunction out;
  if (u.first.size() == n && u.second.size() == n) {
    out.mesh = x;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = apply_operator(prob, x[i], u.values[i], u.first[i], u.second[i]);
    return out;
  }
  if (n < 3) throw InvalidArgument("apply_operator: finite differences need at least 3 nodes");
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = x[i] - x[i - 1], h2 = x[i + 1] - x[i];
    if (!(h1 > 0.0 && h2 > 0.0)) throw InvalidArgument("apply_operator: mesh must be strictly increasing");
    const double um = u.values[i - 1], u0 = u.values[i], up = u.values[i + 1];
    const double d1 = -h2 / (h1 * (h1 + h2)) * um + (h2 - h1) / (h1 * h2) * u0 + h1 / (h2 * (h1 + h2)) * up;
    const double d2 = 2.0 * (um / (h1 * (h1 + h2)) - u0 / (h1 * h2) + up / (h2 * (h1 + h2)));
    out.mesh.push_back(x[i]);
    out.values.push_back(apply_operator(prob, x[i], u0, d1, d2));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pruefer shooting

namespace detail {

odeint::RightHandSide pruefer_rhs(const SLProblem& prob, double lambda) {
  return [prob, lambda](double rho, std::span<const double> y, std::span<double> dy) {
    const double G = prob.shifted_potential(rho, lambda);
    const double p = rho * rho;
    const double s = std::sin(y[0]), c = std::cos(y[0]);
    dy[0] = c * c / p - G * s * s;
    dy[1] = s * c * (1.0 / p + G);
  };
}

double left_start_offset(const SLProblem& prob, double eps, double mu) {
  double e = std::min(eps, 1e-2 / (1.0 + mu));
  if (const Profile* pr = prob.source_profile()) e = std::min(e, 1e-2 * std::pow(std::max(pr->b(), 1.0), -1.0 / pr->ell()));
  return e;
}

double right_start_offset(double eps, double mu) { return std::min(eps, 1e-2 / (1.0 + mu)); }

PrueferStart left_start(const SLProblem& prob, double mu, double offset, int order) {
  const auto eq = prob.local_equation(Endpoint::zero, -mu * mu, order);
  const double ell = prob.ell();
  PrueferStart st;
  st.series = frobenius::series_solution(eq, ell, order);
  const double r = offset;
  const double S = st.series.regular_part(r).real(), dS = st.series.regular_part_derivative(r).real();
  const double P = r * (ell * S + r * dS);
  st.rho = r;
  st.theta = std::atan2(S, P);
  st.log_r = ell * std::log(r) + 0.5 * std::log(S * S + P * P);
  return st;
}

PrueferStart right_start(const SLProblem& prob, double mu, double offset, int order) {
  const auto eq = prob.local_equation(Endpoint::one, -mu * mu, order);
  const double idx = 0.5 * (1.0 + mu);
  PrueferStart st;
  st.series = frobenius::series_solution(eq, idx, order);
  const double t = offset, rho = 1.0 - t;
  const double S = st.series.regular_part(t).real(), dS = st.series.regular_part_derivative(t).real();
  const double U = t * S, P = -rho * rho * (idx * S + t * dS);
  st.rho = rho;
  st.theta = std::atan2(U, P);
  st.log_r = (idx - 1.0) * std::log(t) + 0.5 * std::log(U * U + P * P);
  return st;
}

odeint::DenseSolution integrate_pruefer(const SLProblem& prob, double mu, const PrueferStart& start, double to,
                                        double rel_tol, double abs_tol, bool dense) {
  odeint::IVPSpec spec;
  spec.rhs = pruefer_rhs(prob, -mu * mu);
  spec.t0 = start.rho;
  spec.t1 = to;
  spec.initial_state = {start.theta, start.log_r};
  spec.rel_tol = rel_tol;
  spec.abs_tol = abs_tol;
  spec.dense_output = dense;
  return odeint::integrate(spec);
}

}  // namespace detail

namespace {

void check_shooting(const SLProblem& prob, double mu, const ShootingOptions& o) {
  if (prob.is_infinity()) {
    throw InvalidArgument("eigenvalue shooting needs limit-point endpoints; use the A_infinity solvers");
  }
  if (!(mu > 0.0)) {
    throw InvalidArgument("eigenvalue shooting: lambda >= 0 lies in the essential spectrum [0, inf) and is not scanned");
  }
  if (!(o.rho_match > 0.05 && o.rho_match < 0.95)) throw InvalidArgument("shooting: rho_match must lie in (0.05, 0.95)");
  if (!(o.eps > 0.0 && o.eps < 0.05)) throw InvalidArgument("shooting: eps must lie in (0, 0.05)");
  if (o.series_order < 1) throw InvalidArgument("shooting: series_order must be >= 1");
}

struct Sides {
  odeint::DenseSolution left, right;
  detail::PrueferStart ls, rs;
};

Sides shoot_both(const SLProblem& prob, double mu, const ShootingOptions& o, bool dense) {
  const double el = detail::left_start_offset(prob, o.eps, mu);
  const double er = detail::right_start_offset(o.eps, mu);
  auto ls = detail::left_start(prob, mu, el, o.series_order);
  auto rs = detail::right_start(prob, mu, er, o.series_order);
  auto left = detail::integrate_pruefer(prob, mu, ls, o.rho_match, o.rel_tol, o.abs_tol, dense);
  auto right = detail::integrate_pruefer(prob, mu, rs, o.rho_match, o.rel_tol, o.abs_tol, dense);
  return {std::move(left), std::move(right), std::move(ls), std::move(rs)};
}

}  // namespace

double shooting_mismatch(const SLProblem& prob, double mu, const ShootingOptions& o) {
  check_shooting(prob, mu, o);
  const auto s = shoot_both(prob, mu, o, false);
  return s.left.final_state()[0] - s.right.final_state()[0];
}

// ---------------------------------------------------------------------------
// Eigenfunctions

class EigenSolver {
 public:
  static std::shared_ptr<const Eigenfunction> build(const SLProblem& prob, double mu, const ShootingOptions& o);
};

double Eigenfunction::side_value(const Side& s, double rho, bool left) const {
  if (left && rho <= eps_left_) {
    const double ell = std::real(s.series.index);
    return s.sign * std::exp(s.log_scale + ell * std::log(rho)) * s.series.regular_part(rho).real();
  }
  if (!left && rho >= 1.0 - eps_right_) {
    const double t = 1.0 - rho;
    const double idx = s.series.index.real();
    return s.sign * std::exp(s.log_scale + idx * std::log(t)) * s.series.regular_part(t).real();
  }
  double y[2];
  s.sol->evaluate(rho, y);
  return s.sign * std::exp(y[1] + s.log_scale) * std::sin(y[0]);
}

double Eigenfunction::side_derivative(const Side& s, double rho, bool left) const {
  if (left && rho <= eps_left_) {
    const double ell = s.series.index.real();
    const double S = s.series.regular_part(rho).real(), dS = s.series.regular_part_derivative(rho).real();
    return s.sign * std::exp(s.log_scale + (ell - 1.0) * std::log(rho)) * (ell * S + rho * dS);
  }
  if (!left && rho >= 1.0 - eps_right_) {
    const double t = 1.0 - rho;
    const double idx = s.series.index.real();
    const double S = s.series.regular_part(t).real(), dS = s.series.regular_part_derivative(t).real();
    return -s.sign * std::exp(s.log_scale + (idx - 1.0) * std::log(t)) * (idx * S + t * dS);
  }
  double y[2];
  s.sol->evaluate(rho, y);
  return s.sign * std::exp(y[1] + s.log_scale) * std::cos(y[0]) / (rho * rho);
}

double Eigenfunction::value(double rho) const {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("eigenfunction: rho outside [0, 1]");
  if (rho == 0.0 || rho == 1.0) return 0.0;
  return rho <= rho_match_ ? side_value(left_, rho, true) : side_value(right_, rho, false);
}

double Eigenfunction::derivative(double rho) const {
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("eigenfunction: derivative needs rho in (0, 1)");
  return rho <= rho_match_ ? side_derivative(left_, rho, true) : side_derivative(right_, rho, false);
}

std::vector<double> Eigenfunction::mesh() const {
  std::vector<double> out;
  for (double r : left_.sol->mesh()) {
    if (r < rho_match_) out.push_back(r);
  }
  out.push_back(rho_match_);
  const auto rm = right_.sol->mesh();
  for (auto it = rm.rbegin(); it != rm.rend(); ++it) {
    if (*it > out.back()) out.push_back(*it);
  }
  return out;
}


std::shared_ptr<const Eigenfunction> EigenSolver::build(const SLProblem& prob, double mu, const ShootingOptions& o) {
  check_shooting(prob, mu, o);
  const double el = detail::left_start_offset(prob, o.eps, mu);
  const double er = detail::right_start_offset(o.eps, mu);
  auto ls = detail::left_start(prob, mu, el, o.series_order);
  auto rs = detail::right_start(prob, mu, er, o.series_order);
  // both sides across the whole interval; each is accurate where the
  // eigenfunction grows in its direction of integration
  auto ef = std::make_shared<Eigenfunction>();
  ef->eps_left_ = ls.rho;
  ef->eps_right_ = 1.0 - rs.rho;
  ef->left_.sol = std::make_shared<const odeint::DenseSolution>(
      detail::integrate_pruefer(prob, mu, ls, rs.rho, o.rel_tol, o.abs_tol, true));
  ef->right_.sol = std::make_shared<const odeint::DenseSolution>(
      detail::integrate_pruefer(prob, mu, rs, ls.rho, o.rel_tol, o.abs_tol, true));
  ef->left_.series = ls.series;
  ef->right_.series = rs.series;

  // glue where the Pruefer angles agree best modulo pi, preferring rho_match
  double best = std::numeric_limits<double>::infinity(), glue = o.rho_match;
  std::vector<std::pair<double, double>> defects;
  for (double r : ef->left_.sol->mesh()) {
    if (r < 2.0 * ls.rho || r > 1.0 - 2.0 * er) continue;
    const double d = std::abs(std::sin(ef->left_.sol->evaluate(r, 0) - ef->right_.sol->evaluate(r, 0)));
    defects.emplace_back(r, d);
    best = std::min(best, d);
  }
  double closest = std::numeric_limits<double>::infinity();
  for (const auto& [r, d] : defects) {
    if (d <= 10.0 * best + 1e-14 && std::abs(std::log(r / o.rho_match)) < closest) {
      closest = std::abs(std::log(r / o.rho_match));
      glue = r;
    }
  }
  ef->rho_match_ = glue;
  double yl[2], yr[2];
  ef->left_.sol->evaluate(glue, yl);
  ef->right_.sol->evaluate(glue, yr);
  const long k = std::lround((yl[0] - yr[0]) / pi);
  ef->zeros_ = static_cast<int>(k);
  ef->wronskian_ = std::abs(std::sin(yl[0] - yr[0]));
  ef->right_.sign = (k % 2 == 0) ? 1.0 : -1.0;
  ef->right_.log_scale = yl[1] - yr[1];

  // H-norm relative to exp(2 M), M = ln r at the gluing point
  const double M = yl[1];
  auto shifted_sq = [&](const Eigenfunction::Side& s, double rho) {
    double y[2];
    s.sol->evaluate(rho, y);
    const double sn = std::sin(y[0]);
    return std::exp(2.0 * (y[1] + s.log_scale - M)) * sn * sn * prob.w(rho);
  };
  double I = 0.0;
  const double ell = prob.ell();
  I += gauss_legendre(0.0, ef->eps_left_, [&](double r) {
    const double S = ef->left_.series.regular_part(r).real();
    return std::exp(2.0 * (ell * std::log(r) - M)) * S * S * prob.w(r);
  });
  for (const auto* side : {&ef->left_, &ef->right_}) {
    const bool left = side == &ef->left_;
    const double lo = left ? ef->eps_left_ : glue, hi = left ? glue : 1.0 - ef->eps_right_;
    const auto m = side->sol->mesh();
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
      const double a = std::max(lo, std::min(m[i], m[i + 1])), b = std::min(hi, std::max(m[i], m[i + 1]));
      if (b > a) I += gauss_legendre(a, b, [&](double r) { return shifted_sq(*side, r); });
    }
  }
  {
    // u^2 w = t^(mu - 1) S^2 (1 - t)^2 / (2 - t)^2 on the last panel
    const int K = ef->right_.series.truncation_order;
    Series<double> S(static_cast<std::size_t>(K) + 1);
    for (int j = 0; j <= K; ++j) S[j] = ef->right_.series.coefficients[j].real();
    auto H = series::multiply(std::span<const double>(S), std::span<const double>(S));
    Series<double> num(H.size(), 0.0), den(H.size(), 0.0);
    const double nq[3] = {1.0, -2.0, 1.0}, dq[3] = {4.0, -4.0, 1.0};
    for (std::size_t j = 0; j < std::min<std::size_t>(3, H.size()); ++j) {
      num[j] = nq[j];
      den[j] = dq[j];
    }
    H = series::multiply(std::span<const double>(H), std::span<const double>(num));
    H = series::multiply(std::span<const double>(H), std::span<const double>(series::reciprocal(std::span<const double>(den))));
    const double e = ef->eps_right_;
    double acc = 0.0;
    for (std::size_t j = 0; j < H.size(); ++j) acc += H[j] * std::pow(e, static_cast<double>(j)) / (mu + static_cast<double>(j));
    I += std::exp(2.0 * (ef->right_.log_scale - M) + mu * std::log(e)) * acc;
  }
  const double shift = -M - 0.5 * std::log(I);
  ef->log_raw_norm_ = M + 0.5 * std::log(I);
  ef->left_.log_scale += shift;
  ef->right_.log_scale += shift;
  return ef;
}

std::shared_ptr<const Eigenfunction> eigenfunction(const SLProblem& prob, double mu, const ShootingOptions& o) {
  return EigenSolver::build(prob, mu, o);
}

// ---------------------------------------------------------------------------
// Eigenvalue scan

std::vector<EigenvalueRecord> eigenvalues_shooting(const SLProblem& prob, double mu_max, const ShootingOptions& o,
                                                   ShootingDiagnostics* diagnostics) {
  check_shooting(prob, std::max(mu_max, o.mu_min), o);
  if (!(o.mu_min > 0.0) || !(mu_max > o.mu_min)) throw InvalidArgument("eigenvalues_shooting: need 0 < mu_min < mu_max");
  if (!(o.grid_ratio > 1.0)) throw InvalidArgument("eigenvalues_shooting: grid_ratio must exceed 1");
  ShootingDiagnostics diag;
  auto mismatch = [&](double mu) {
    ++diag.mismatch_evaluations;
    return shooting_mismatch(prob, mu, o);
  };

  std::vector<double> grid;
  for (double m = o.mu_min; m < mu_max; m *= o.grid_ratio) grid.push_back(m);
  grid.push_back(mu_max);
  std::vector<double> D(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) D[i] = mismatch(grid[i]);
  diag.grid_points = static_cast<int>(grid.size());

  std::vector<double> roots;
  auto solve_cell = [&](double a, double b, double fa, double fb, long k) {
    const double target = k * pi;
    auto f = [&](double m) { return mismatch(m) - target; };
    if (fa - target == 0.0) {
      roots.push_back(a);
      return;
    }
    std::uintmax_t iters = 200;
    auto tol = [&](double x, double y) { return std::abs(y - x) <= o.root_tol * std::max(std::abs(x), std::abs(y)); };
    const auto r = boost::math::tools::toms748_solve(f, a, b, fa - target, fb - target, tol, iters);
    roots.push_back(0.5 * (r.first + r.second));
  };
  // Theta mismatch decreases in mu; each multiple of pi crossed is a root.
  auto process = [&](auto&& self, double a, double b, double fa, double fb, int depth) -> void {
    const long ka = static_cast<long>(std::floor(fa / pi));
    const long kb = static_cast<long>(std::floor(fb / pi));
    const long count = ka - kb;
    if (count <= 0) return;
    if (count == 1) {
      solve_cell(a, b, fa, fb, ka);
      return;
    }
    if (depth > 40) {
      std::ostringstream os;
      os << "eigenvalues_shooting: could not separate roots in [" << a << ", " << b << "]";
      throw MeshTooCoarse(os.str(), a);
    }
    if (depth == 0) ++diag.refined_cells;
    const int parts = 8;
    double xa = a, fxa = fa;
    for (int i = 1; i <= parts; ++i) {
      const double xb = i == parts ? b : a * std::pow(b / a, static_cast<double>(i) / parts);
      const double fxb = i == parts ? fb : mismatch(xb);
      self(self, xa, xb, fxa, fxb, depth + 1);
      xa = xb;
      fxa = fxb;
    }
  };
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) process(process, grid[i], grid[i + 1], D[i], D[i + 1], 0);
  std::sort(roots.begin(), roots.end());

  std::vector<EigenvalueRecord> out;
  int j = 0;
  for (double mu : roots) {
    EigenvalueRecord rec;
    rec.mu = mu;
    rec.lambda = -mu * mu;
    rec.n = prob.n().value_or(-1);
    rec.ell = prob.ell();
    rec.j = ++j;
    rec.eigenfunction = EigenSolver::build(prob, mu, o);
    rec.wronskian_residual = rec.eigenfunction->wronskian_residual();
    out.push_back(std::move(rec));
  }
  if (diagnostics) *diagnostics = diag;
  return out;
}

}  // namespace wavemap
