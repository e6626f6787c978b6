#include "wavemap/profiles.hpp"

#include "wavemap/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace wavemap {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double half_pi = std::numbers::pi / 2;

double k_of(int ell) { return 0.5 * ell * (ell + 1); }

void check_ell(int ell) {
  if (ell < 1) throw InvalidArgument("profile: ell must be >= 1");
}

// j-th derivative of a polynomial at s.
double poly_derivative(const series::Series<double>& a, double s, int j) {
  double acc = 0.0;
  for (std::size_t m = a.size(); m-- > static_cast<std::size_t>(j);) {
    double fall = 1.0;
    for (int i = 0; i < j; ++i) fall *= static_cast<double>(m - i);
    acc = acc * s + fall * a[m];
  }
  return acc;
}

// f'' and f''' from the profile equation.
std::array<double, 2> higher_derivatives(int ell, double rho, double f, double df) {
  const double k = k_of(ell);
  const double d = rho * rho * (1.0 - rho * rho);
  const double s2 = std::sin(2.0 * f), c2 = std::cos(2.0 * f);
  const double d2 = k * s2 / d - 2.0 * df / rho;
  const double dd = 2.0 * rho - 4.0 * rho * rho * rho;
  const double d3 = k * (2.0 * c2 * df * d - s2 * dd) / (d * d) - 2.0 * d2 / rho + 2.0 * df / (rho * rho);
  return {d2, d3};
}

odeint::RightHandSide profile_rhs(int ell) {
  const double k = k_of(ell);
  return [k](double r, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = k * std::sin(2.0 * y[0]) / (r * r * (1.0 - r * r)) - 2.0 * y[1] / r;
  };
}

// Profile plus its first variation with respect to the free parameter.
odeint::RightHandSide variational_rhs(int ell) {
  const double k = k_of(ell);
  return [k](double r, std::span<const double> y, std::span<double> dy) {
    const double d = r * r * (1.0 - r * r);
    dy[0] = y[1];
    dy[1] = k * std::sin(2.0 * y[0]) / d - 2.0 * y[1] / r;
    dy[2] = y[3];
    dy[3] = 2.0 * k * std::cos(2.0 * y[0]) * y[2] / d - 2.0 * y[3] / r;
  };
}

double left_offset(const ProfileOptions& o, int ell, double b) {
  return std::min(o.eps, 1e-2 * std::pow(std::max(b, 1.0), -1.0 / ell));
}

double right_offset(const ProfileOptions& o, double c) { return std::min(o.eps, 1e-2 / (1.0 + std::abs(c))); }

odeint::IVPSpec base_spec(const ProfileOptions& o) {
  odeint::IVPSpec spec;
  spec.rel_tol = o.ode_rel_tol;
  spec.abs_tol = o.ode_abs_tol;
  return spec;
}

struct SideResult {
  double f, df, f_p, df_p;  // value, slope and their parameter derivatives at rho_match
};

// Left solution at rho_match with derivatives with respect to log b.
SideResult shoot_left(int ell, double b, const ProfileOptions& o) {
  const int order = std::max(o.series_order, ell + 2);
  const double e = left_offset(o, ell, b);
  const auto s = profile_detail::center_series(ell, b, order);
  const double h = 1e-6 * b;
  const auto sp = profile_detail::center_series(ell, b + h, order);
  const auto sm = profile_detail::center_series(ell, b - h, order);
  auto spec = base_spec(o);
  spec.rhs = variational_rhs(ell);
  spec.t0 = e;
  spec.t1 = o.rho_match;
  spec.dense_output = false;
  const double fb = b * (poly_derivative(sp, e, 0) - poly_derivative(sm, e, 0)) / (2 * h);
  const double dfb = b * (poly_derivative(sp, e, 1) - poly_derivative(sm, e, 1)) / (2 * h);
  spec.initial_state = {poly_derivative(s, e, 0), poly_derivative(s, e, 1), fb, dfb};
  const auto sol = odeint::integrate(spec);
  const auto y = sol.final_state();
  return {y[0], y[1], y[2], y[3]};
}

// Right solution at rho_match with derivatives with respect to c.
SideResult shoot_right(int ell, double c, const ProfileOptions& o) {
  const int order = std::max(o.series_order, 2);
  const double e = right_offset(o, c);
  const auto s = profile_detail::boundary_series(ell, c, order);
  const double h = 1e-6 * std::max(1.0, std::abs(c));
  const auto sp = profile_detail::boundary_series(ell, c + h, order);
  const auto sm = profile_detail::boundary_series(ell, c - h, order);
  auto spec = base_spec(o);
  spec.rhs = variational_rhs(ell);
  spec.t0 = 1.0 - e;
  spec.t1 = o.rho_match;
  spec.dense_output = false;
  const double fc = (poly_derivative(sp, e, 0) - poly_derivative(sm, e, 0)) / (2 * h);
  const double dfc = -(poly_derivative(sp, e, 1) - poly_derivative(sm, e, 1)) / (2 * h);
  spec.initial_state = {poly_derivative(s, e, 0), -poly_derivative(s, e, 1), fc, dfc};
  const auto sol = odeint::integrate(spec);
  const auto y = sol.final_state();
  return {y[0], y[1], y[2], y[3]};
}

// Crossings of pi/2 by the outward solution on (0, 1 - delta), capped at `cap`.
int outward_crossings(int ell, double b, int cap, const ProfileOptions& o) {
  const int order = std::max(o.series_order, ell + 2);
  const double e = left_offset(o, ell, b);
  const auto s = profile_detail::center_series(ell, b, order);
  auto spec = base_spec(o);
  spec.rel_tol = std::max(o.ode_rel_tol, 1e-11);
  spec.abs_tol = std::max(o.ode_abs_tol, 1e-13);
  spec.rhs = profile_rhs(ell);
  spec.t0 = e;
  spec.t1 = 1.0 - 1e-8;
  spec.dense_output = false;
  spec.initial_state = {poly_derivative(s, e, 0), poly_derivative(s, e, 1)};
  int count = 0;
  double prev = spec.initial_state[0] - half_pi;
  spec.stop_when = [&](double, std::span<const double> y) {
    const double g = y[0] - half_pi;
    if ((g > 0) != (prev > 0)) ++count;
    prev = g;
    return count >= cap;
  };
  try {
    odeint::integrate(spec);
  } catch (const IntegrationBlowUp&) {
    // the count up to the blow-up point is what matters
  }
  return count;
}

// Secant estimate of c from the outward solution close to rho = 1.
double estimate_c(int ell, double b, const ProfileOptions& o) {
  const int order = std::max(o.series_order, ell + 2);
  const double e = left_offset(o, ell, b);
  const auto s = profile_detail::center_series(ell, b, order);
  auto spec = base_spec(o);
  spec.rhs = profile_rhs(ell);
  spec.t0 = e;
  spec.t1 = 1.0 - 1e-4;
  spec.dense_output = false;
  spec.initial_state = {poly_derivative(s, e, 0), poly_derivative(s, e, 1)};
  const auto y = odeint::integrate(spec).final_state();
  return (half_pi - y[0]) / 1e-4;
}

std::shared_ptr<const odeint::DenseSolution> integrate_left(int ell, double e,
                                                            const series::Series<double>& s,
                                                            const ProfileOptions& o) {
  auto spec = base_spec(o);
  spec.rhs = profile_rhs(ell);
  spec.t0 = e;
  spec.t1 = o.rho_match;
  spec.initial_state = {poly_derivative(s, e, 0), poly_derivative(s, e, 1)};
  return std::make_shared<const odeint::DenseSolution>(odeint::integrate(spec));
}

std::shared_ptr<const odeint::DenseSolution> integrate_right(int ell, double e, const series::Series<double>& s,
                                                             const ProfileOptions& o) {
  auto spec = base_spec(o);
  spec.rhs = profile_rhs(ell);
  spec.t0 = 1.0 - e;
  spec.t1 = o.rho_match;
  spec.initial_state = {poly_derivative(s, e, 0), -poly_derivative(s, e, 1)};
  return std::make_shared<const odeint::DenseSolution>(odeint::integrate(spec));
}

void check_options(const ProfileOptions& o) {
  if (!(o.eps > 0.0 && o.eps < 0.1)) throw InvalidArgument("profile: eps must lie in (0, 0.1)");
  if (!(o.rho_match > 0.05 && o.rho_match < 0.95)) throw InvalidArgument("profile: rho_match must lie in (0.05, 0.95)");
  if (o.series_order < 2) throw InvalidArgument("profile: series_order must be >= 2");
  if (!(o.scan_ratio > 1.0)) throw InvalidArgument("profile: scan_ratio must exceed 1");
  if (!(o.b_min > 0.0 && o.b_max > o.b_min)) throw InvalidArgument("profile: invalid b scan range");
}

}  // namespace

namespace profile_detail {

series::Series<double> center_series(int ell, double b, int order) {
  check_ell(ell);
  order = std::max(order, ell);
  const double k = k_of(ell);
  series::Series<double> c(static_cast<std::size_t>(order) + 1, 0.0);
  c[ell] = b;
  for (int m = ell + 2; m <= order; m += 2) {
    // sin(2f) with c_m still zero gives the nonlinear part of [sin 2f]_m
    series::Series<double> two_f(c.begin(), c.begin() + m + 1);
    for (auto& x : two_f) x *= 2.0;
    const double nonlinear = series::sin_cos(std::span<const double>(two_f)).first[m];
    c[m] = ((m - 1.0) * (m - 2.0) * c[m - 2] + k * nonlinear) / (m * (m + 1.0) - 2.0 * k);
  }
  return c;
}

series::Series<double> boundary_series(int ell, double c, int order) {
  check_ell(ell);
  order = std::max(order, 1);
  const double k = k_of(ell);
  // P g'' + R g' + k sin(2g) = 0 with g = f - pi/2 in t = 1 - rho
  static constexpr double P[] = {0.0, 2.0, -5.0, 4.0, -1.0};
  static constexpr double R[] = {0.0, -4.0, 6.0, -2.0};
  series::Series<double> a(static_cast<std::size_t>(order) + 1, 0.0);
  a[1] = -c;
  auto at = [&](int j) { return j >= 0 && j <= order ? a[j] : 0.0; };
  for (int m = 1; m < order; ++m) {
    series::Series<double> two_g(a.begin(), a.begin() + m + 1);
    for (auto& x : two_g) x *= 2.0;
    double rest = k * series::sin_cos(std::span<const double>(two_g)).first[m];
    for (int i = 2; i <= 4; ++i) rest += P[i] * (m - i + 2.0) * (m - i + 1.0) * at(m - i + 2);
    for (int i = 1; i <= 3; ++i) rest += R[i] * (m - i + 1.0) * at(m - i + 1);
    a[m + 1] = -rest / (2.0 * m * (m + 1.0));
  }
  a[0] = half_pi;
  return a;
}

}  // namespace profile_detail

Profile profile_closed_form_f0() {
  Profile p;
  p.n_ = 0;
  p.ell_ = 1;
  p.b_ = 2.0;
  p.c_ = 1.0;
  p.tol_ = 0.0;
  p.closed_form_ = true;
  return p;
}

Profile Profile::from_parameters(int n, int ell, double b, double c, double tol, const ProfileOptions& options) {
  check_ell(ell);
  check_options(options);
  if (n < 0) throw InvalidArgument("profile: n must be >= 0");
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidArgument("profile: b must be positive and finite");
  if (!std::isfinite(c)) throw InvalidArgument("profile: c must be finite");
  Profile p;
  p.n_ = n;
  p.ell_ = ell;
  p.b_ = b;
  p.c_ = c;
  p.tol_ = tol;
  p.options_ = options;
  p.eps_left_ = left_offset(options, ell, b);
  p.eps_right_ = right_offset(options, c);
  const int order = std::max(options.series_order, ell + 2);
  p.zero_series_ = profile_detail::center_series(ell, b, order);
  p.one_series_ = profile_detail::boundary_series(ell, c, order);
  p.left_ = integrate_left(ell, p.eps_left_, p.zero_series_, options);
  p.right_ = integrate_right(ell, p.eps_right_, p.one_series_, options);
  return p;
}

Profile shoot_profile(int n, int ell, double tol, const ProfileOptions& o) {
  check_ell(ell);
  check_options(o);
  if (n < 0) throw InvalidArgument("shoot_profile: n must be >= 0");
  if (!(tol > 0.0)) throw InvalidArgument("shoot_profile: tol must be positive");

  double b = 0.0, c = 0.0;
  if (n == 0 && ell == 1) {
    b = 2.0;
    c = 1.0;
  } else {
    // bracket the jump of the outward crossing count from n to n + 1
    double lo = 0.0, hi = 0.0;
    bool found = false;
    int prev_count = -1;
    for (double bb = o.b_min; bb <= o.b_max; bb *= o.scan_ratio) {
      const int k = outward_crossings(ell, bb, n + 1, o);
      if (k >= n + 1) {
        if (prev_count >= 0 && prev_count <= n) {
          hi = bb;
          found = true;
        }
        break;
      }
      prev_count = k;
      lo = bb;
    }
    if (!found) {
      std::ostringstream os;
      os << "shoot_profile: no bracket for n = " << n << ", ell = " << ell << " with b in [" << o.b_min << ", "
         << o.b_max << "]";
      throw ProfileNotFound(os.str());
    }
    while (hi / lo - 1.0 > 1e-9) {
      const double mid = std::sqrt(lo * hi);
      (outward_crossings(ell, mid, n + 1, o) >= n + 1 ? hi : lo) = mid;
    }
    b = std::sqrt(lo * hi);
    c = estimate_c(ell, b, o);
  }

  auto residual = [&](double bb, double cc, SideResult& l, SideResult& r) {
    l = shoot_left(ell, bb, o);
    r = shoot_right(ell, cc, o);
    return std::array<double, 2>{l.f - r.f, l.df - r.df};
  };
  auto norm = [](const std::array<double, 2>& v) { return std::max(std::abs(v[0]), std::abs(v[1])); };

  SideResult l{}, r{};
  auto res = residual(b, c, l, r);
  double rn = norm(res);
  int it = 0;
  for (; it < o.max_newton && rn > tol; ++it) {
    // unknowns (log b, c)
    const double j11 = l.f_p, j12 = -r.f_p, j21 = l.df_p, j22 = -r.df_p;
    const double det = j11 * j22 - j12 * j21;
    if (!std::isfinite(det) || det == 0.0) break;
    double dlb = -(j22 * res[0] - j12 * res[1]) / det;
    double dc = -(-j21 * res[0] + j11 * res[1]) / det;
    const double scale = std::max({1.0, std::abs(dlb) / 0.5, std::abs(dc) / (0.5 * std::max(1.0, std::abs(c)))});
    dlb /= scale;
    dc /= scale;
    bool accepted = false;
    for (int half = 0; half < 30; ++half) {
      const double nb = b * std::exp(dlb), nc = c + dc;
      SideResult nl{}, nr{};
      std::array<double, 2> nres{};
      try {
        nres = residual(nb, nc, nl, nr);
      } catch (const IntegrationBlowUp&) {
        dlb *= 0.5;
        dc *= 0.5;
        continue;
      }
      const double nn = norm(nres);
      if (std::isfinite(nn) && nn < rn) {
        b = nb;
        c = nc;
        l = nl;
        r = nr;
        res = nres;
        rn = nn;
        accepted = true;
        break;
      }
      dlb *= 0.5;
      dc *= 0.5;
    }
    if (!accepted) break;
  }
  if (!(rn <= tol)) {
    std::ostringstream os;
    os << "shoot_profile: matching did not converge for n = " << n << ", ell = " << ell << " (residual " << rn
       << " after " << it << " iterations)";
    throw NewtonDivergence(os.str(), b, c, rn);
  }

  Profile p = Profile::from_parameters(n, ell, b, c, tol, o);
  const int crossings = intersection_count(p);
  if (crossings != n) {
    std::ostringstream os;
    os << "shoot_profile: matched solution has " << crossings << " crossings of pi/2, expected " << n;
    throw ProfileNotFound(os.str());
  }
  return p;
}

double Profile::evaluate(double rho) const {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("profile: rho outside [0, 1]");
  if (closed_form_) return 2.0 * std::atan(rho);
  if (rho <= eps_left_) return poly_derivative(zero_series_, rho, 0);
  if (rho >= 1.0 - eps_right_) return poly_derivative(one_series_, 1.0 - rho, 0);
  if (rho <= options_.rho_match) return left_->evaluate(rho, 0);
  return right_->evaluate(rho, 0);
}

double Profile::evaluate_derivative(double rho) const {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("profile: rho outside [0, 1]");
  if (closed_form_) return 2.0 / (1.0 + rho * rho);
  if (rho <= eps_left_) return poly_derivative(zero_series_, rho, 1);
  if (rho >= 1.0 - eps_right_) return -poly_derivative(one_series_, 1.0 - rho, 1);
  if (rho <= options_.rho_match) return left_->evaluate(rho, 1);
  return right_->evaluate(rho, 1);
}

std::array<double, 4> Profile::derivatives(double rho) const {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("profile: rho outside [0, 1]");
  if (closed_form_) {
    const double q = 1.0 + rho * rho;
    return {2.0 * std::atan(rho), 2.0 / q, -4.0 * rho / (q * q), (12.0 * rho * rho - 4.0) / (q * q * q)};
  }
  if (rho <= eps_left_) {
    return {poly_derivative(zero_series_, rho, 0), poly_derivative(zero_series_, rho, 1),
            poly_derivative(zero_series_, rho, 2), poly_derivative(zero_series_, rho, 3)};
  }
  if (rho >= 1.0 - eps_right_) {
    const double t = 1.0 - rho;
    return {poly_derivative(one_series_, t, 0), -poly_derivative(one_series_, t, 1),
            poly_derivative(one_series_, t, 2), -poly_derivative(one_series_, t, 3)};
  }
  const double f = evaluate(rho), df = evaluate_derivative(rho);
  const auto h = higher_derivatives(ell_, rho, f, df);
  return {f, df, h[0], h[1]};
}

series::Series<double> Profile::series_at_zero(int order) const {
  if (closed_form_) {
    // 2 arctan(rho) = 2 sum (-1)^j rho^(2j+1) / (2j+1)
    series::Series<double> s(static_cast<std::size_t>(std::max(order, 0)) + 1, 0.0);
    for (int m = 1; m <= order; m += 2) s[m] = 2.0 * (((m - 1) / 2) % 2 == 0 ? 1.0 : -1.0) / m;
    return s;
  }
  return profile_detail::center_series(ell_, b_, order);
}

series::Series<double> Profile::series_at_one(int order) const {
  return profile_detail::boundary_series(ell_, c_, order);
}

double Profile::matching_residual() const {
  if (closed_form_) return 0.0;
  const double rm = options_.rho_match;
  return std::abs(left_->evaluate(rm, 0) - right_->evaluate(rm, 0)) +
         std::abs(left_->evaluate(rm, 1) - right_->evaluate(rm, 1));
}

std::vector<double> Profile::mesh() const {
  std::vector<double> out;
  if (closed_form_) {
    const int n = 2048;
    out.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
      const double s = static_cast<double>(i) / n;
      out.push_back(0.5 - 0.5 * std::cos(pi * s));
    }
    return out;
  }
  out.push_back(0.0);
  for (double r : left_->mesh()) out.push_back(r);
  const auto rm = right_->mesh();
  for (auto it = rm.rbegin(); it != rm.rend(); ++it) {
    if (*it > out.back()) out.push_back(*it);
  }
  out.push_back(1.0);
  return out;
}

int intersection_count(std::span<const double> rho, std::span<const double> f, std::span<const double> df) {
  if (rho.size() != f.size() || rho.size() != df.size() || rho.size() < 2) {
    throw InvalidArgument("intersection_count: samples must have matching length >= 2");
  }
  int count = 0;
  const std::size_t n = rho.back() == 1.0 ? rho.size() - 1 : rho.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = rho[i + 1] - rho[i];
    if (!(h > 0.0)) throw InvalidArgument("intersection_count: mesh must be strictly increasing");
    const double g0 = f[i] - half_pi, g1 = f[i + 1] - half_pi;
    if (g0 == 0.0 && i == 0) continue;
    if ((g0 > 0) != (g1 > 0) && g1 != 0.0) {
      ++count;
      continue;
    }
    if (g1 == 0.0) continue;
    // cubic Hermite interpolant on the cell; an interior extremum that
    // touches pi/2 within the interpolation uncertainty is not certifiable
    const double d0 = df[i] * h, d1 = df[i + 1] * h;
    if ((d0 > 0) == (d1 > 0)) continue;
    const double A = 3 * (2 * g0 - 2 * g1 + d0 + d1);
    const double B = 2 * (-3 * g0 + 3 * g1 - 2 * d0 - d1);
    const double C = d0;
    auto cubic = [&](double s) {
      const double s2 = s * s, s3 = s2 * s;
      return (2 * s3 - 3 * s2 + 1) * g0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * g1 + (s3 - s2) * d1;
    };
    double roots[2];
    int nr = 0;
    if (std::abs(A) < 1e-300) {
      if (B != 0.0) roots[nr++] = -C / B;
    } else {
      const double disc = B * B - 4 * A * C;
      if (disc >= 0) {
        const double sq = std::sqrt(disc);
        roots[nr++] = (-B + sq) / (2 * A);
        roots[nr++] = (-B - sq) / (2 * A);
      }
    }
    const double band = 1e-10 + 1e-3 * std::abs(d1 - d0);
    for (int j = 0; j < nr; ++j) {
      const double s = roots[j];
      if (!(s > 0.0 && s < 1.0)) continue;
      const double v = cubic(s);
      if (std::abs(v) <= band) {
        std::ostringstream os;
        os << "intersection_count: near-tangency with pi/2 at rho ~ " << rho[i] + s * h
           << "; refine the mesh there";
        throw MeshTooCoarse(os.str(), rho[i] + s * h);
      }
      if ((v > 0) != (g0 > 0)) count += 2;
    }
  }
  return count;
}

int intersection_count(const Profile& p) {
  const auto mesh = p.mesh();
  std::vector<double> f(mesh.size()), df(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    f[i] = p.evaluate(mesh[i]);
    df[i] = p.evaluate_derivative(mesh[i]);
  }
  return intersection_count(mesh, f, df);
}

std::array<double, 3> gauge_mode(const Profile& p, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("gauge_mode: rho must lie in (0, 1)");
  const auto d = p.derivatives(rho);
  const double s = std::sqrt(1.0 - rho * rho);
  const double w = rho * s;
  const double w1 = (1.0 - 2.0 * rho * rho) / s;
  const double w2 = rho * (2.0 * rho * rho - 3.0) / (s * s * s);
  return {w * d[1], w1 * d[1] + w * d[2], w2 * d[1] + 2.0 * w1 * d[2] + w * d[3]};
}

}  // namespace wavemap
