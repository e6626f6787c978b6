#include "wavemap/error.hpp"
#include "wavemap/slp.hpp"

#include <algorithm>
#include <cmath>

namespace wavemap {

namespace {

constexpr double gl_x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                            0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double gl_w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                            0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

// w from rho and d = 1 - rho, which is known more accurately than rho near 1
double weight(double rho, double d) {
  const double om = d * (1.0 + rho);
  return rho * rho / (om * om);
}

// int_a^b P(rho) w(rho) drho for a polynomial interpolant P. Near rho = 1 the
// panel is split geometrically so that every piece is a quarter of its
// distance to the pole of w; Gauss-Legendre is then exact to rounding.
template <class P>
double integrate_against_w(double a, double b, P&& poly) {
  double total = 0.0;
  auto gl = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double s = 0.0;
    const double d_lo = 1.0 - lo;
    for (int i = 0; i < 8; ++i) {
      const double x = c + h * gl_x[i];
      s += gl_w[i] * poly(x) * weight(x, d_lo - h * (1.0 + gl_x[i]));
    }
    return s * h;
  };
  double lo = a;
  while (lo < b) {
    const double dist = 1.0 - lo;
    const double hi = std::min(b, lo + 0.25 * dist);
    total += gl(lo, hi);
    lo = hi;
  }
  return total;
}

}  // namespace

QuadratureResult inner_product_w(const GridFunction& u, const GridFunction& v) {
  const auto& x = u.mesh;
  const std::size_t n = x.size();
  if (v.mesh != x) throw InvalidArgument("inner_product_w: grid functions live on different meshes");
  if (u.values.size() != n || v.values.size() != n) throw InvalidArgument("inner_product_w: values and mesh differ in length");
  if (n < 2) throw InvalidArgument("inner_product_w: need at least two nodes");
  if (!(x.front() >= 0.0) || !(x.back() < 1.0)) {
    throw InvalidArgument("inner_product_w: mesh must lie in [0, 1); the weight is not integrable at rho = 1");
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(x[i + 1] > x[i])) throw InvalidArgument("inner_product_w: mesh must be strictly increasing");
  }
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = u.values[i] * v.values[i];

  // piecewise linear
  double linear = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = x[i], b = x[i + 1], ga = g[i], gb = g[i + 1];
    linear += integrate_against_w(a, b, [&](double r) { return ga + (gb - ga) * (r - a) / (b - a); });
  }
  if (n == 2) return {linear, std::abs(linear)};

  // piecewise quadratic over panel pairs; an odd final panel uses the last three nodes
  double quad = 0.0;
  auto quadratic = [&](std::size_t k, double a, double b) {
    const double x0 = x[k], x1 = x[k + 1], x2 = x[k + 2];
    const double g0 = g[k], g1 = g[k + 1], g2 = g[k + 2];
    return integrate_against_w(a, b, [&](double r) {
      return g0 * (r - x1) * (r - x2) / ((x0 - x1) * (x0 - x2)) + g1 * (r - x0) * (r - x2) / ((x1 - x0) * (x1 - x2)) +
             g2 * (r - x0) * (r - x1) / ((x2 - x0) * (x2 - x1));
    });
  };
  std::size_t i = 0;
  for (; i + 2 < n; i += 2) quad += quadratic(i, x[i], x[i + 2]);
  if (i + 1 < n) quad += quadratic(n - 3, x[n - 2], x[n - 1]);
  return {quad, std::abs(quad - linear)};
}

}  // namespace wavemap
