#include "wavemap/frobenius.hpp"

#include "wavemap/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wavemap::frobenius {

Endpoint endpoint_from(double rho) {
  if (rho == 0.0) return Endpoint::zero;
  if (rho == 1.0) return Endpoint::one;
  std::ostringstream os;
  os << "rho = " << rho << " is an ordinary point; singular points are 0 and 1";
  throw InvalidArgument(os.str());
}

double location(Endpoint e) noexcept { return e == Endpoint::zero ? 0.0 : 1.0; }

cplx LocalEquation::indicial(cplx r) const {
  const cplx a0 = a.empty() ? cplx{} : a[0];
  const cplx b0 = b.empty() ? cplx{} : b[0];
  return r * (r - 1.0) + a0 * r + b0;
}

SingularPointData indicial_roots(const LocalEquation& eq) {
  const cplx a0 = eq.a.empty() ? cplx{} : eq.a[0];
  const cplx b0 = eq.b.empty() ? cplx{} : eq.b[0];
  // r^2 + (a0 - 1) r + b0 = 0
  const cplx p = a0 - 1.0;
  const cplx disc = std::sqrt(p * p - 4.0 * b0);
  cplx r1 = 0.5 * (-p + disc);
  cplx r2 = 0.5 * (-p - disc);
  auto before = [](cplx x, cplx y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  };
  if (!before(r1, r2)) std::swap(r1, r2);

  SingularPointData out;
  out.location = location(eq.point);
  out.indices = {r1, r2};
  const cplx diff = r1 - r2;
  const double scale = std::max(1.0, std::abs(r1) + std::abs(r2));
  out.degenerate = std::abs(diff.imag()) <= 1e-12 * scale &&
                   std::abs(diff.real() - std::round(diff.real())) <= 1e-12 * scale;
  return out;
}

FrobeniusExpansion series_solution(const LocalEquation& eq, cplx index, int order) {
  if (order < 0) throw InvalidArgument("series_solution: negative truncation order");
  const double scale = 1.0 + std::abs(index) * std::abs(index) +
                       (eq.b.empty() ? 0.0 : std::abs(eq.b[0]));
  if (std::abs(eq.indicial(index)) > 1e-9 * scale) {
    std::ostringstream os;
    os << "series_solution: " << index << " is not an indicial root";
    throw InvalidArgument(os.str());
  }
  auto coeff = [](const series::Series<cplx>& s, std::size_t k) {
    return k < s.size() ? s[k] : cplx{};
  };

  FrobeniusExpansion out;
  out.base_point = location(eq.point);
  out.index = index;
  out.truncation_order = order;
  out.coefficients.assign(static_cast<std::size_t>(order) + 1, cplx{});
  out.coefficients[0] = 1.0;
  for (int m = 1; m <= order; ++m) {
    const cplx f = eq.indicial(index + static_cast<double>(m));
    if (std::abs(f) <= 1e-12 * (scale + m * m)) {
      throw UnsupportedBranch("series_solution: index requires a logarithmic branch");
    }
    cplx acc{};
    for (int k = 1; k <= m; ++k) {
      acc += out.coefficients[m - k] *
             ((index + static_cast<double>(m - k)) * coeff(eq.a, k) + coeff(eq.b, k));
    }
    out.coefficients[m] = -acc / f;
  }
  return out;
}

cplx FrobeniusExpansion::regular_part(double s) const {
  return series::evaluate(std::span<const cplx>(coefficients), s);
}

cplx FrobeniusExpansion::regular_part_derivative(double s) const {
  return series::evaluate_derivative(std::span<const cplx>(coefficients), s);
}

cplx FrobeniusExpansion::value(double s) const { return std::pow(cplx(s), index) * regular_part(s); }

cplx FrobeniusExpansion::derivative(double s) const {
  const cplx sr = std::pow(cplx(s), index);
  return sr * (index / s * regular_part(s) + regular_part_derivative(s));
}

cplx FrobeniusExpansion::derivative_rho(double s) const {
  const cplx d = derivative(s);
  return base_point == 0.0 ? d : -d;
}

double FrobeniusExpansion::imaginary_defect() const {
  double m = std::abs(index.imag());
  for (const auto& c : coefficients) m = std::max(m, std::abs(c.imag()));
  return m;
}

}  // namespace wavemap::frobenius
