#include "wavemap/gamma.hpp"

#include "wavemap/error.hpp"

#include <cmath>
#include <numbers>

namespace wavemap {

namespace {

using cd = std::complex<double>;

constexpr double stirling[10] = {1.0 / 12.0,         -1.0 / 360.0,         1.0 / 1260.0,     -1.0 / 1680.0,
                                 1.0 / 1188.0,       -691.0 / 360360.0,    1.0 / 156.0,      -3617.0 / 122400.0,
                                 43867.0 / 244188.0, -174611.0 / 125400.0};

cd log_gamma_right(cd z) {
  cd shift = 0.0;
  while (z.real() < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  const cd iz = 1.0 / z, iz2 = iz * iz;
  cd tail = 0.0, p = iz;
  for (double s : stirling) {
    tail += s * p;
    p *= iz2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + tail - shift;
}

// a logarithm of sin(pi z) for Im z >= 0, accurate near the real zeros and without overflow
cd log_sin_pi(cd z) {
  const double k = std::round(z.real());
  const cd w = z - k;
  const cd i(0.0, 1.0);
  const cd sign = i * (std::numbers::pi * k);
  if (w.imag() < 100.0) return std::log(std::sin(std::numbers::pi * w)) + sign;
  const cd e = std::exp(2.0 * std::numbers::pi * i * w);
  return -std::numbers::pi * i * w + std::log((e - 1.0) / (2.0 * i)) + sign;
}

}  // namespace

cd log_gamma_complex(cd z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InvalidArgument("log_gamma_complex: non-finite argument");
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
    throw GammaPole("Gamma has a pole at z = " + std::to_string(z.real()));
  }
  if (z.real() > 0.0) return log_gamma_right(z);
  if (z.imag() < 0.0) return std::conj(log_gamma_complex(std::conj(z)));
  return std::log(std::numbers::pi) - log_sin_pi(z) - log_gamma_right(1.0 - z);
}

cd gamma_complex(cd z) { return std::exp(log_gamma_complex(z)); }

}  // namespace wavemap
