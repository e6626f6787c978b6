#pragma once

#include <complex>

namespace wavemap {

/// A logarithm of Gamma(z), the principal branch for Re z > 0:
/// Stirling series after shifting Re z >= 15, reflection for Re z <= 0.
/// Throws GammaPole at z = 0, -1, -2, ...
std::complex<double> log_gamma_complex(std::complex<double> z);

std::complex<double> gamma_complex(std::complex<double> z);

}  // namespace wavemap
