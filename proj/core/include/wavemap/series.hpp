#pragma once

// Truncated power series arithmetic. A series is the coefficient vector
// a[0] + a[1] s + ... + a[K] s^K; every operation truncates at the length of
// its first argument.

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace wavemap::series {

template <class T>
using Series = std::vector<T>;

template <class T>
Series<T> multiply(std::span<const T> a, std::span<const T> b);

/// sin(a) and cos(a) of a series, via the coupled recursions
/// S' = C a', C' = -S a'.
template <class T>
std::pair<Series<T>, Series<T>> sin_cos(std::span<const T> a);

/// 1/a; requires a[0] != 0.
template <class T>
Series<T> reciprocal(std::span<const T> a);

/// Coefficients of (1 - s)^p truncated to `order` + 1 terms.
Series<double> binomial(double p, int order);

template <class T, class X>
auto evaluate(std::span<const T> a, X s) {
  decltype(T{} * s) acc{};
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * s + *it;
  return acc;
}

template <class T, class X>
auto evaluate_derivative(std::span<const T> a, X s) {
  decltype(T{} * s) acc{};
  for (std::size_t k = a.size(); k-- > 1;) acc = acc * s + static_cast<double>(k) * a[k];
  return acc;
}

template <class T>
Series<std::complex<double>> to_complex(std::span<const T> a) {
  return Series<std::complex<double>>(a.begin(), a.end());
}

}  // namespace wavemap::series
