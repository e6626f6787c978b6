#include "wavemap/series.hpp"

#include "wavemap/error.hpp"

#include <algorithm>
#include <cmath>

namespace wavemap::series {

template <class T>
Series<T> multiply(std::span<const T> a, std::span<const T> b) {
  Series<T> out(a.size(), T{});
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size() && i + j < out.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

template <class T>
std::pair<Series<T>, Series<T>> sin_cos(std::span<const T> a) {
  const std::size_t n = a.size();
  Series<T> s(n, T{}), c(n, T{});
  if (n == 0) return {s, c};
  s[0] = std::sin(a[0]);
  c[0] = std::cos(a[0]);
  // k s_k = sum_{j=1}^{k} j a_j c_{k-j},  k c_k = -sum_{j=1}^{k} j a_j s_{k-j}
  for (std::size_t k = 1; k < n; ++k) {
    T sk{}, ck{};
    for (std::size_t j = 1; j <= k; ++j) {
      const T ja = static_cast<double>(j) * a[j];
      sk += ja * c[k - j];
      ck -= ja * s[k - j];
    }
    s[k] = sk / static_cast<double>(k);
    c[k] = ck / static_cast<double>(k);
  }
  return {s, c};
}

template <class T>
Series<T> reciprocal(std::span<const T> a) {
  if (a.empty() || a[0] == T{}) throw InvalidArgument("series reciprocal: zero constant term");
  Series<T> r(a.size(), T{});
  r[0] = T{1} / a[0];
  for (std::size_t k = 1; k < a.size(); ++k) {
    T acc{};
    for (std::size_t j = 1; j <= k; ++j) acc += a[j] * r[k - j];
    r[k] = -acc / a[0];
  }
  return r;
}

Series<double> binomial(double p, int order) {
  Series<double> out(static_cast<std::size_t>(std::max(order, 0)) + 1, 0.0);
  out[0] = 1.0;
  for (std::size_t k = 1; k < out.size(); ++k) {
    out[k] = -out[k - 1] * (p - static_cast<double>(k - 1)) / static_cast<double>(k);
  }
  return out;
}

template Series<double> multiply(std::span<const double>, std::span<const double>);
template Series<std::complex<double>> multiply(std::span<const std::complex<double>>,
                                               std::span<const std::complex<double>>);
template std::pair<Series<double>, Series<double>> sin_cos(std::span<const double>);
template Series<double> reciprocal(std::span<const double>);
template Series<std::complex<double>> reciprocal(std::span<const std::complex<double>>);

}  // namespace wavemap::series
