#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "huygens/error.hpp"

namespace huygens::numerics {

namespace detail {

inline constexpr double kCiSeriesLimit = 4.0;

// sum_{k>=1} (-z^2)^k / (2k (2k)!)
inline double ci_series_tail(double z) {
  const double z2 = z * z;
  double term = 1.0;  // (-z^2)^k / (2k)!
  double sum = 0.0;
  for (int k = 1; k < 60; ++k) {
    term *= -z2 / ((2.0 * k - 1.0) * (2.0 * k));
    const double add = term / (2.0 * k);
    sum += add;
    if (std::abs(add) < 1e-18 * std::max(1.0, std::abs(sum))) break;
  }
  return sum;
}

// E1(i z) for z > 0 by the modified Lentz continued fraction.
inline std::complex<double> e1_imaginary(double z) {
  using C = std::complex<double>;
  constexpr double tiny = 1e-300;
  C b(1.0, z);
  C c(1.0 / tiny, 0.0);
  C d = 1.0 / b;
  C h = d;
  for (int i = 2; i < 100000; ++i) {
    const double a = -static_cast<double>((i - 1) * (i - 1));
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const C del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) break;
  }
  return C(std::cos(z), -std::sin(z)) * h;
}

}  // namespace detail

/// Cosine integral Ci(z) = -int_z^inf cos(t)/t dt for z > 0.
///
/// Power series below z = 4, continued fraction for E1(iz) above; both
/// branches are accurate to roughly 1e-15 absolute.
inline double cosine_integral(double z) {
  if (!(z > 0.0)) throw DomainError("cosine_integral: z must be positive");
  if (z <= detail::kCiSeriesLimit) {
    return std::numbers::egamma + std::log(z) + detail::ci_series_tail(z);
  }
  return -detail::e1_imaginary(z).real();
}

/// Ci(hi) - Ci(lo) without the cancellation of the gamma + ln z terms.
inline double cosine_integral_difference(double lo, double hi) {
  if (!(lo > 0.0) || !(hi > 0.0)) {
    throw DomainError("cosine_integral_difference: arguments must be positive");
  }
  if (lo <= detail::kCiSeriesLimit && hi <= detail::kCiSeriesLimit) {
    return std::log(hi / lo) +
           (detail::ci_series_tail(hi) - detail::ci_series_tail(lo));
  }
  return cosine_integral(hi) - cosine_integral(lo);
}

}  // namespace huygens::numerics
