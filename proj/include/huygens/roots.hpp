#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "huygens/error.hpp"

namespace huygens::numerics {

/// Root of f on [lo, hi] where f(lo) and f(hi) differ in sign.
///
/// Illinois-modified regula falsi, falling back to bisection whenever an
/// interpolation step fails to halve the bracket.
template <class F>
double find_root(F&& f, double lo, double hi, double abs_tol = 1e-12,
                 int max_iter = 500) {
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    throw DomainError("find_root: bracket does not change sign");
  }
  int side = 0;
  for (int iter = 0; iter < max_iter; ++iter) {
    const double width = hi - lo;
    if (std::abs(width) <= abs_tol) break;

    double x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    const bool interior = x > std::min(lo, hi) && x < std::max(lo, hi);
    if (!interior) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (fx == 0.0) return x;

    if (std::signbit(fx) == std::signbit(f_lo)) {
      lo = x;
      f_lo = fx;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = x;
      f_hi = fx;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
    if (std::abs(hi - lo) > 0.5 * std::abs(width)) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if (fm == 0.0) return mid;
      if (std::signbit(fm) == std::signbit(f_lo)) {
        lo = mid;
        f_lo = fm;
      } else {
        hi = mid;
        f_hi = fm;
      }
      side = 0;
    }
  }
  return 0.5 * (lo + hi);
}

/// Grows [lo, lo + step] geometrically until f changes sign. f is assumed
/// monotone increasing on the search range with f(lo) < 0.
template <class F>
std::pair<double, double> expand_bracket_upward(F&& f, double lo, double step,
                                                double factor = 2.0,
                                                int max_expansions = 200) {
  double a = lo;
  double b = lo + step;
  for (int i = 0; i < max_expansions; ++i) {
    const double fb = f(b);
    if (!std::isfinite(fb)) break;
    if (fb >= 0.0) return {a, b};
    a = b;
    step *= factor;
    b = a + step;
  }
  throw UnreachableError("expand_bracket_upward: no sign change found");
}

}  // namespace huygens::numerics
