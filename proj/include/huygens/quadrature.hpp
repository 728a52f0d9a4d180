#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <queue>
#include <vector>

#include "huygens/error.hpp"

namespace huygens::numerics {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::size_t max_subdivisions = 10000;
};

struct QuadratureResult {
  double value = 0.0;
  double err_est = 0.0;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208541493240, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes.
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double lo;
  double hi;
  double value;
  double err;
  std::size_t serial;
};

struct SegmentOrder {
  bool operator()(const Segment& a, const Segment& b) const {
    if (a.err != b.err) return a.err < b.err;
    return a.serial > b.serial;
  }
};

template <class F>
Segment gauss_kronrod_21(F& f, double lo, double hi, std::size_t serial) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[10];
  double gauss = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {lo, hi, kronrod, std::abs(kronrod - gauss), serial};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (G10/K21) quadrature of f over [a, b].
///
/// `breakpoints` seeds the initial partition (points outside (a, b) are
/// ignored). The error estimate is the raw |K21 - G10| summed over segments,
/// which is conservative for smooth integrands. Throws ConvergenceError with
/// the best estimate when the segment budget is exhausted.
template <class F>
QuadratureResult integrate_1d(F&& f, double a, double b,
                              const QuadratureSpec& spec = {},
                              const std::vector<double>& breakpoints = {}) {
  if (a == b) return {0.0, 0.0};
  if (a > b) throw DomainError("integrate_1d: requires a <= b");

  std::vector<double> edges{a};
  for (double p : breakpoints) {
    if (p > a && p < b) edges.push_back(p);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<detail::Segment, std::vector<detail::Segment>,
                      detail::SegmentOrder>
      queue;
  std::vector<detail::Segment> frozen;  // too narrow to bisect further
  std::size_t serial = 0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    queue.push(detail::gauss_kronrod_21(f, edges[i], edges[i + 1], serial++));
  }

  auto totals = [&]() {
    QuadratureResult r;
    auto copy = queue;
    while (!copy.empty()) {
      r.value += copy.top().value;
      r.err_est += copy.top().err;
      copy.pop();
    }
    for (const auto& s : frozen) {
      r.value += s.value;
      r.err_est += s.err;
    }
    return r;
  };

  double value = 0.0;
  double err = 0.0;
  {
    const auto r = totals();
    value = r.value;
    err = r.err_est;
  }
  std::size_t segments = queue.size();
  while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) {
    if (queue.empty()) {
      throw ConvergenceError("integrate_1d: roundoff limit reached", value,
                             err);
    }
    if (segments >= spec.max_subdivisions) {
      throw ConvergenceError("integrate_1d: subdivision limit reached", value,
                             err);
    }
    const detail::Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      frozen.push_back(worst);
      continue;
    }
    const auto left = detail::gauss_kronrod_21(f, worst.lo, mid, serial++);
    const auto right = detail::gauss_kronrod_21(f, mid, worst.hi, serial++);
    value += left.value + right.value - worst.value;
    err += left.err + right.err - worst.err;
    queue.push(left);
    queue.push(right);
    ++segments;
    // Re-sum periodically so running totals do not drift.
    if (segments % 64 == 0) {
      const auto r = totals();
      value = r.value;
      err = r.err_est;
    }
  }
  return totals();
}

/// Points where the phase omega * t crosses a multiple of 2 pi inside
/// (lo, hi). Empty when the interval spans less than one period.
inline std::vector<double> oscillation_breakpoints(double lo, double hi,
                                                   double omega,
                                                   std::size_t max_points =
                                                       100000) {
  std::vector<double> points;
  const double w = std::abs(omega);
  if (!(hi > lo) || w * (hi - lo) <= 2.0 * std::numbers::pi) return points;
  const double period = 2.0 * std::numbers::pi / w;
  for (double j = std::floor(lo / period) + 1.0;
       j * period < hi && points.size() < max_points; j += 1.0) {
    points.push_back(j * period);
  }
  return points;
}

/// Iterated adaptive quadrature of f(x, y) over
/// { y in [outer_lo, outer_hi], x in [inner_lo(y), inner_hi(y)] }.
///
/// Rows with inner_hi(y) <= inner_lo(y) contribute zero. `outer_breaks`
/// must contain every y at which either inner limit changes branch, and
/// `inner_breaks(lo, hi)` may return extra split points for each row.
template <class F>
QuadratureResult integrate_2d(
    F&& f, double outer_lo, double outer_hi,
    const std::function<double(double)>& inner_lo,
    const std::function<double(double)>& inner_hi,
    const QuadratureSpec& spec = {},
    const std::vector<double>& outer_breaks = {},
    const std::function<std::vector<double>(double, double)>& inner_breaks =
        {}) {
  QuadratureSpec inner_spec = spec;
  inner_spec.rel_tol = 0.1 * spec.rel_tol;
  inner_spec.abs_tol =
      0.1 * spec.abs_tol / std::max(1.0, std::abs(outer_hi - outer_lo));
  double inner_err_max = 0.0;
  auto row = [&](double y) {
    const double lo = inner_lo(y);
    const double hi = inner_hi(y);
    if (!(hi > lo)) return 0.0;
    auto fy = [&](double x) { return f(x, y); };
    const auto r = integrate_1d(fy, lo, hi, inner_spec,
                                inner_breaks ? inner_breaks(lo, hi)
                                             : std::vector<double>{});
    inner_err_max = std::max(inner_err_max, r.err_est);
    return r.value;
  };
  auto outer = integrate_1d(row, outer_lo, outer_hi, spec, outer_breaks);
  outer.err_est += inner_err_max * std::abs(outer_hi - outer_lo);
  return outer;
}

/// integrate_2d with a fixed lower inner limit and a clipped upper limit.
template <class F>
QuadratureResult integrate_2d_clipped(
    F&& f, double outer_lo, double outer_hi,
    const std::function<double(double)>& inner_hi, double inner_lo,
    const QuadratureSpec& spec = {},
    const std::vector<double>& outer_breaks = {},
    const std::function<std::vector<double>(double, double)>& inner_breaks =
        {}) {
  return integrate_2d(
      std::forward<F>(f), outer_lo, outer_hi,
      [inner_lo](double) { return inner_lo; }, inner_hi, spec, outer_breaks,
      inner_breaks);
}

}  // namespace huygens::numerics
