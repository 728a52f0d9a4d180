#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <utility>

#include "huygens/error.hpp"

namespace huygens {

enum class Fluid { Matter, Lambda };

inline std::string_view to_string(Fluid f) {
  return f == Fluid::Matter ? "matter" : "lambda";
}

/// Spatially flat FRW background driven by dust (w = 0) or a cosmological
/// constant (w = -1).
///
/// Matter: a(t) = (9 k1 t^2)^(1/3), eta(t) = (3t/k1)^(1/3), t > 0.
/// Lambda: a(t) = k2 exp(s t), eta(t) = -exp(-s t)/(s k2), s = sqrt|Lambda|.
struct CosmologyModel {
  Fluid kind = Fluid::Matter;
  double kappa1 = 0.25;
  double kappa2 = 1.0;
  double sqrt_lambda = 1.0;

  static CosmologyModel matter(double kappa1) {
    if (!(kappa1 > 0.0)) throw DomainError("matter model: kappa1 must be > 0");
    return {Fluid::Matter, kappa1, 1.0, 1.0};
  }
  static CosmologyModel lambda(double kappa2, double sqrt_lambda) {
    if (!(kappa2 > 0.0) || !(sqrt_lambda > 0.0)) {
      throw DomainError("lambda model: kappa2 and sqrt_lambda must be > 0");
    }
    return {Fluid::Lambda, 1.0, kappa2, sqrt_lambda};
  }

  bool in_domain(double t) const {
    return kind == Fluid::Lambda ? std::isfinite(t) : (t > 0.0 && std::isfinite(t));
  }
  bool in_conformal_range(double eta) const {
    return kind == Fluid::Matter ? eta > 0.0 && std::isfinite(eta)
                                 : eta < 0.0 && std::isfinite(eta);
  }

  friend bool operator==(const CosmologyModel&, const CosmologyModel&) = default;
};

namespace detail {
inline void require_domain(const CosmologyModel& m, double t, const char* op) {
  if (!m.in_domain(t)) {
    throw DomainError(std::string(op) + ": t=" + std::to_string(t) +
                      " outside the " + std::string(to_string(m.kind)) +
                      " domain");
  }
}
}  // namespace detail

inline double scale_factor(const CosmologyModel& m, double t) {
  detail::require_domain(m, t, "scale_factor");
  if (m.kind == Fluid::Matter) return std::cbrt(9.0 * m.kappa1 * t * t);
  return m.kappa2 * std::exp(m.sqrt_lambda * t);
}

/// d a / d t.
inline double scale_factor_rate(const CosmologyModel& m, double t) {
  const double a = scale_factor(m, t);
  return m.kind == Fluid::Matter ? a * 2.0 / (3.0 * t) : a * m.sqrt_lambda;
}

inline double conformal_time(const CosmologyModel& m, double t) {
  detail::require_domain(m, t, "conformal_time");
  if (m.kind == Fluid::Matter) return std::cbrt(3.0 * t / m.kappa1);
  return -std::exp(-m.sqrt_lambda * t) / (m.sqrt_lambda * m.kappa2);
}

/// Inverse of conformal_time.
inline double comoving_time(const CosmologyModel& m, double eta) {
  if (!m.in_conformal_range(eta)) {
    throw DomainError("comoving_time: eta=" + std::to_string(eta) +
                      " outside the " + std::string(to_string(m.kind)) +
                      " conformal range");
  }
  if (m.kind == Fluid::Matter) return m.kappa1 * eta * eta * eta / 3.0;
  return -std::log(-m.sqrt_lambda * m.kappa2 * eta) / m.sqrt_lambda;
}

/// a(t)|eta(t)|: the particle horizon 3t for matter, the (constant) event
/// horizon 1/sqrt|Lambda| for Lambda.
inline double horizon_scale(const CosmologyModel& m, double t) {
  detail::require_domain(m, t, "horizon_scale");
  return m.kind == Fluid::Matter ? 3.0 * t : 1.0 / m.sqrt_lambda;
}

inline double proper_distance(const CosmologyModel& m, double comoving,
                              double t) {
  if (comoving < 0.0) throw DomainError("proper_distance: R must be >= 0");
  return scale_factor(m, t) * comoving;
}

struct NormalizedPair {
  CosmologyModel matter;
  CosmologyModel lambda;
};

/// Matter and Lambda models with a(T) = 1 and equal expansion rates at the
/// anchor T. The matter rate is fixed at 2/(3T), so both rates equal 1 only
/// for T = 2/3 (k1 = 1/4, k2 = e^(-2/3), sqrt|Lambda| = 1).
inline NormalizedPair normalized_pair(double anchor) {
  if (!(anchor > 0.0)) throw DomainError("normalized_pair: anchor must be > 0");
  const double s = 2.0 / (3.0 * anchor);
  return {CosmologyModel::matter(1.0 / (9.0 * anchor * anchor)),
          CosmologyModel::lambda(std::exp(-s * anchor), s)};
}

/// Lambda model with a(anchor) = 1 and a chosen sqrt|Lambda|.
inline CosmologyModel normalized_lambda(double anchor, double sqrt_lambda) {
  return CosmologyModel::lambda(std::exp(-sqrt_lambda * anchor), sqrt_lambda);
}

}  // namespace huygens
