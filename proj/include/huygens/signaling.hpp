#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "huygens/causality.hpp"
#include "huygens/cosmology.hpp"
#include "huygens/error.hpp"
#include "huygens/quadrature.hpp"
#include "huygens/special_functions.hpp"

namespace huygens {

/// Pure qubit state alpha |e> + beta |g>.
struct DetectorState {
  std::complex<double> alpha;
  std::complex<double> beta;

  DetectorState(std::complex<double> a, std::complex<double> b)
      : alpha(a), beta(b) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12) {
      throw DomainError("DetectorState: |alpha|^2 + |beta|^2 must equal 1");
    }
  }

  /// (|e> - |g>)/sqrt2, Alice's state maximizing the gapless signal.
  static DetectorState optimal_sender() {
    return {std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0};
  }
  /// (|e> + i|g>)/sqrt2, Bob's counterpart.
  static DetectorState optimal_receiver() {
    return {std::numbers::sqrt2 / 2.0,
            std::complex<double>(0.0, std::numbers::sqrt2 / 2.0)};
  }

  double coherence() const { return std::abs(alpha) * std::abs(beta); }

  bool approx_equal(const DetectorState& o, double tol = 1e-12) const {
    return std::abs(alpha - o.alpha) <= tol && std::abs(beta - o.beta) <= tol;
  }
};

enum class Method { ClosedForm, Quadrature };

inline std::string_view to_string(Method m) {
  return m == Method::ClosedForm ? "ClosedForm" : "Quadrature";
}

struct SignalingResult {
  double i_delta = 0.0;
  double i_theta = 0.0;
  double s2 = 0.0;
  CausalClass causal_class = CausalClass::B1_Spacelike;
  double err_est = 0.0;
  Method method = Method::Quadrature;
};

struct SignalingOptions {
  std::optional<Method> force;
  numerics::QuadratureSpec quad{1e-12, 1e-20, 20000};
};

namespace detail {

inline numerics::QuadratureResult product(const numerics::QuadratureResult& a,
                                          const numerics::QuadratureResult& b) {
  return {a.value * b.value,
          std::abs(a.value) * b.err_est + std::abs(b.value) * a.err_est +
              a.err_est * b.err_est};
}

// Conformal-time points where Omega t crosses a multiple of 2 pi, for a
// window given in conformal time.
inline std::vector<double> conformal_oscillation_breaks(
    const CosmologyModel& model, double eta_lo, double eta_hi, double omega,
    double shift = 0.0) {
  std::vector<double> out;
  if (!(eta_hi > eta_lo)) return out;
  const double t_lo = comoving_time(model, eta_lo - shift);
  const double t_hi = comoving_time(model, eta_hi - shift);
  for (double t : numerics::oscillation_breakpoints(t_lo, t_hi, omega)) {
    out.push_back(conformal_time(model, t) + shift);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Closed forms in the strict timelike regime.

/// Matter-universe window factor (1/3)[Ci(Omega(T+D)) - Ci(Omega T)], or
/// (1/3) ln((T+D)/T) for a gapless detector; small_window selects the
/// leading term (D/3) cos(Omega T)/T.
inline double matter_window_factor(const DetectorConfig& d,
                                   bool small_window = false) {
  if (!(d.switch_on > 0.0)) {
    throw DomainError("matter closed form requires T > 0");
  }
  if (d.gap < 0.0) throw DomainError("detector gap must be >= 0");
  if (small_window) {
    return d.duration * std::cos(d.gap * d.switch_on) / (3.0 * d.switch_on);
  }
  if (d.gap == 0.0) return std::log1p(d.duration / d.switch_on) / 3.0;
  return numerics::cosine_integral_difference(d.gap * d.switch_on,
                                              d.gap * d.switch_off()) /
         3.0;
}

/// Lambda-universe window factor
/// (2 sqrt|L| / Omega) sin(Omega D / 2) cos(Omega (T + D/2)), or sqrt|L| D
/// for a gapless detector.
inline double lambda_window_factor(const DetectorConfig& d, double sqrt_lambda) {
  if (d.gap < 0.0) throw DomainError("detector gap must be >= 0");
  if (d.gap == 0.0) return sqrt_lambda * d.duration;
  return 2.0 * sqrt_lambda / d.gap * std::sin(0.5 * d.gap * d.duration) *
         std::cos(d.gap * (d.switch_on + 0.5 * d.duration));
}

/// I_theta in the matter universe for strictly timelike windows.
inline double i_theta_closed_matter(const DetectorConfig& alice,
                                    const DetectorConfig& bob,
                                    bool small_window = false) {
  return matter_window_factor(alice, small_window) *
         matter_window_factor(bob, small_window);
}

/// I_theta in the Lambda universe for strictly timelike windows:
/// 4|L|/(Oa Ob) sin(Oa D/2) sin(Ob D/2) cos(Oa(TiA + D/2)) cos(Ob(TiB + D/2)).
inline double i_theta_closed_lambda(const DetectorConfig& alice,
                                    const DetectorConfig& bob,
                                    double sqrt_lambda) {
  if (!(sqrt_lambda > 0.0)) throw DomainError("sqrt_lambda must be > 0");
  return lambda_window_factor(alice, sqrt_lambda) *
         lambda_window_factor(bob, sqrt_lambda);
}

inline double i_theta_closed(const CosmologyModel& model,
                             const DetectorConfig& alice,
                             const DetectorConfig& bob) {
  return model.kind == Fluid::Matter
             ? i_theta_closed_matter(alice, bob)
             : i_theta_closed_lambda(alice, bob, model.sqrt_lambda);
}

// ---------------------------------------------------------------------------
// Quadrature.

/// int_{T}^{T+D} cos(Omega t) / (a(t)|eta(t)|) dt.
inline numerics::QuadratureResult window_factor_quadrature(
    const CosmologyModel& model, const DetectorConfig& d,
    const numerics::QuadratureSpec& spec = {}) {
  auto f = [&](double t) {
    double horizon = scale_factor(model, t) * std::abs(conformal_time(model, t));
    if (!std::isfinite(horizon) || horizon == 0.0) horizon = horizon_scale(model, t);
    return std::cos(d.gap * t) / horizon;
  };
  return numerics::integrate_1d(
      f, d.switch_on, d.switch_off(), spec,
      numerics::oscillation_breakpoints(d.switch_on, d.switch_off(), d.gap));
}

/// Light-cone contribution
/// I_delta = (1/R) int_{eta_iB}^{eta_fB} chi_A(eta - R) cos(Ob t(eta))
///           cos(Oa t(eta - R)) d eta.
inline numerics::QuadratureResult i_delta(const CosmologyModel& model,
                                          const CommPair& pair,
                                          const numerics::QuadratureSpec& spec = {}) {
  const auto w = conformal_windows(model, pair);
  const double R = comoving_separation(model, pair);
  const double lo = std::max(w.bob_on, w.alice_on + R);
  const double hi = std::min(w.bob_off, w.alice_off + R);
  if (!(hi > lo)) return {0.0, 0.0};
  if (R == 0.0) {
    throw DomainError("i_delta: coincident worldlines with lightlike overlap");
  }
  auto f = [&](double eta) {
    return std::cos(pair.bob.gap * comoving_time(model, eta)) *
           std::cos(pair.alice.gap * comoving_time(model, eta - R)) / R;
  };
  auto breaks = detail::conformal_oscillation_breaks(model, lo, hi, pair.bob.gap);
  const auto more =
      detail::conformal_oscillation_breaks(model, lo, hi, pair.alice.gap, R);
  breaks.insert(breaks.end(), more.begin(), more.end());
  return numerics::integrate_1d(f, lo, hi, spec, breaks);
}

/// Timelike-interior contribution over the theta-clipped region
/// { eta_iA <= eta1 <= min(eta_fA, eta2 - R), eta_iB <= eta2 <= eta_fB }
/// of cos(Oa t(eta1)) cos(Ob t(eta2)) / |eta1 eta2|.
inline numerics::QuadratureResult i_theta_clipped(
    const CosmologyModel& model, const CommPair& pair,
    const numerics::QuadratureSpec& spec = {}) {
  const auto w = conformal_windows(model, pair);
  const double R = comoving_separation(model, pair);
  auto f = [&](double eta1, double eta2) {
    return std::cos(pair.alice.gap * comoving_time(model, eta1)) /
           std::abs(eta1) *
           std::cos(pair.bob.gap * comoving_time(model, eta2)) / std::abs(eta2);
  };
  std::vector<double> outer_breaks{w.alice_on + R, w.alice_off + R};
  const auto osc =
      detail::conformal_oscillation_breaks(model, w.bob_on, w.bob_off, pair.bob.gap);
  outer_breaks.insert(outer_breaks.end(), osc.begin(), osc.end());
  const double alice_off = w.alice_off;
  std::function<double(double)> upper = [alice_off, R](double eta2) {
    return std::min(alice_off, eta2 - R);
  };
  std::function<std::vector<double>(double, double)> inner_breaks =
      [&](double lo, double hi) {
        return detail::conformal_oscillation_breaks(model, lo, hi,
                                                    pair.alice.gap);
      };
  // Split the outer range so that no segment starts before the clip opens.
  const double outer_lo = std::max(w.bob_on, w.alice_on + R);
  if (!(w.bob_off > outer_lo)) return {0.0, 0.0};
  return numerics::integrate_2d_clipped(f, outer_lo, w.bob_off, upper,
                                        w.alice_on, spec, outer_breaks,
                                        inner_breaks);
}

enum class ThetaPath { Auto, Factorized, Clipped2D };

/// I_theta by quadrature. In the strict timelike regime the region is a
/// rectangle and Auto integrates the two comoving-time factors separately.
inline numerics::QuadratureResult i_theta(const CosmologyModel& model,
                                          const CommPair& pair,
                                          const numerics::QuadratureSpec& spec = {},
                                          ThetaPath path = ThetaPath::Auto) {
  const CausalClass cls = classify(model, pair);
  if (cls == CausalClass::B1_Spacelike) return {0.0, 0.0};
  const bool factorize =
      path == ThetaPath::Factorized ||
      (path == ThetaPath::Auto && cls == CausalClass::B5_StrictTimelike);
  if (factorize) {
    if (cls != CausalClass::B5_StrictTimelike) {
      throw DomainError("i_theta: factorized path requires strict timelike "
                        "separation");
    }
    return detail::product(window_factor_quadrature(model, pair.alice, spec),
                           window_factor_quadrature(model, pair.bob, spec));
  }
  return i_theta_clipped(model, pair, spec);
}

// ---------------------------------------------------------------------------
// Signaling estimator.

/// S2 for arbitrary pure detector states by direct quadrature over the
/// detectors' switching windows in comoving time,
///   S2 = 4 int dt int dt' Re(a_A* b_A e^{i Oa t}) Re(a_B* b_B e^{i Ob t'} i c),
/// with the light-cone delta consumed analytically. Only the retarded
/// support (Bob in Alice's causal future) contributes.
inline SignalingResult s2_general(const CosmologyModel& model,
                                  const CommPair& pair,
                                  const DetectorState& alice_state,
                                  const DetectorState& bob_state,
                                  const numerics::QuadratureSpec& spec = {}) {
  const auto w = conformal_windows(model, pair);
  const double R = comoving_separation(model, pair);
  SignalingResult out;
  out.causal_class = classify(w, R);
  out.method = Method::Quadrature;

  const std::complex<double> i(0.0, 1.0);
  const auto amp_a = std::conj(alice_state.alpha) * alice_state.beta;
  const auto amp_b = i * std::conj(bob_state.alpha) * bob_state.beta;
  auto alice_weight = [&](double t) {
    return std::real(amp_a * std::polar(1.0, pair.alice.gap * t));
  };
  auto bob_weight = [&](double t) {
    return std::real(amp_b * std::polar(1.0, pair.bob.gap * t));
  };

  // Past-cone event on Alice's worldline: t(eta(t') - R), if it exists.
  auto alice_retarded = [&](double t_bob) {
    const double eta = conformal_time(model, t_bob) - R;
    if (!model.in_conformal_range(eta)) {
      return -std::numeric_limits<double>::infinity();
    }
    return comoving_time(model, eta);
  };

  // Timelike interior.
  auto theta_integrand = [&](double t, double t_bob) {
    return alice_weight(t) / horizon_scale(model, t) * bob_weight(t_bob) /
           horizon_scale(model, t_bob) / std::numbers::pi;
  };
  const double alice_on = pair.alice.switch_on;
  const double alice_off = pair.alice.switch_off();
  std::function<double(double)> upper = [&](double t_bob) {
    return std::min(alice_off, alice_retarded(t_bob));
  };
  std::vector<double> outer_breaks;
  for (double eta : {w.alice_on + R, w.alice_off + R}) {
    if (model.in_conformal_range(eta)) outer_breaks.push_back(comoving_time(model, eta));
  }
  const auto osc = numerics::oscillation_breakpoints(
      pair.bob.switch_on, pair.bob.switch_off(), pair.bob.gap);
  outer_breaks.insert(outer_breaks.end(), osc.begin(), osc.end());
  const double gap_a = pair.alice.gap;
  std::function<std::vector<double>(double, double)> inner_breaks =
      [gap_a](double lo, double hi) {
        return numerics::oscillation_breakpoints(lo, hi, gap_a);
      };
  const double outer_lo = std::max(
      pair.bob.switch_on, model.in_conformal_range(w.alice_on + R)
                              ? comoving_time(model, w.alice_on + R)
                              : pair.bob.switch_off());
  numerics::QuadratureResult theta{0.0, 0.0};
  if (pair.bob.switch_off() > outer_lo) {
    theta = numerics::integrate_2d_clipped(theta_integrand, outer_lo,
                                           pair.bob.switch_off(), upper,
                                           alice_on, spec, outer_breaks,
                                           inner_breaks);
  }

  // Light cone: 1/(pi R) int dt' chi_A(t_-) Re_A(t_-) Re_B(t') / a(t').
  numerics::QuadratureResult delta{0.0, 0.0};
  const double band_lo = std::max(w.bob_on, w.alice_on + R);
  const double band_hi = std::min(w.bob_off, w.alice_off + R);
  if (band_hi > band_lo) {
    if (R == 0.0) {
      throw DomainError("s2_general: coincident worldlines with lightlike "
                        "overlap");
    }
    auto f = [&](double t_bob) {
      const double t_alice = alice_retarded(t_bob);
      return alice_weight(t_alice) * bob_weight(t_bob) /
             (scale_factor(model, t_bob) * std::numbers::pi * R);
    };
    const double lo = comoving_time(model, band_lo);
    const double hi = comoving_time(model, band_hi);
    auto breaks = numerics::oscillation_breakpoints(lo, hi, pair.bob.gap);
    const auto more = detail::conformal_oscillation_breaks(
        model, band_lo, band_hi, pair.alice.gap, R);
    for (double eta : more) breaks.push_back(comoving_time(model, eta));
    delta = numerics::integrate_1d(f, lo, hi, spec, breaks);
  }

  // Report in the I_delta / I_theta normalization (S2 = (Id + It) / 4 pi).
  out.i_delta = 4.0 * std::numbers::pi * delta.value;
  out.i_theta = 4.0 * std::numbers::pi * theta.value;
  out.s2 = delta.value + theta.value;
  out.err_est = delta.err_est + theta.err_est;
  return out;
}

/// S2 with method dispatch. The optimal states reduce S2 to
/// (I_delta + I_theta) / 4 pi, evaluated in closed form for strictly
/// timelike windows unless quadrature is forced; other states use
/// s2_general. A forced closed form falls back to quadrature outside B5.
inline SignalingResult s2(const CosmologyModel& model, const CommPair& pair,
                          const DetectorState& alice_state,
                          const DetectorState& bob_state,
                          const SignalingOptions& opts = {}) {
  const bool optimal =
      alice_state.approx_equal(DetectorState::optimal_sender()) &&
      bob_state.approx_equal(DetectorState::optimal_receiver());
  if (!optimal) return s2_general(model, pair, alice_state, bob_state, opts.quad);

  SignalingResult out;
  out.causal_class = classify(model, pair);
  const bool closed = out.causal_class == CausalClass::B5_StrictTimelike &&
                      opts.force != Method::Quadrature;
  if (closed) {
    out.method = Method::ClosedForm;
    out.i_delta = 0.0;
    out.i_theta = i_theta_closed(model, pair.alice, pair.bob);
    out.err_est = 64.0 * std::numeric_limits<double>::epsilon() *
                  std::abs(out.i_theta) / (4.0 * std::numbers::pi);
  } else {
    out.method = Method::Quadrature;
    const auto d = i_delta(model, pair, opts.quad);
    const auto t = i_theta(model, pair, opts.quad);
    out.i_delta = d.value;
    out.i_theta = t.value;
    out.err_est = (d.err_est + t.err_est) / (4.0 * std::numbers::pi);
  }
  out.s2 = (out.i_delta + out.i_theta) / (4.0 * std::numbers::pi);
  return out;
}

}  // namespace huygens
