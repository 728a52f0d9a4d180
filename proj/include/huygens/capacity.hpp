#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "huygens/causality.hpp"
#include "huygens/signaling.hpp"

namespace huygens {

/// Leading-order capacity is flagged once it exceeds this many bits.
inline constexpr double kPerturbativeCapacityLimit = 0.1;

struct CapacityResult {
  double capacity_bits = 0.0;
  double s2_used = 0.0;
  double prefactor = 0.0;  // capacity_bits = prefactor * s2_used^2
  Method method = Method::Quadrature;
  double err_est = 0.0;
  std::vector<std::string> warnings;
};

/// Shannon capacity of the binary channel at leading order,
///   C = lambda_A^2 lambda_B^2 / (8 ln 2) * (S2 / (|alpha_B||beta_B|))^2.
inline CapacityResult channel_capacity(double s2, const DetectorState& bob_state,
                                       double coupling_a, double coupling_b,
                                       double s2_err = 0.0,
                                       Method method = Method::Quadrature) {
  const double coherence = bob_state.coherence();
  if (!(coherence > 0.0)) {
    throw DomainError("channel_capacity: Bob's state has no coherence "
                      "(|alpha_B||beta_B| = 0)");
  }
  CapacityResult r;
  const double couplings = coupling_a * coupling_a * coupling_b * coupling_b;
  r.prefactor = couplings / (8.0 * std::numbers::ln2 * coherence * coherence);
  r.s2_used = s2;
  r.capacity_bits = r.prefactor * s2 * s2;
  r.err_est = r.prefactor * (2.0 * std::abs(s2) * s2_err + s2_err * s2_err);
  r.method = method;
  if (r.capacity_bits > kPerturbativeCapacityLimit) {
    r.warnings.emplace_back(
        "capacity above 0.1 bits: leading-order expansion unreliable");
  }
  return r;
}

inline CapacityResult channel_capacity(const SignalingResult& s,
                                       const DetectorState& bob_state,
                                       double coupling_a, double coupling_b) {
  return channel_capacity(s.s2, bob_state, coupling_a, coupling_b, s.err_est,
                          s.method);
}

namespace detail {
inline CapacityResult capacity_from_i_theta(double i_theta,
                                            const DetectorConfig& alice,
                                            const DetectorConfig& bob) {
  return channel_capacity(i_theta / (4.0 * std::numbers::pi),
                          DetectorState::optimal_receiver(), alice.coupling,
                          bob.coupling, 0.0, Method::ClosedForm);
}
}  // namespace detail

/// Strict-timelike capacity in the matter universe with the optimal states.
/// Gapless detectors take the logarithmic branch; small_window uses the
/// D^4 cos^2 cos^2 / (TiA TiB)^2 approximation.
inline CapacityResult capacity_matter_closed(const DetectorConfig& alice,
                                             const DetectorConfig& bob,
                                             bool small_window = false) {
  return detail::capacity_from_i_theta(
      i_theta_closed_matter(alice, bob, small_window), alice, bob);
}

/// Strict-timelike capacity in the Lambda universe with the optimal states.
inline CapacityResult capacity_lambda_closed(const DetectorConfig& alice,
                                             const DetectorConfig& bob,
                                             double sqrt_lambda) {
  return detail::capacity_from_i_theta(
      i_theta_closed_lambda(alice, bob, sqrt_lambda), alice, bob);
}

struct Evaluation {
  SignalingResult signal;
  CapacityResult capacity;
};

/// Full pipeline for a detector pair: S2 (method dispatch as in s2) and the
/// resulting capacity, with validity warnings attached.
inline Evaluation evaluate(const CosmologyModel& model, const CommPair& pair,
                           const DetectorState& alice_state,
                           const DetectorState& bob_state,
                           const SignalingOptions& opts = {}) {
  Evaluation e;
  e.signal = s2(model, pair, alice_state, bob_state, opts);
  e.capacity = channel_capacity(e.signal, bob_state, pair.alice.coupling,
                                pair.bob.coupling);
  if (auto w = proper_separation_warning(pair)) e.capacity.warnings.push_back(*w);
  return e;
}

inline Evaluation evaluate(const CosmologyModel& model, const CommPair& pair,
                           const SignalingOptions& opts = {}) {
  return evaluate(model, pair, DetectorState::optimal_sender(),
                  DetectorState::optimal_receiver(), opts);
}

}  // namespace huygens
