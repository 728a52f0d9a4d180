#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "huygens/cosmology.hpp"
#include "huygens/error.hpp"
#include "huygens/roots.hpp"

namespace huygens {

/// One comoving point-like detector switched on suddenly over
/// [switch_on, switch_on + duration].
struct DetectorConfig {
  double gap = 0.0;       // Omega, energy gap (1/time)
  double coupling = 1.0;  // lambda
  double switch_on = 0.0;
  double duration = 0.01;

  double switch_off() const { return switch_on + duration; }
  bool switched_on_at(double t) const {
    return t >= switch_on && t <= switch_off();
  }

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

struct ComovingSeparation {
  double value = 0.0;
};

/// Proper separation P measured at Bob's switch-on time.
struct ProperSeparation {
  double value = 0.0;
};

using Separation = std::variant<ComovingSeparation, ProperSeparation>;

struct CommPair {
  DetectorConfig alice;
  DetectorConfig bob;
  Separation separation = ComovingSeparation{0.0};
};

enum class CausalClass {
  B1_Spacelike,
  B2_EnterLightcone,
  B3_StraddleLightcone,
  B4_LightAndTimelike,
  B5_StrictTimelike,
};

inline std::string_view to_string(CausalClass c) {
  switch (c) {
    case CausalClass::B1_Spacelike: return "B1_Spacelike";
    case CausalClass::B2_EnterLightcone: return "B2_EnterLightcone";
    case CausalClass::B3_StraddleLightcone: return "B3_StraddleLightcone";
    case CausalClass::B4_LightAndTimelike: return "B4_LightAndTimelike";
    case CausalClass::B5_StrictTimelike: return "B5_StrictTimelike";
  }
  return "unknown";
}

/// Conformal endpoints of both switching windows.
struct ConformalWindows {
  double alice_on;
  double alice_off;
  double bob_on;
  double bob_off;
};

inline ConformalWindows conformal_windows(const CosmologyModel& model,
                                          const CommPair& pair) {
  if (!(pair.alice.duration > 0.0) || !(pair.bob.duration > 0.0)) {
    throw DomainError("detector duration must be positive");
  }
  return {conformal_time(model, pair.alice.switch_on),
          conformal_time(model, pair.alice.switch_off()),
          conformal_time(model, pair.bob.switch_on),
          conformal_time(model, pair.bob.switch_off())};
}

/// R = P / a(T_iB).
inline double comoving_from_proper(const CosmologyModel& model, double proper,
                                   double bob_switch_on) {
  if (proper < 0.0) throw DomainError("comoving_from_proper: P must be >= 0");
  return proper / scale_factor(model, bob_switch_on);
}

/// Comoving separation used by every capacity computation.
inline double comoving_separation(const CosmologyModel& model,
                                  const CommPair& pair) {
  if (const auto* r = std::get_if<ComovingSeparation>(&pair.separation)) {
    if (r->value < 0.0) throw DomainError("comoving separation must be >= 0");
    return r->value;
  }
  return comoving_from_proper(model, std::get<ProperSeparation>(pair.separation).value,
                              pair.bob.switch_on);
}

/// Set when a constant-proper-separation pair violates
/// Delta << T_iB - T_fA (threshold Delta > 0.01 (T_iB - T_fA)).
inline std::optional<std::string> proper_separation_warning(
    const CommPair& pair) {
  if (!std::holds_alternative<ProperSeparation>(pair.separation)) {
    return std::nullopt;
  }
  const double wait = pair.bob.switch_on - pair.alice.switch_off();
  const double window = std::max(pair.alice.duration, pair.bob.duration);
  if (!(wait > 0.0) || window > 0.01 * wait) {
    return "constant proper separation approximation needs duration << "
           "T_iB - T_fA";
  }
  return std::nullopt;
}

/// Causal class from the conformal windows and comoving separation.
/// Exact light-cone contact resolves to the lightlike classes.
inline CausalClass classify(const ConformalWindows& w, double comoving) {
  const double band_lo = w.alice_on + comoving;
  const double band_hi = w.alice_off + comoving;
  if (w.bob_on > band_hi) return CausalClass::B5_StrictTimelike;
  if (w.bob_off < band_lo) return CausalClass::B1_Spacelike;
  if (w.bob_on < band_lo) {
    return w.bob_off <= band_hi ? CausalClass::B2_EnterLightcone
                                : CausalClass::B3_StraddleLightcone;
  }
  return CausalClass::B4_LightAndTimelike;
}

inline CausalClass classify(const CosmologyModel& model, const CommPair& pair) {
  return classify(conformal_windows(model, pair),
                  comoving_separation(model, pair));
}

/// Earliest Bob switch-on with strict timelike contact at fixed comoving R.
inline double min_timelike_switch_on_comoving(const CosmologyModel& model,
                                              double alice_on, double duration,
                                              double comoving) {
  if (comoving < 0.0) throw DomainError("separation must be >= 0");
  const double eta = conformal_time(model, alice_on + duration) + comoving;
  if (!model.in_conformal_range(eta)) {
    throw UnreachableError(
        "no strict timelike contact: separation exceeds the event horizon");
  }
  return comoving_time(model, eta);
}

/// Largest comoving separation with strict timelike contact for a given
/// Bob switch-on time.
inline double max_timelike_comoving_separation(const CosmologyModel& model,
                                               double alice_on, double duration,
                                               double bob_on) {
  if (!(bob_on > alice_on + duration)) {
    throw DomainError("max_timelike_comoving_separation: Bob must switch on "
                      "after Alice switches off");
  }
  return conformal_time(model, bob_on) -
         conformal_time(model, alice_on + duration);
}

/// Earliest Bob switch-on with strict timelike contact when the proper
/// separation P at that instant is held fixed:
/// eta(T) = eta(T_fA) + P / a(T), solved by bracketed root finding.
inline double min_timelike_switch_on_proper(const CosmologyModel& model,
                                            double alice_on, double duration,
                                            double proper) {
  if (proper < 0.0) throw DomainError("separation must be >= 0");
  const double alice_off = alice_on + duration;
  if (proper == 0.0) return alice_off;
  const double eta_off = conformal_time(model, alice_off);
  auto residual = [&](double t) {
    return conformal_time(model, t) - eta_off - proper / scale_factor(model, t);
  };
  const double horizon =
      model.kind == Fluid::Lambda ? 1.0 / model.sqrt_lambda : 1.0;
  const double step = 10.0 * (1.0 + proper) * (1.0 + horizon);
  const auto [lo, hi] =
      numerics::expand_bracket_upward(residual, alice_off, step);
  return numerics::find_root(residual, lo, hi, 1e-12);
}

}  // namespace huygens
