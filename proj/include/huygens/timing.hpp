#pragma once

#include <algorithm>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "huygens/causality.hpp"
#include "huygens/config.hpp"
#include "huygens/cosmology.hpp"

namespace huygens::timing {

/// A timing value, or the reason it does not exist.
struct TimingValue {
  std::optional<double> value;
  std::string reason;
};

struct ModelTiming {
  CosmologyModel model;
  TimingValue t_min_comoving;  // earliest strict-timelike T_iB at fixed R
  TimingValue t_min_proper;    // same at fixed proper separation P
  TimingValue r_max;           // largest strict-timelike R at the given T_iB
};

struct ScaleFactorSamples {
  std::vector<double> t;
  std::vector<double> matter;
  std::vector<double> lambda;
};

struct TimingReport {
  double anchor = 0.0;
  double alice_switch_on = 0.0;
  double duration = 0.0;
  double separation = 0.0;  // used both as R and as P
  double bob_switch_on = 0.0;
  ModelTiming matter;
  ModelTiming lambda;
  ScaleFactorSamples samples;
};

namespace detail {
template <class F>
TimingValue guarded(F&& f) {
  try {
    return {f(), {}};
  } catch (const std::exception& e) {
    return {std::nullopt, e.what()};
  }
}

inline ModelTiming model_timing(const CosmologyModel& m, const config::RunConfig& c) {
  const double on = c.alice.switch_on;
  const double d = c.alice.duration;
  const double sep = c.separation;
  return {m,
          guarded([&] { return min_timelike_switch_on_comoving(m, on, d, sep); }),
          guarded([&] { return min_timelike_switch_on_proper(m, on, d, sep); }),
          guarded([&] {
            return max_timelike_comoving_separation(m, on, d, c.bob.switch_on);
          })};
}
}  // namespace detail

/// Earliest-contact times for both normalized models plus a(t) samples.
inline TimingReport timing_report(const config::RunConfig& c,
                                  std::size_t n_samples = 200) {
  config::validate(c);
  TimingReport r;
  r.anchor = c.anchor;
  r.alice_switch_on = c.alice.switch_on;
  r.duration = c.alice.duration;
  r.separation = c.separation;
  r.bob_switch_on = c.bob.switch_on;
  const auto pair = normalized_pair(c.anchor);
  r.matter = detail::model_timing(pair.matter, c);
  r.lambda = detail::model_timing(normalized_lambda(c.anchor, c.sqrt_lambda), c);

  const double t_lo = c.anchor / 20.0;
  const double t_hi = std::max(3.0 * c.anchor, 1.5 * c.bob.switch_on);
  n_samples = std::max<std::size_t>(n_samples, 2);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double t = t_lo + (t_hi - t_lo) * static_cast<double>(i) /
                                static_cast<double>(n_samples - 1);
    r.samples.t.push_back(t);
    r.samples.matter.push_back(scale_factor(r.matter.model, t));
    r.samples.lambda.push_back(scale_factor(r.lambda.model, t));
  }
  return r;
}

}  // namespace huygens::timing
