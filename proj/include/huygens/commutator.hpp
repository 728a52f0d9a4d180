#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "huygens/cosmology.hpp"
#include "huygens/error.hpp"
#include "huygens/quadrature.hpp"

namespace huygens {

struct SpacetimeEvent {
  double t = 0.0;
  std::array<double, 3> position{0.0, 0.0, 0.0};
};

inline double comoving_distance(const SpacetimeEvent& a,
                                const SpacetimeEvent& b) {
  const double dx = a.position[0] - b.position[0];
  const double dy = a.position[1] - b.position[1];
  const double dz = a.position[2] - b.position[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Light-cone part of <[phi(x), phi(x')]> = i * (...): the coefficient of
/// delta(deta + R) is strength_plus, that of delta(deta - R) strength_minus.
struct DeltaPart {
  double strength_plus;
  double strength_minus;
  double support_plus;   // deta = -R
  double support_minus;  // deta = +R
};

/// <[phi(x), phi(x')]> / i split into its timelike interior and light-cone
/// pieces. theta_part uses theta(0) = 0; delta_part is absent for R = 0.
struct CommutatorValue {
  double theta_part = 0.0;
  std::optional<DeltaPart> delta_part;
};

namespace detail {
struct EventGeometry {
  double eta_a, eta_b, a_a, a_b, distance;
  double deta() const { return eta_a - eta_b; }
};

inline EventGeometry event_geometry(const CosmologyModel& model,
                                    const SpacetimeEvent& a,
                                    const SpacetimeEvent& b) {
  return {conformal_time(model, a.t), conformal_time(model, b.t),
          scale_factor(model, a.t), scale_factor(model, b.t),
          comoving_distance(a, b)};
}
}  // namespace detail

/// Field commutator for a minimally coupled massless scalar in the matter or
/// Lambda universe (both have the alpha = 3/2 mode equation).
inline CommutatorValue commutator(const CosmologyModel& model,
                                  const SpacetimeEvent& a,
                                  const SpacetimeEvent& b) {
  const auto g = detail::event_geometry(model, a, b);
  const double deta = g.deta();
  const double R = g.distance;
  CommutatorValue value;
  const double sign = (-deta - R > 0.0 ? 1.0 : 0.0) - (deta - R > 0.0 ? 1.0 : 0.0);
  value.theta_part =
      sign / (4.0 * std::numbers::pi * g.a_a * g.a_b * std::abs(g.eta_a * g.eta_b));
  if (R > 0.0) {
    const double s = 1.0 / (4.0 * std::numbers::pi * g.a_a * g.a_b * R);
    value.delta_part = DeltaPart{s, -s, -R, R};
  }
  return value;
}

/// Coefficient c of the theta-supported term, <[phi(x), phi(x')]> = i c.
/// Positive when x' lies in the timelike future of x, negative in its past,
/// zero for spacelike pairs. Lightlike pairs are rejected.
inline double commutator_theta_coefficient(const CosmologyModel& model,
                                           const SpacetimeEvent& a,
                                           const SpacetimeEvent& b) {
  const auto g = detail::event_geometry(model, a, b);
  if (std::abs(g.deta()) == g.distance) {
    throw DomainError("commutator_theta_coefficient: lightlike pair lies on "
                      "the delta support");
  }
  return commutator(model, a, b).theta_part;
}

// ---------------------------------------------------------------------------
// Mode-equation oracle

/// Fourier-mode Green function problem
///   g'' + [k^2 - (1 - 6 xi)(alpha^2 - 1/4)/eta^2] g = 0,
///   g(eta_source) = 0, g'(eta_source) = 4 pi,
/// with alpha = |(3 - 3w)/(6w + 2)|.
struct GreenFunctionProblem {
  double w = 0.0;
  double xi = 0.0;
  double k = 1.0;
  double eta_source = 1.0;

  double alpha() const {
    const double denom = 6.0 * w + 2.0;
    if (denom == 0.0) throw DomainError("alpha undefined for w = -1/3");
    return std::abs((3.0 - 3.0 * w) / denom);
  }
  double potential_strength() const {
    const double al = alpha();
    return (1.0 - 6.0 * xi) * (al * al - 0.25);
  }
};

struct ModeSamples {
  std::vector<double> eta;
  std::vector<double> g;
  std::vector<double> dg;
};

namespace detail {

using ModeState = std::array<double, 2>;

// Integrates the mode equation from eta_source to each target in order
// (targets must be monotone moving away from the source).
inline void integrate_mode(const GreenFunctionProblem& p,
                           const std::vector<double>& targets,
                           std::vector<ModeState>& out, double tol) {
  namespace odeint = boost::numeric::odeint;
  const double v = p.potential_strength();
  const double k2 = p.k * p.k;
  auto rhs = [v, k2](const ModeState& x, ModeState& dxdt, double eta) {
    dxdt[0] = x[1];
    dxdt[1] = -(k2 - v / (eta * eta)) * x[0];
  };
  auto stepper = odeint::make_controlled(
      tol, tol, odeint::runge_kutta_fehlberg78<ModeState>());

  ModeState x{0.0, 4.0 * std::numbers::pi};
  double eta = p.eta_source;
  double period = p.k > 0.0 ? 2.0 * std::numbers::pi / p.k : 1.0;
  double dt = 0.01 * std::min(period, std::max(std::abs(eta), 1e-3));
  for (double target : targets) {
    const double dir = target >= eta ? 1.0 : -1.0;
    dt = dir * std::abs(dt);
    std::size_t guard = 0;
    while ((target - eta) * dir > 0.0) {
      if ((eta + dt - target) * dir > 0.0) dt = target - eta;
      const auto result = stepper.try_step(rhs, x, eta, dt);
      if (result == odeint::fail) {
        if (std::abs(dt) < 1e-14 * std::max(1.0, std::abs(eta))) {
          throw ConvergenceError("solve_mode_ode: step-size underflow near "
                                 "eta = " + std::to_string(eta),
                                 x[0], std::abs(dt));
        }
      }
      if (++guard > 50000000) {
        throw ConvergenceError("solve_mode_ode: step budget exhausted", x[0],
                               0.0);
      }
    }
    eta = target;
    out.push_back(x);
  }
}

inline void require_regular(double lo, double hi) {
  if (!(lo < hi)) throw DomainError("eta range must satisfy lo < hi");
  if (lo <= 0.0 && hi >= 0.0) {
    throw DomainError("eta range must exclude the singular point eta = 0");
  }
}

}  // namespace detail

/// Samples g(eta) on n_steps + 1 evenly spaced points of [eta_lo, eta_hi].
inline ModeSamples solve_mode_ode(const GreenFunctionProblem& problem,
                                  double eta_lo, double eta_hi,
                                  std::size_t n_steps, double tol = 1e-10) {
  detail::require_regular(eta_lo, eta_hi);
  if (problem.eta_source < eta_lo || problem.eta_source > eta_hi) {
    throw DomainError("solve_mode_ode: source must lie inside the eta range");
  }
  if (n_steps == 0) throw DomainError("solve_mode_ode: n_steps must be > 0");

  ModeSamples samples;
  std::vector<double> grid(n_steps + 1);
  for (std::size_t i = 0; i <= n_steps; ++i) {
    grid[i] = eta_lo + (eta_hi - eta_lo) * static_cast<double>(i) /
                           static_cast<double>(n_steps);
  }
  grid.back() = eta_hi;

  // March outwards from the source in both directions.
  std::vector<double> below, above;
  for (double e : grid) (e < problem.eta_source ? below : above).push_back(e);
  std::reverse(below.begin(), below.end());
  std::vector<detail::ModeState> down, up;
  detail::integrate_mode(problem, below, down, tol);
  detail::integrate_mode(problem, above, up, tol);

  for (std::size_t i = down.size(); i-- > 0;) {
    samples.eta.push_back(below[i]);
    samples.g.push_back(down[i][0]);
    samples.dg.push_back(down[i][1]);
  }
  for (std::size_t i = 0; i < up.size(); ++i) {
    samples.eta.push_back(above[i]);
    samples.g.push_back(up[i][0]);
    samples.dg.push_back(up[i][1]);
  }
  return samples;
}

/// g(eta) for a single target point.
inline double mode_function(const GreenFunctionProblem& problem, double eta,
                            double tol = 1e-10) {
  if (eta == problem.eta_source) return 0.0;
  detail::require_regular(std::min(eta, problem.eta_source),
                          std::max(eta, problem.eta_source));
  std::vector<detail::ModeState> out;
  detail::integrate_mode(problem, {eta}, out, tol);
  return out.front()[0];
}

inline double fluid_parameter(Fluid f) { return f == Fluid::Matter ? 0.0 : -1.0; }

struct ReconstructionOptions {
  double k_max = 0.0;            // 0: 8 / (smallest width)
  double mollifier_width = 0.0;  // 0: (distance to light cone) / 10
  double xi = 0.0;
  double ode_tol = 1e-10;
  numerics::QuadratureSpec quad{1e-8, 1e-14, 20000};
};

struct Reconstruction {
  double value = 0.0;                 // extrapolated theta coefficient
  std::array<double, 3> widths{};     // w, w/sqrt2, w/2
  std::array<double, 3> estimates{};  // damped estimates at each width
};

/// Rebuilds the theta coefficient of the commutator from the mode equation:
///   K = (1 / (2 pi^2 R)) int_0^kmax k sin(kR) g(eta_a; eta_b, k) e^{-(kw)^2} dk,
///   c = -K / (4 pi a(t) a(t')),
/// evaluated at three mollifier widths and Richardson-extrapolated in w^2.
/// The pair must be at least 5 widths (in eta) away from the light cone.
inline Reconstruction reconstruct_theta_part(const CosmologyModel& model,
                                             const SpacetimeEvent& a,
                                             const SpacetimeEvent& b,
                                             const ReconstructionOptions& opt = {}) {
  const auto geo = detail::event_geometry(model, a, b);
  const double R = geo.distance;
  const double cone_gap = std::abs(std::abs(geo.deta()) - R);
  if (!(cone_gap > 0.0)) {
    throw DomainError("reconstruct_theta_part: lightlike pair");
  }
  const double w0 =
      opt.mollifier_width > 0.0 ? opt.mollifier_width : cone_gap / 10.0;
  if (cone_gap < 5.0 * w0) {
    throw DomainError("reconstruct_theta_part: pair closer than 5 mollifier "
                      "widths to the light cone");
  }

  Reconstruction rec;
  rec.widths = {w0, w0 / std::numbers::sqrt2, 0.5 * w0};
  const double k_max = opt.k_max > 0.0 ? opt.k_max : 8.0 / rec.widths[2];
  const double prefactor =
      -1.0 / (4.0 * std::numbers::pi * geo.a_a * geo.a_b * 2.0 *
              std::numbers::pi * std::numbers::pi);

  for (std::size_t i = 0; i < 3; ++i) {
    const double w = rec.widths[i];
    auto integrand = [&](double k) {
      const double damp = std::exp(-(k * w) * (k * w));
      if (damp == 0.0) return 0.0;
      const double sinc_r = R > 0.0 ? std::sin(k * R) / R : k;
      GreenFunctionProblem p{fluid_parameter(model.kind), opt.xi, k, geo.eta_b};
      return k * sinc_r * mode_function(p, geo.eta_a, opt.ode_tol) * damp;
    };
    // Split where the damped tail is negligible and at the oscillation scale.
    const double k_hi = std::min(k_max, 7.0 / w);
    const double freq = std::abs(geo.deta()) + R;
    const auto breaks = numerics::oscillation_breakpoints(0.0, k_hi, freq, 4096);
    auto quad = opt.quad;
    // Spacelike pairs integrate to ~0, so pin an absolute floor at 1e-9 of
    // the timelike magnitude 2 pi^2 / |eta eta'|.
    quad.abs_tol = std::max(quad.abs_tol, 1e-9 * 2.0 * std::numbers::pi *
                                              std::numbers::pi /
                                              std::abs(geo.eta_a * geo.eta_b));
    rec.estimates[i] =
        prefactor * numerics::integrate_1d(integrand, 0.0, k_hi, quad, breaks).value;
  }

  // Richardson in h = w^2 with ratio 2 between successive widths.
  const auto& e = rec.estimates;
  const double r1 = 2.0 * e[1] - e[0];
  const double r2 = 2.0 * e[2] - e[1];
  rec.value = (4.0 * r2 - r1) / 3.0;

  // Timelike magnitude 1 / (4 pi a a' |eta eta'|) sets the noise floor for
  // spacelike pairs, whose estimates are pure quadrature noise.
  const double floor = 1e-6 / (4.0 * std::numbers::pi * geo.a_a * geo.a_b *
                               std::abs(geo.eta_a * geo.eta_b));
  const double scale = std::max({std::abs(e[0]), std::abs(e[1]), std::abs(e[2]),
                                 std::abs(rec.value)});
  if (std::abs(e[2] - rec.value) > 1e-2 * scale + floor) {
    throw ConvergenceError("reconstruct_theta_part: extrapolation disagreement",
                           rec.value, std::abs(e[2] - rec.value));
  }
  return rec;
}

}  // namespace huygens
