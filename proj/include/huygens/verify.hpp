#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "huygens/capacity.hpp"
#include "huygens/causality.hpp"
#include "huygens/commutator.hpp"
#include "huygens/config.hpp"
#include "huygens/cosmology.hpp"
#include "huygens/signaling.hpp"
#include "huygens/sweep.hpp"
#include "huygens/timing.hpp"

namespace huygens::verify {

enum class Status { Pass, Fail, Skipped };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skipped: return "SKIP";
  }
  return "?";
}

struct CheckResult {
  std::string name;
  Status status = Status::Fail;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  bool fast = false;              // skip the mode-equation reconstruction
  double prefactor_scale = 1.0;   // fault injection for the capacity check
  unsigned sweep_threads = 8;
};

namespace detail {

inline std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

inline double rel_err(double got, double want) {
  if (want == 0.0) return std::abs(got);
  return std::abs(got - want) / std::abs(want);
}

inline CosmologyModel normalized(Fluid f) {
  const auto p = normalized_pair(2.0 / 3.0);
  return f == Fluid::Matter ? p.matter : p.lambda;
}

inline DetectorConfig det(double gap, double on, double duration) {
  return {gap, 1.0, on, duration};
}

inline double capacity_of(const CosmologyModel& m, const CommPair& pair,
                          const SignalingOptions& opts = {}) {
  return evaluate(m, pair, opts).capacity.capacity_bits;
}

// Golden-section maximum of f on [lo, hi] (f unimodal there).
inline double golden_max(const std::function<double(double)>& f, double lo,
                         double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

// Maximum over one window: coarse scan, then golden section around the best
// sample.
inline double window_max(const std::function<double(double)>& f, double lo,
                         double hi) {
  constexpr int n = 64;
  int best = 0;
  double best_v = -1.0;
  for (int i = 0; i <= n; ++i) {
    const double v = f(lo + (hi - lo) * i / n);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  const double a = lo + (hi - lo) * std::max(0, best - 1) / n;
  const double b = lo + (hi - lo) * std::min(n, best + 1) / n;
  return std::max(best_v, golden_max(f, a, b));
}

// Plain bisection, kept separate from the library root finder.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// 1. Closed form against quadrature on the strict-timelike grid.
inline CheckResult check_closed_form_grid() {
  CheckResult r{"closed_form_grid", Status::Fail, {}, 0.0};
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  int count = 0, not_b5 = 0;
  const numerics::QuadratureSpec spec{1e-12, 1e-20, 20000};
  for (Fluid f : {Fluid::Matter, Fluid::Lambda}) {
    const auto m = detail::normalized(f);
    for (double omega : {0.0, 1.0, 5.0, 10.0, 20.0}) {
      for (double delta : {0.005, 0.01, 0.05}) {
        for (double tib : {1.5, 2.0, 5.0, 20.0}) {
          const CommPair pair{detail::det(omega, 2.0 / 3.0, delta),
                              detail::det(omega, tib, delta),
                              ComovingSeparation{0.5}};
          if (classify(m, pair) != CausalClass::B5_StrictTimelike) {
            ++not_b5;
            continue;
          }
          const double closed = i_theta_closed(m, pair.alice, pair.bob);
          const double quad = i_theta(m, pair, spec, ThetaPath::Factorized).value;
          worst = std::max(worst, detail::rel_err(quad, closed));
          ++count;
        }
      }
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.status = worst <= 1e-7 && not_b5 == 0 && r.seconds < 60.0 ? Status::Pass : Status::Fail;
  r.detail = std::to_string(count) + " configs, max rel err " + detail::fmt("%.3g", worst) +
             (not_b5 ? ", " + std::to_string(not_b5) + " not B5" : "");
  return r;
}

// 2. Strictly spacelike configurations never signal.
inline CheckResult check_spacelike_zero() {
  CheckResult r{"spacelike_zero", Status::Fail, {}, 0.0};
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto random_state = [&] {
    const double th = std::numbers::pi * u(rng);
    const double ph = 2.0 * std::numbers::pi * u(rng);
    return DetectorState(std::cos(th / 2.0),
                         std::polar(std::sin(th / 2.0), ph));
  };
  double worst = 0.0;
  int misclassified = 0;
  for (int i = 0; i < 50; ++i) {
    const auto m = detail::normalized(i % 2 ? Fluid::Lambda : Fluid::Matter);
    const double tia = 0.3 + 2.7 * u(rng);
    const double delta = 0.005 + 0.095 * u(rng);
    const double tib = std::max(0.05, tia - 0.2 + 3.2 * u(rng));
    const double gap_a = 20.0 * u(rng), gap_b = 20.0 * u(rng);
    const double reach = conformal_time(m, tib + delta) - conformal_time(m, tia);
    const double R = std::max(0.0, reach) + 1e-3 + 0.5 * u(rng);
    const CommPair pair{detail::det(gap_a, tia, delta), detail::det(gap_b, tib, delta),
                        ComovingSeparation{R}};
    if (classify(m, pair) != CausalClass::B1_Spacelike) ++misclassified;
    const auto res = i % 5 == 0
                         ? s2_general(m, pair, DetectorState::optimal_sender(),
                                      DetectorState::optimal_receiver())
                         : s2_general(m, pair, random_state(), random_state());
    worst = std::max(worst, std::abs(res.s2));
  }
  r.status = worst <= 1e-10 && misclassified == 0 ? Status::Pass : Status::Fail;
  r.detail = "50 configs, max |S2| " + detail::fmt("%.3g", worst);
  return r;
}

// 3. Gapless matter capacity decays with the logarithmic window factor.
inline CheckResult check_matter_decay() {
  CheckResult r{"matter_decay", Status::Fail, {}, 0.0};
  const auto m = detail::normalized(Fluid::Matter);
  auto pair_at = [](double tib) {
    return CommPair{detail::det(0.0, 2.0 / 3.0, 0.01), detail::det(0.0, tib, 0.01),
                    ComovingSeparation{0.5}};
  };
  const double want = std::pow(std::log(20.01 / 20.0) / std::log(2.01 / 2.0), 2);
  const double closed = detail::capacity_of(m, pair_at(20.0)) / detail::capacity_of(m, pair_at(2.0));
  SignalingOptions q;
  q.force = Method::Quadrature;
  const double quad =
      detail::capacity_of(m, pair_at(20.0), q) / detail::capacity_of(m, pair_at(2.0), q);
  const double e1 = detail::rel_err(closed, want), e2 = detail::rel_err(quad, want);
  r.status = e1 <= 1e-9 && e2 <= 1e-6 ? Status::Pass : Status::Fail;
  r.detail = "ratio " + detail::fmt("%.10g", closed) + ", closed err " +
             detail::fmt("%.2g", e1) + ", quadrature err " + detail::fmt("%.2g", e2);
  return r;
}

// 4. Lambda capacity is periodic in T_iB with a constant envelope.
inline CheckResult check_lambda_no_decay() {
  CheckResult r{"lambda_no_decay", Status::Fail, {}, 0.0};
  const auto m = detail::normalized(Fluid::Lambda);
  const double omega = 10.0;
  auto cap = [&](double tib) {
    const CommPair pair{detail::det(omega, 2.0 / 3.0, 0.01), detail::det(omega, tib, 0.01),
                        ComovingSeparation{0.5}};
    if (classify(m, pair) != CausalClass::B5_StrictTimelike) {
      throw DomainError("lambda_no_decay: configuration not strictly timelike");
    }
    return detail::capacity_of(m, pair);
  };
  double worst_period = 0.0;
  const double base = cap(2.0);
  for (int k : {1, 10, 100}) {
    worst_period = std::max(
        worst_period, detail::rel_err(cap(2.0 + k * std::numbers::pi / omega), base));
  }
  const double half = std::numbers::pi / (2.0 * omega);
  std::vector<double> maxima;
  for (double centre : {2.0, 10.0, 100.0}) {
    maxima.push_back(detail::window_max(cap, centre - half, centre + half));
  }
  double worst_env = 0.0;
  for (double v : maxima) worst_env = std::max(worst_env, detail::rel_err(v, maxima[0]));
  r.status = worst_period <= 1e-10 && worst_env <= 1e-10 ? Status::Pass : Status::Fail;
  r.detail = "period err " + detail::fmt("%.2g", worst_period) + ", envelope err " +
             detail::fmt("%.2g", worst_env);
  return r;
}

// 5. Doubling sqrt|Lambda| multiplies the capacity by 16.
inline CheckResult check_lambda_scaling() {
  CheckResult r{"lambda_squared_scaling", Status::Fail, {}, 0.0};
  const CommPair pair{detail::det(10.0, 2.0 / 3.0, 0.01), detail::det(10.0, 2.0, 0.01),
                      ComovingSeparation{0.1}};
  const auto m1 = normalized_lambda(2.0 / 3.0, 1.0);
  const auto m2 = normalized_lambda(2.0 / 3.0, 2.0);
  const bool b5 = classify(m1, pair) == CausalClass::B5_StrictTimelike &&
                  classify(m2, pair) == CausalClass::B5_StrictTimelike;
  const double ratio = detail::capacity_of(m2, pair) / detail::capacity_of(m1, pair);
  const double err = detail::rel_err(ratio, 16.0);
  r.status = b5 && err <= 1e-12 ? Status::Pass : Status::Fail;
  r.detail = "ratio " + detail::fmt("%.17g", ratio) + (b5 ? "" : ", not B5");
  return r;
}

// 6. In strict timelike contact the quadrature capacity ignores R and P.
inline CheckResult check_separation_independence() {
  CheckResult r{"separation_independence", Status::Fail, {}, 0.0};
  double worst = 0.0;
  bool b5 = true;
  for (Fluid f : {Fluid::Matter, Fluid::Lambda}) {
    const auto m = detail::normalized(f);
    const auto alice = detail::det(10.0, 2.0 / 3.0, 0.01);
    const auto bob = detail::det(10.0, 2.0, 0.01);
    const double r_max = max_timelike_comoving_separation(m, alice.switch_on,
                                                          alice.duration, bob.switch_on);
    std::vector<double> caps;
    for (double R : {0.1, 0.3, 0.9 * r_max}) {
      for (bool proper : {false, true}) {
        CommPair pair{alice, bob, ComovingSeparation{R}};
        if (proper) pair.separation = ProperSeparation{R * scale_factor(m, bob.switch_on)};
        b5 = b5 && classify(m, pair) == CausalClass::B5_StrictTimelike;
        const auto s = s2_general(m, pair, DetectorState::optimal_sender(),
                                  DetectorState::optimal_receiver(),
                                  {1e-12, 1e-20, 20000});
        caps.push_back(channel_capacity(s, DetectorState::optimal_receiver(), 1.0, 1.0)
                           .capacity_bits);
      }
    }
    for (double c : caps) worst = std::max(worst, detail::rel_err(c, caps[0]));
  }
  r.status = b5 && worst <= 1e-8 ? Status::Pass : Status::Fail;
  r.detail = "max rel spread " + detail::fmt("%.2g", worst) + (b5 ? "" : ", not B5");
  return r;
}

// 7. Earliest-contact times for the default configuration.
inline CheckResult check_timing_values() {
  CheckResult r{"timing_values", Status::Fail, {}, 0.0};
  config::RunConfig c;
  const auto rep = timing::timing_report(c);
  const double t_off = c.alice.switch_off();
  const double R = c.separation;
  // Defining equations with the normalized models written out.
  auto eta_m = [](double t) { return std::cbrt(12.0 * t); };
  auto a_m = [](double t) { return std::cbrt(2.25 * t * t); };
  auto eta_l = [](double t) { return -std::exp(2.0 / 3.0 - t); };
  auto a_l = [](double t) { return std::exp(t - 2.0 / 3.0); };
  const double oracle[4] = {
      detail::bisect([&](double t) { return eta_m(t) - eta_m(t_off) - R; }, t_off, 10.0),
      detail::bisect([&](double t) { return eta_l(t) - eta_l(t_off) - R; }, t_off, 10.0),
      detail::bisect([&](double t) { return eta_m(t) - eta_m(t_off) - R / a_m(t); }, t_off, 10.0),
      detail::bisect([&](double t) { return eta_l(t) - eta_l(t_off) - R / a_l(t); }, t_off, 10.0)};
  const timing::TimingValue* got[4] = {&rep.matter.t_min_comoving, &rep.lambda.t_min_comoving,
                                       &rep.matter.t_min_proper, &rep.lambda.t_min_proper};
  const double pinned[4] = {1.3177, 1.3799, 1.1050, 1.08213};
  const double tol[4] = {1e-3, 1e-3, 1e-3, 1e-4};
  bool ok = true;
  std::string detail;
  for (int i = 0; i < 4; ++i) {
    if (!got[i]->value) {
      ok = false;
      detail += "missing value; ";
      continue;
    }
    const double v = *got[i]->value;
    ok = ok && std::abs(v - pinned[i]) <= tol[i] && std::abs(v - oracle[i]) <= 1e-9;
    detail += detail::fmt("%.6f ", v);
  }
  ok = ok && *rep.matter.t_min_proper.value < *rep.matter.t_min_comoving.value &&
       *rep.lambda.t_min_proper.value < *rep.lambda.t_min_comoving.value;
  r.status = ok ? Status::Pass : Status::Fail;
  r.detail = "T_min R/P " + detail;
  return r;
}

// 8. Mode-equation reconstruction of the commutator.
inline CheckResult check_commutator_reconstruction(bool fast) {
  CheckResult r{"commutator_reconstruction", Status::Fail, {}, 0.0};
  if (fast) {
    r.status = Status::Skipped;
    r.detail = "skipped (--fast)";
    return r;
  }
  const auto start = std::chrono::steady_clock::now();
  struct PairSpec { double ta, tb, R; };
  const PairSpec matter_pairs[] = {
      {2.0, 2.0 / 3.0, 0.3}, {3.0, 1.0, 0.5}, {1.5, 0.5, 0.2}, {2.0 / 3.0, 2.0, 0.4}, {5.0, 2.0, 0.0}};
  const PairSpec lambda_pairs[] = {
      {2.0, 2.0 / 3.0, 0.3}, {1.0, 0.0, 0.5}, {3.0, 1.0, 0.2}, {0.0, 1.0, 0.4}, {2.0, 0.0, 0.0}};
  double worst = 0.0;
  for (Fluid f : {Fluid::Matter, Fluid::Lambda}) {
    const auto m = detail::normalized(f);
    for (const auto& p : f == Fluid::Matter ? matter_pairs : lambda_pairs) {
      const SpacetimeEvent a{p.ta, {0.0, 0.0, 0.0}};
      const SpacetimeEvent b{p.tb, {p.R, 0.0, 0.0}};
      const double want = commutator_theta_coefficient(m, a, b);
      const double got = reconstruct_theta_part(m, a, b).value;
      worst = std::max(worst, detail::rel_err(got, want));
    }
  }
  // Conformal coupling removes the potential: g = (4 pi / k) sin(k deta).
  double worst_conf = 0.0;
  for (double w : {0.0, -1.0}) {
    for (double k : {0.5, 3.0, 10.0}) {
      const double src = w == 0.0 ? 1.0 : -4.0;
      const GreenFunctionProblem prob{w, 1.0 / 6.0, k, src};
      const auto s = solve_mode_ode(prob, src, src + 3.0, 30, 1e-13);
      for (std::size_t i = 0; i < s.eta.size(); ++i) {
        const double want = 4.0 * std::numbers::pi / k * std::sin(k * (s.eta[i] - src));
        worst_conf = std::max(worst_conf, std::abs(s.g[i] - want));
      }
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.status = worst <= 1e-3 && worst_conf <= 1e-8 && r.seconds < 300.0 ? Status::Pass
                                                                       : Status::Fail;
  r.detail = "10 pairs, max rel err " + detail::fmt("%.2g", worst) + ", conformal abs err " +
             detail::fmt("%.2g", worst_conf);
  return r;
}

// 9. Small-gap limits of the closed forms.
inline CheckResult check_limits() {
  CheckResult r{"limits", Status::Fail, {}, 0.0};
  const double tia = 2.0 / 3.0, tib = 2.0, d = 0.01;
  const double matter_small =
      i_theta_closed_matter(detail::det(1e-8, tia, d), detail::det(1e-8, tib, d));
  const double matter_zero =
      i_theta_closed_matter(detail::det(0.0, tia, d), detail::det(0.0, tib, d));
  const double lambda_small =
      i_theta_closed_lambda(detail::det(1e-6, tia, d), detail::det(1e-6, tib, d), 1.0);
  const double e1 = detail::rel_err(matter_small, matter_zero);
  const double e2 = detail::rel_err(lambda_small, d * d);
  r.status = e1 <= 1e-5 && e2 <= 1e-6 ? Status::Pass : Status::Fail;
  r.detail = "matter err " + detail::fmt("%.2g", e1) + ", lambda err " + detail::fmt("%.2g", e2);
  return r;
}

// 10. Sweep output does not depend on the worker count.
inline CheckResult check_sweep_determinism(unsigned threads) {
  CheckResult r{"sweep_determinism", Status::Fail, {}, 0.0};
  bool same = true;
  for (Fluid f : {Fluid::Matter, Fluid::Lambda}) {
    config::RunConfig c;
    c.cosmology = f;
    c.sweep = config::SweepSpec{"T_iB", 1.0, 10.0, 48, config::Scale::Linear};
    const auto one = sweep::to_csv(sweep::run_sweep(c, 1));
    same = same && one == sweep::to_csv(sweep::run_sweep(c, 1)) &&
           one == sweep::to_csv(sweep::run_sweep(c, threads));
  }
  r.status = same ? Status::Pass : Status::Fail;
  r.detail = same ? "identical at 1 and " + std::to_string(threads) + " threads"
                  : "outputs differ";
  return r;
}

// Optimal-state prefactor: C = 1/(32 pi^2 ln 2) at S2 = 1/(4 pi), and the
// matter closed form carries 1/(2592 pi^2 ln 2).
inline CheckResult check_capacity_prefactor(double injected_scale) {
  CheckResult r{"capacity_prefactor", Status::Fail, {}, 0.0};
  const double s2 = 1.0 / (4.0 * std::numbers::pi);
  const double c = injected_scale *
                   channel_capacity(s2, DetectorState::optimal_receiver(), 1.0, 1.0)
                       .capacity_bits;
  const double want = 1.0 / (32.0 * std::numbers::pi * std::numbers::pi * std::numbers::ln2);
  const auto alice = detail::det(10.0, 2.0 / 3.0, 0.01), bob = detail::det(10.0, 2.0, 0.01);
  const double ci = numerics::cosine_integral(10.0 * alice.switch_off()) -
                    numerics::cosine_integral(10.0 * alice.switch_on);
  const double cj = numerics::cosine_integral(10.0 * bob.switch_off()) -
                    numerics::cosine_integral(10.0 * bob.switch_on);
  const double matter_want =
      ci * ci * cj * cj / (2592.0 * std::numbers::pi * std::numbers::pi * std::numbers::ln2);
  const double matter_got = injected_scale * capacity_matter_closed(alice, bob).capacity_bits;
  const double e1 = detail::rel_err(c, want), e2 = detail::rel_err(matter_got, matter_want);
  r.status = e1 <= 1e-12 && e2 <= 1e-8 ? Status::Pass : Status::Fail;
  r.detail = "C(1/4pi) = " + detail::fmt("%.12g", c) + ", matter err " + detail::fmt("%.2g", e2);
  return r;
}

struct NamedCheck {
  std::string name;
  std::function<CheckResult()> run;
};

inline std::vector<NamedCheck> checks(const VerifyOptions& o) {
  return {
      {"closed_form_grid", check_closed_form_grid},
      {"spacelike_zero", check_spacelike_zero},
      {"matter_decay", check_matter_decay},
      {"lambda_no_decay", check_lambda_no_decay},
      {"lambda_squared_scaling", check_lambda_scaling},
      {"separation_independence", check_separation_independence},
      {"timing_values", check_timing_values},
      {"commutator_reconstruction", [o] { return check_commutator_reconstruction(o.fast); }},
      {"limits", check_limits},
      {"sweep_determinism", [o] { return check_sweep_determinism(o.sweep_threads); }},
      {"capacity_prefactor", [o] { return check_capacity_prefactor(o.prefactor_scale); }},
  };
}

/// Runs every check; exceptions count as failures.
inline std::vector<CheckResult> run_all(
    const VerifyOptions& o,
    const std::function<void(const CheckResult&)>& report = {}) {
  std::vector<CheckResult> out;
  for (const auto& check : checks(o)) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult res{check.name, Status::Fail, {}, 0.0};
    try {
      res = check.run();
    } catch (const std::exception& e) {
      res.status = Status::Fail;
      res.detail = std::string("exception: ") + e.what();
    }
    if (res.seconds == 0.0) {
      res.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    if (report) report(res);
    out.push_back(std::move(res));
  }
  return out;
}

inline bool all_passed(const std::vector<CheckResult>& results) {
  return std::none_of(results.begin(), results.end(),
                      [](const CheckResult& r) { return r.status == Status::Fail; });
}

}  // namespace huygens::verify
