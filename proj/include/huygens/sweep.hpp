#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "huygens/capacity.hpp"
#include "huygens/config.hpp"

#ifndef HUYGENS_VERSION
#define HUYGENS_VERSION "0.1.0"
#endif

namespace huygens::sweep {

struct SweepRow {
  double value = 0.0;
  std::optional<Evaluation> eval;
  std::string error;  // empty on success
};

/// Grid of sweep values; endpoints are hit exactly.
inline std::vector<double> sweep_values(const config::SweepSpec& s) {
  std::vector<double> out(s.points);
  if (s.points == 1) {
    out[0] = s.min;
    return out;
  }
  const double n = static_cast<double>(s.points - 1);
  for (std::size_t i = 0; i < s.points; ++i) {
    const double f = static_cast<double>(i) / n;
    out[i] = s.scale == config::Scale::Log
                 ? std::exp(std::log(s.min) + f * (std::log(s.max) - std::log(s.min)))
                 : s.min + f * (s.max - s.min);
  }
  out.front() = s.min;
  out.back() = s.max;
  return out;
}

/// Copy of the config with the swept variable set. Omega and Delta act on
/// both detectors; R and P also switch the separation mode.
inline config::RunConfig apply_sweep_value(config::RunConfig c,
                                           const std::string& variable,
                                           double value) {
  if (variable == "T_iB") {
    c.bob.switch_on = value;
  } else if (variable == "Omega") {
    c.alice.gap = c.bob.gap = value;
  } else if (variable == "Delta") {
    c.alice.duration = c.bob.duration = value;
  } else if (variable == "sqrt_lambda") {
    c.sqrt_lambda = value;
  } else if (variable == "R") {
    c.separation_mode = config::SeparationMode::Comoving;
    c.separation = value;
  } else if (variable == "P") {
    c.separation_mode = config::SeparationMode::Proper;
    c.separation = value;
  } else {
    throw config::ConfigError("unknown sweep variable '" + variable + "'");
  }
  return c;
}

/// Single configuration with the optimal detector states.
inline Evaluation evaluate_config(const config::RunConfig& c) {
  config::validate(c);
  return evaluate(config::model_of(c), config::pair_of(c),
                  config::signaling_options(c));
}

/// Worker count from HUYGENS_THREADS; unset or 0 means hardware concurrency.
inline unsigned threads_from_env() {
  if (const char* env = std::getenv("HUYGENS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates every sweep point. Rows are independent, so the output does
/// not depend on the thread count; failures are recorded per row.
inline std::vector<SweepRow> run_sweep(const config::RunConfig& c,
                                       unsigned threads) {
  if (!c.sweep) throw config::ConfigError("no sweep.* keys in configuration");
  const auto values = sweep_values(*c.sweep);
  std::vector<SweepRow> rows(values.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      rows[i].value = values[i];
      try {
        rows[i].eval =
            evaluate_config(apply_sweep_value(c, c.sweep->variable, values[i]));
      } catch (const std::exception& e) {
        rows[i].error = e.what();
      }
    }
  };
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(rows.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return rows;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_header() {
  return std::string("# huygens-channel v") + HUYGENS_VERSION +
         "\nsweep_value,causal_class,I_delta,I_theta,S2,capacity,err_est,method,error\n";
}

inline std::string csv_row(const SweepRow& r) {
  std::string line = format_double(r.value) + ",";
  if (r.eval) {
    const auto& s = r.eval->signal;
    const auto& cap = r.eval->capacity;
    line += std::string(to_string(s.causal_class)) + "," + format_double(s.i_delta) +
            "," + format_double(s.i_theta) + "," + format_double(s.s2) + "," +
            format_double(cap.capacity_bits) + "," + format_double(cap.err_est) +
            "," + std::string(to_string(s.method)) + ",";
    std::string notes;
    for (const auto& w : cap.warnings) notes += (notes.empty() ? "warning: " : "; ") + w;
    line += notes;
  } else {
    std::string msg = r.error;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    line += ",,,,,,," + msg;
  }
  for (char& ch : line) {
    if (ch == '\n') ch = ' ';
  }
  return line + "\n";
}

inline std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = csv_header();
  for (const auto& r : rows) out += csv_row(r);
  return out;
}

}  // namespace huygens::sweep
