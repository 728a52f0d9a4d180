#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "huygens/causality.hpp"
#include "huygens/cosmology.hpp"
#include "huygens/signaling.hpp"

namespace huygens::config {

/// Invalid run configuration; line() is 0 when no single line is at fault.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class SeparationMode { Comoving, Proper };
enum class MethodChoice { Auto, ClosedForm, Quadrature };
enum class Scale { Linear, Log };

inline const std::vector<std::string>& sweep_variables() {
  static const std::vector<std::string> vars{"T_iB",        "Omega", "Delta",
                                             "sqrt_lambda", "R",     "P"};
  return vars;
}

struct SweepSpec {
  std::string variable = "T_iB";
  double min = 1.5;
  double max = 10.0;
  std::size_t points = 100;
  Scale scale = Scale::Linear;

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

/// Everything needed to evaluate one configuration or a sweep. Defaults:
/// TiA = 2/3, D = 1/100, R = 1/2.
struct RunConfig {
  Fluid cosmology = Fluid::Lambda;
  double anchor = 2.0 / 3.0;
  double sqrt_lambda = 1.0;
  DetectorConfig alice{10.0, 1.0, 2.0 / 3.0, 0.01};
  DetectorConfig bob{10.0, 1.0, 2.0, 0.01};
  SeparationMode separation_mode = SeparationMode::Comoving;
  double separation = 0.5;
  MethodChoice method = MethodChoice::Auto;
  std::optional<SweepSpec> sweep;
  std::string output_path;
  std::string output_format;  // empty: command default

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::optional<double> parse_plain_number(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

// Accepts a decimal number or a fraction "p/q".
inline double parse_number(const std::string& text, std::size_t line) {
  const auto slash = text.find('/');
  std::optional<double> v;
  if (slash == std::string::npos) {
    v = parse_plain_number(text);
  } else {
    const auto num = parse_plain_number(trim(std::string_view(text).substr(0, slash)));
    const auto den = parse_plain_number(trim(std::string_view(text).substr(slash + 1)));
    if (num && den && *den != 0.0) v = *num / *den;
  }
  if (!v || !std::isfinite(*v)) {
    throw ConfigError("expected a number, got '" + text + "'", line);
  }
  return *v;
}

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Checks cross-field constraints (times in the model domain etc.).
inline void validate(const RunConfig& c) {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) throw ConfigError(std::string(what) + " must be positive");
  };
  positive(c.anchor, "anchor");
  positive(c.sqrt_lambda, "sqrt_lambda");
  positive(c.alice.duration, "alice.duration");
  positive(c.bob.duration, "bob.duration");
  if (c.alice.gap < 0.0 || c.bob.gap < 0.0) {
    throw ConfigError("detector gaps must be non-negative");
  }
  if (c.separation < 0.0) throw ConfigError("separation.value must be >= 0");
  if (c.cosmology == Fluid::Matter &&
      (!(c.alice.switch_on > 0.0) || !(c.bob.switch_on > 0.0))) {
    throw ConfigError("matter universe requires switch-on times > 0");
  }
  if (c.sweep) {
    const auto& s = *c.sweep;
    bool known = false;
    for (const auto& v : sweep_variables()) known |= v == s.variable;
    if (!known) throw ConfigError("unknown sweep.variable '" + s.variable + "'");
    if (s.points == 0) throw ConfigError("sweep.points must be >= 1");
    if (s.max < s.min) throw ConfigError("sweep.max must be >= sweep.min");
    if (s.scale == Scale::Log && !(s.min > 0.0)) {
      throw ConfigError("log sweep requires sweep.min > 0");
    }
  }
  if (!c.output_format.empty() && c.output_format != "csv" &&
      c.output_format != "json") {
    throw ConfigError("output.format must be csv or json");
  }
}

/// Parses the flat "section.key = value" format. Lines starting with '#'
/// are comments. Unset keys keep their defaults; alice.switch_on defaults
/// to the anchor and sqrt_lambda to the expansion rate 2/(3 anchor).
inline RunConfig parse(std::string_view text) {
  RunConfig c;
  std::map<std::string, std::pair<std::string, std::size_t>> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value'", line_no);
    }
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("empty key or value", line_no);
    }
    if (entries.count(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
    entries[key] = {value, line_no};
  }

  auto take = [&](const std::string& key) -> std::optional<std::pair<std::string, std::size_t>> {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    auto v = it->second;
    entries.erase(it);
    return v;
  };
  auto number = [&](const std::string& key, double& dst) {
    if (auto v = take(key)) {
      dst = detail::parse_number(v->first, v->second);
      return true;
    }
    return false;
  };

  if (auto v = take("cosmology")) {
    if (v->first == "matter") c.cosmology = Fluid::Matter;
    else if (v->first == "lambda") c.cosmology = Fluid::Lambda;
    else throw ConfigError("cosmology must be matter or lambda", v->second);
  }
  number("anchor", c.anchor);
  c.sqrt_lambda = 2.0 / (3.0 * c.anchor);
  number("sqrt_lambda", c.sqrt_lambda);

  c.alice.switch_on = c.anchor;
  for (auto [name, det] : {std::pair{"alice", &c.alice}, std::pair{"bob", &c.bob}}) {
    const std::string p = std::string(name) + ".";
    number(p + "omega", det->gap);
    number(p + "coupling", det->coupling);
    number(p + "switch_on", det->switch_on);
    number(p + "duration", det->duration);
  }

  if (auto v = take("separation.mode")) {
    if (v->first == "comoving") c.separation_mode = SeparationMode::Comoving;
    else if (v->first == "proper") c.separation_mode = SeparationMode::Proper;
    else throw ConfigError("separation.mode must be comoving or proper", v->second);
  }
  number("separation.value", c.separation);

  if (auto v = take("method")) {
    if (v->first == "auto") c.method = MethodChoice::Auto;
    else if (v->first == "closed") c.method = MethodChoice::ClosedForm;
    else if (v->first == "quadrature") c.method = MethodChoice::Quadrature;
    else throw ConfigError("method must be auto, closed or quadrature", v->second);
  }

  const bool has_sweep = entries.count("sweep.variable") || entries.count("sweep.min") ||
                         entries.count("sweep.max") || entries.count("sweep.points") ||
                         entries.count("sweep.scale");
  if (has_sweep) {
    SweepSpec s;
    if (auto v = take("sweep.variable")) s.variable = v->first;
    number("sweep.min", s.min);
    number("sweep.max", s.max);
    double points = static_cast<double>(s.points);
    if (auto v = take("sweep.points")) {
      points = detail::parse_number(v->first, v->second);
      if (points < 1.0 || points != std::floor(points) || points > 1e7) {
        throw ConfigError("sweep.points must be a positive integer", v->second);
      }
    }
    s.points = static_cast<std::size_t>(points);
    if (auto v = take("sweep.scale")) {
      if (v->first == "lin") s.scale = Scale::Linear;
      else if (v->first == "log") s.scale = Scale::Log;
      else throw ConfigError("sweep.scale must be lin or log", v->second);
    }
    c.sweep = s;
  }

  if (auto v = take("output.path")) c.output_path = v->first;
  if (auto v = take("output.format")) c.output_format = v->first;

  if (!entries.empty()) {
    const auto& [key, val] = *entries.begin();
    throw ConfigError("unknown key '" + key + "'", val.second);
  }
  validate(c);
  return c;
}

/// Canonical serialization: every key, sorted, 17 significant digits.
inline std::string serialize(const RunConfig& c) {
  std::map<std::string, std::string> kv;
  auto num = detail::format_number;
  for (auto [name, det] : {std::pair{"alice", &c.alice}, std::pair{"bob", &c.bob}}) {
    const std::string p = std::string(name) + ".";
    kv[p + "coupling"] = num(det->coupling);
    kv[p + "duration"] = num(det->duration);
    kv[p + "omega"] = num(det->gap);
    kv[p + "switch_on"] = num(det->switch_on);
  }
  kv["anchor"] = num(c.anchor);
  kv["cosmology"] = std::string(to_string(c.cosmology));
  kv["method"] = c.method == MethodChoice::Auto         ? "auto"
                 : c.method == MethodChoice::ClosedForm ? "closed"
                                                        : "quadrature";
  kv["separation.mode"] =
      c.separation_mode == SeparationMode::Comoving ? "comoving" : "proper";
  kv["separation.value"] = num(c.separation);
  kv["sqrt_lambda"] = num(c.sqrt_lambda);
  if (c.sweep) {
    kv["sweep.max"] = num(c.sweep->max);
    kv["sweep.min"] = num(c.sweep->min);
    kv["sweep.points"] = std::to_string(c.sweep->points);
    kv["sweep.scale"] = c.sweep->scale == Scale::Log ? "log" : "lin";
    kv["sweep.variable"] = c.sweep->variable;
  }
  if (!c.output_path.empty()) kv["output.path"] = c.output_path;
  if (!c.output_format.empty()) kv["output.format"] = c.output_format;

  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

inline CosmologyModel model_of(const RunConfig& c) {
  if (c.cosmology == Fluid::Matter) return normalized_pair(c.anchor).matter;
  return normalized_lambda(c.anchor, c.sqrt_lambda);
}

inline CommPair pair_of(const RunConfig& c) {
  CommPair p{c.alice, c.bob, ComovingSeparation{c.separation}};
  if (c.separation_mode == SeparationMode::Proper) {
    p.separation = ProperSeparation{c.separation};
  }
  return p;
}

inline SignalingOptions signaling_options(const RunConfig& c) {
  SignalingOptions o;
  if (c.method == MethodChoice::ClosedForm) o.force = Method::ClosedForm;
  if (c.method == MethodChoice::Quadrature) o.force = Method::Quadrature;
  return o;
}

}  // namespace huygens::config
