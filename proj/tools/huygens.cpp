// huygens: capacity, sweep, timing and verify front end.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "huygens/capacity.hpp"
#include "huygens/config.hpp"
#include "huygens/error.hpp"
#include "huygens/sweep.hpp"
#include "huygens/timing.hpp"
#include "huygens/verify.hpp"

namespace {

using nlohmann::json;
using namespace huygens;

enum Exit { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kNumericalFailure = 3 };

config::RunConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw config::ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return config::parse(buf.str());
}

json nullable(const timing::TimingValue& v) {
  return v.value ? json(*v.value) : json(nullptr);
}

json timing_json(const timing::ModelTiming& m) {
  json j{{"T_min_comoving", nullable(m.t_min_comoving)},
         {"T_min_proper", nullable(m.t_min_proper)},
         {"R_max", nullable(m.r_max)}};
  if (m.model.kind == Fluid::Matter) {
    j["kappa1"] = m.model.kappa1;
  } else {
    j["kappa2"] = m.model.kappa2;
    j["sqrt_lambda"] = m.model.sqrt_lambda;
  }
  json reasons = json::object();
  if (!m.t_min_comoving.value) reasons["T_min_comoving"] = m.t_min_comoving.reason;
  if (!m.t_min_proper.value) reasons["T_min_proper"] = m.t_min_proper.reason;
  if (!m.r_max.value) reasons["R_max"] = m.r_max.reason;
  if (!reasons.empty()) j["unreachable"] = reasons;
  return j;
}

json evaluation_json(const Evaluation& e) {
  return {{"causal_class", std::string(to_string(e.signal.causal_class))},
          {"I_delta", e.signal.i_delta},
          {"I_theta", e.signal.i_theta},
          {"S2", e.signal.s2},
          {"C", e.capacity.capacity_bits},
          {"method", std::string(to_string(e.signal.method))},
          {"err_est", e.capacity.err_est},
          {"warnings", e.capacity.warnings}};
}

json sweep_json(const config::RunConfig& c, const std::vector<sweep::SweepRow>& rows) {
  json out{{"version", HUYGENS_VERSION}, {"sweep_variable", c.sweep->variable}};
  json arr = json::array();
  for (const auto& r : rows) {
    json row = r.eval ? evaluation_json(*r.eval) : json{{"error", r.error}};
    row["sweep_value"] = r.value;
    arr.push_back(std::move(row));
  }
  out["rows"] = std::move(arr);
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config::ConfigError("cannot write output file '" + path + "'");
  out << text;
}

std::string pick(const std::string& flag, const std::string& from_config,
                 const std::string& fallback = {}) {
  if (!flag.empty()) return flag;
  if (!from_config.empty()) return from_config;
  return fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Timelike channel capacity of Unruh-DeWitt detectors in FRW universes",
               "huygens"};
  app.set_version_flag("--version", std::string(HUYGENS_VERSION));
  app.require_subcommand(1);

  std::string config_path, out_path, format;
  bool fast = false;
  double inject_prefactor = 1.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration (key = value)");
    sub->add_option("--out", out_path, "output file (default: stdout)");
  };
  auto* capacity = app.add_subcommand("capacity", "evaluate one configuration");
  add_common(capacity);
  capacity->add_option("--format", format, "json or csv")->check(CLI::IsMember({"csv", "json"}));
  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate a parameter sweep");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* timing_cmd = app.add_subcommand("timing", "earliest-contact times and a(t)");
  add_common(timing_cmd);
  auto* verify_cmd = app.add_subcommand("verify", "run the self-check suite");
  verify_cmd->add_flag("--fast", fast, "skip the mode-equation reconstruction");
  verify_cmd->add_option("--inject-prefactor", inject_prefactor,
                         "scale the capacity prefactor (negative control)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (verify_cmd->parsed()) {
      verify::VerifyOptions opts;
      opts.fast = fast;
      opts.prefactor_scale = inject_prefactor;
      const auto results = verify::run_all(opts, [](const verify::CheckResult& r) {
        std::printf("[%s] %-26s %s (%.2f s)\n", std::string(to_string(r.status)).c_str(),
                    r.name.c_str(), r.detail.c_str(), r.seconds);
        std::fflush(stdout);
      });
      if (!verify::all_passed(results)) {
        for (const auto& r : results) {
          if (r.status == verify::Status::Fail) {
            std::fprintf(stderr, "verify: check failed: %s\n", r.name.c_str());
          }
        }
        return kVerifyFailed;
      }
      return kOk;
    }

    const auto cfg = load_config(config_path);
    const std::string out = pick(out_path, cfg.output_path);

    if (capacity->parsed()) {
      const auto e = sweep::evaluate_config(cfg);
      if (pick(format, cfg.output_format, "json") == "csv") {
        emit(sweep::csv_header() + sweep::csv_row({0.0, e, {}}), out);
      } else {
        emit(evaluation_json(e).dump(2) + "\n", out);
      }
    } else if (sweep_cmd->parsed()) {
      const auto rows = sweep::run_sweep(cfg, sweep::threads_from_env());
      if (pick(format, cfg.output_format, "csv") == "json") {
        emit(sweep_json(cfg, rows).dump(2) + "\n", out);
      } else {
        emit(sweep::to_csv(rows), out);
      }
    } else if (timing_cmd->parsed()) {
      const auto rep = timing::timing_report(cfg);
      json j{{"version", HUYGENS_VERSION},
             {"anchor", rep.anchor},
             {"alice_switch_on", rep.alice_switch_on},
             {"duration", rep.duration},
             {"separation", rep.separation},
             {"bob_switch_on", rep.bob_switch_on},
             {"matter", timing_json(rep.matter)},
             {"lambda", timing_json(rep.lambda)},
             {"samples", {{"t", rep.samples.t},
                          {"a_matter", rep.samples.matter},
                          {"a_lambda", rep.samples.lambda}}}};
      emit(j.dump(2) + "\n", out);
    }
    return kOk;
  } catch (const config::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumericalFailure;
  }
}
