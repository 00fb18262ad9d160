// slsim command line: steady-state runs, transient runs from a warm-pool
// snapshot, what-if sweeps, cost estimation, and request-log metrics.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "slsim/analysis.hpp"
#include "slsim/config.hpp"
#include "slsim/engine.hpp"
#include "slsim/parsim.hpp"
#include "slsim/request_log.hpp"
#include "slsim/temporal.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> concurrency_value;
  unsigned jobs = 1;
  std::string out;
  std::string emit_trace;
  std::string emit_requests;
  bool meta = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool with_sim_flags) {
  cmd->add_option("--jobs", flags.jobs, "Worker threads for replicated runs")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", flags.out, "Write CSV/JSON output to this path");
  if (with_sim_flags) {
    cmd->add_option("--seed", flags.seed, "Override simulation.seed");
    cmd->add_option("--concurrency-value", flags.concurrency_value,
                    "Override platform.concurrency_value");
    cmd->add_option("--emit-trace", flags.emit_trace,
                    "Write the event trace CSV to this path");
    cmd->add_option("--emit-requests", flags.emit_requests,
                    "Write the per-request log CSV to this path");
  }
  cmd->add_flag("--meta", flags.meta,
                "Include a meta object (version, wall clock) in JSON output");
}

void apply_overrides(slsim::ConfigFile& config, const CommonFlags& flags) {
  if (flags.seed) {
    config.sim.base.seed = *flags.seed;
  }
  if (flags.concurrency_value) {
    config.sim.concurrency_value = *flags.concurrency_value;
    slsim::validate(config.sim);
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw slsim::ConfigError("cannot open output file: " + path);
  }
  return out;
}

void attach_meta(json& doc, const CommonFlags& flags) {
  if (!flags.meta) {
    return;
  }
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%FT%TZ", std::gmtime(&t));
  doc["meta"] = {{"version", kVersion}, {"generated_at", stamp}};
}

void emit_json(const json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    auto out = open_output(out_path);
    out << doc.dump(2) << '\n';
  }
}

slsim::RunResult simulate(const slsim::ConfigFile& config,
                          const slsim::RunOptions& options) {
  if (config.sim.concurrency_value == 1) {
    return slsim::run(config.sim.base, options);
  }
  return slsim::run_par(config.sim, options);
}

void write_side_outputs(const slsim::RunResult& result,
                        const CommonFlags& flags) {
  if (!flags.emit_trace.empty()) {
    auto out = open_output(flags.emit_trace);
    slsim::write_csv(result.trace, out);
  }
  if (!flags.emit_requests.empty()) {
    auto out = open_output(flags.emit_requests);
    slsim::write_request_csv(result.requests, out);
  }
}

int cmd_run(const std::string& config_path, const CommonFlags& flags) {
  slsim::ConfigFile config = slsim::load_config_file(config_path);
  apply_overrides(config, flags);
  slsim::RunOptions options;
  options.collect_trace = !flags.emit_trace.empty();
  options.collect_requests = !flags.emit_requests.empty();
  const slsim::RunResult result = simulate(config, options);
  write_side_outputs(result, flags);
  json doc = slsim::report_to_json(result.report);
  attach_meta(doc, flags);
  emit_json(doc, flags.out);
  return 0;
}

void write_single_run_series(const slsim::RunSeries& series,
                             std::ostream& out) {
  out << "t,metric,mean,ci_low,ci_high\n";
  char buf[160];
  const auto row = [&](double t, const char* name, double v) {
    std::snprintf(buf, sizeof(buf), "%.12g,%s,%.12g,%.12g,%.12g\n", t, name, v,
                  v, v);
    out << buf;
  };
  for (const slsim::SeriesPoint& p : series.points) {
    row(p.t, "instance_count", p.instance_count);
  }
  for (const slsim::SeriesPoint& p : series.points) {
    row(p.t, "avg_instance_count", p.avg_instance_count);
  }
  for (const slsim::SeriesPoint& p : series.points) {
    row(p.t, "avg_running_count", p.avg_running_count);
  }
  for (const slsim::SeriesPoint& p : series.points) {
    row(p.t, "cold_start_probability", p.cold_start_probability);
  }
}

int cmd_transient(const std::string& config_path, const CommonFlags& flags) {
  slsim::ConfigFile config = slsim::load_config_file(config_path);
  apply_overrides(config, flags);
  if (config.sim.concurrency_value != 1) {
    throw slsim::ConfigError(
        "transient analysis supports concurrency_value 1 only");
  }
  const slsim::InitialState init =
      config.initial_state.value_or(slsim::InitialState{});
  const double horizon = config.sim.base.horizon;

  slsim::TransientOptions options;
  options.grid_step = config.grid_step;
  options.collect_trace = !flags.emit_trace.empty();
  options.collect_requests = !flags.emit_requests.empty();
  const slsim::RunResult first =
      slsim::run_transient(config.sim.base, init, horizon, options);
  write_side_outputs(first, flags);

  if (!flags.out.empty()) {
    auto out = open_output(flags.out);
    if (config.replications >= 2) {
      const slsim::EnsembleCurve curve =
          slsim::run_ensemble(config.sim.base, init, horizon,
                              config.replications, config.grid_step, flags.jobs);
      slsim::write_csv(curve, out);
    } else {
      write_single_run_series(first.series, out);
    }
  }

  json doc = slsim::report_to_json(first.report);
  attach_meta(doc, flags);
  std::cout << doc.dump(2) << '\n';
  return 0;
}

int cmd_sweep(const std::string& config_path, const CommonFlags& flags) {
  slsim::ConfigFile config = slsim::load_config_file(config_path);
  apply_overrides(config, flags);
  if (!config.sweep) {
    throw slsim::ConfigError("missing required field sweep");
  }
  slsim::SweepSpec spec{config.sim, config.sweep->axes,
                        config.sweep->replications, config.sweep->max_runs};
  const slsim::SweepTable table = slsim::sweep(spec, flags.jobs);
  auto out = open_output(flags.out);
  slsim::write_csv(table, out);
  return 0;
}

int cmd_cost(const std::string& config_path, const CommonFlags& flags) {
  slsim::ConfigFile config = slsim::load_config_file(config_path);
  apply_overrides(config, flags);
  if (!config.cost) {
    throw slsim::ConfigError("missing required field cost");
  }
  const slsim::RunResult result = simulate(config, {});
  const double arrival_rate = 1.0 / slsim::mean(config.sim.base.arrival);
  const slsim::CostRates rates = slsim::estimate_cost(
      result.report, arrival_rate, slsim::mean(config.sim.base.warm_service),
      slsim::mean(config.sim.base.cold_service), *config.cost);
  json doc = {{"developer_cost_rate", rates.developer_cost_rate},
              {"provider_cost_rate", rates.provider_cost_rate}};
  attach_meta(doc, flags);
  emit_json(doc, flags.out);
  return 0;
}

int cmd_trace_metrics(const std::string& csv_path, double window, double step,
                      const CommonFlags& flags) {
  std::ifstream in(csv_path);
  if (!in) {
    throw slsim::ConfigError("cannot open request log: " + csv_path);
  }
  const std::vector<slsim::RequestRecord> records =
      slsim::read_request_csv(in);
  slsim::EmpiricalMetricsOptions options;
  options.window = window;
  options.sample_step = step;
  const slsim::EmpiricalMetrics metrics =
      slsim::empirical_metrics(records, options);
  json doc = {{"cold_start_probability", metrics.cold_start_probability},
              {"wasted_capacity", metrics.wasted_capacity},
              {"t0", metrics.t0},
              {"sample_step", metrics.sample_step},
              {"warm_pool_count_series", metrics.warm_pool_count_series},
              {"running_count_series", metrics.running_count_series},
              {"idle_count_series", metrics.idle_count_series}};
  attach_meta(doc, flags);
  emit_json(doc, flags.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event performance simulator for scale-per-request "
               "serverless platforms"};
  app.require_subcommand(1);

  std::string config_path;
  std::string csv_path;
  double window = 600.0;
  double step = 10.0;
  CommonFlags flags;

  CLI::App* run_cmd =
      app.add_subcommand("run", "Steady-state simulation; report as JSON");
  run_cmd->add_option("config", config_path, "Config file (JSON)")->required();
  add_common_flags(run_cmd, flags, true);

  CLI::App* transient_cmd = app.add_subcommand(
      "transient", "Transient run from an initial warm pool; series as CSV");
  transient_cmd->add_option("config", config_path, "Config file (JSON)")
      ->required();
  add_common_flags(transient_cmd, flags, true);

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "What-if parameter sweep; table as CSV");
  sweep_cmd->add_option("config", config_path, "Config file (JSON)")
      ->required();
  add_common_flags(sweep_cmd, flags, true);
  sweep_cmd->get_option("--out")->required();

  CLI::App* cost_cmd = app.add_subcommand(
      "cost", "Developer and provider cost rates for a workload");
  cost_cmd->add_option("config", config_path, "Config file (JSON)")->required();
  add_common_flags(cost_cmd, flags, true);

  CLI::App* trace_cmd = app.add_subcommand(
      "trace-metrics", "Empirical metrics from a request log CSV");
  trace_cmd->add_option("csv", csv_path, "Request log CSV")->required();
  trace_cmd->add_option("--window", window,
                        "Warm-pool unique-instance window (seconds)");
  trace_cmd->add_option("--step", step, "Sampling step (seconds)");
  add_common_flags(trace_cmd, flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(config_path, flags);
    if (transient_cmd->parsed()) return cmd_transient(config_path, flags);
    if (sweep_cmd->parsed()) return cmd_sweep(config_path, flags);
    if (cost_cmd->parsed()) return cmd_cost(config_path, flags);
    if (trace_cmd->parsed())
      return cmd_trace_metrics(csv_path, window, step, flags);
  } catch (const slsim::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
