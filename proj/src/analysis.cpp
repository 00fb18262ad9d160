#include "slsim/analysis.hpp"

#include <atomic>
#include <cmath>
#include <future>
#include <ostream>

#include "slsim/engine.hpp"

namespace slsim {

void validate(const CostSpec& spec) {
  if (!(spec.price_per_request >= 0.0) ||
      !(spec.price_per_memory_second >= 0.0) ||
      !(spec.provider_unit_cost >= 0.0)) {
    throw ConfigError("cost prices must be >= 0");
  }
  if (!(spec.memory >= 0.0)) {
    throw ConfigError("cost memory must be >= 0");
  }
  if (!(spec.billed_cold_fraction >= 0.0 && spec.billed_cold_fraction <= 1.0)) {
    throw ConfigError("billed_cold_fraction must be within [0, 1]");
  }
}

CostRates estimate_cost(const SimReport& report, double arrival_rate,
                        double warm_mean, double cold_mean,
                        const CostSpec& cost) {
  validate(cost);
  const double accepted_rate =
      arrival_rate * (1.0 - report.rejection_probability);
  const double p_cold = report.cold_start_probability;
  const double billed_seconds_per_request =
      p_cold * cost.billed_cold_fraction * cold_mean +
      (1.0 - p_cold) * warm_mean;
  CostRates rates;
  rates.developer_cost_rate =
      accepted_rate * (cost.price_per_request +
                       cost.price_per_memory_second * cost.memory *
                           billed_seconds_per_request);
  rates.provider_cost_rate = cost.provider_unit_cost * report.avg_server_count;
  return rates;
}

namespace {

void apply_axis(ParConfig& config, const std::string& path, double value) {
  if (path == "workload.arrival.rate") {
    if (!config.base.arrival.as_exponential()) {
      throw ConfigError("sweep axis workload.arrival.rate requires an "
                        "exponential arrival process");
    }
    config.base.arrival = ProcessSpec::exponential(value);
  } else if (path == "platform.expiration_threshold") {
    config.base.expiration_threshold = value;
  } else if (path == "platform.max_concurrency") {
    if (!(value >= 1.0) || value != std::floor(value)) {
      throw ConfigError("sweep values for platform.max_concurrency must be "
                        "integers >= 1");
    }
    config.base.max_concurrency = static_cast<std::uint64_t>(value);
  } else if (path == "platform.concurrency_value") {
    if (!(value >= 1.0) || value != std::floor(value)) {
      throw ConfigError("sweep values for platform.concurrency_value must be "
                        "integers >= 1");
    }
    config.concurrency_value = static_cast<std::uint64_t>(value);
  } else {
    throw ConfigError("unknown sweep axis path: " + path);
  }
}

std::array<double, kSweepMetricNames.size()> metric_values(
    const SimReport& report) {
  return {report.cold_start_probability,
          report.rejection_probability,
          report.avg_server_count,
          report.avg_running_count,
          report.avg_idle_count,
          report.avg_lifespan,
          report.avg_utilization,
          report.avg_wasted_capacity};
}

constexpr double kZ95 = 1.959963984540054;

}  // namespace

SweepTable sweep(const SweepSpec& spec, unsigned jobs) {
  if (spec.replications < 1) {
    throw ConfigError("sweep replications must be >= 1");
  }
  std::size_t grid_size = 1;
  for (const SweepAxis& axis : spec.axes) {
    if (axis.values.empty()) {
      throw ConfigError("sweep axis " + axis.path + " has no values");
    }
    grid_size *= axis.values.size();
  }
  const std::size_t total_runs = grid_size * spec.replications;
  if (total_runs > spec.max_runs) {
    throw ConfigError("sweep budget exceeded: " + std::to_string(total_runs) +
                      " runs requested, max_runs is " +
                      std::to_string(spec.max_runs));
  }

  // Materialize the grid up front so axis-path errors surface before any
  // simulation starts.
  std::vector<ParConfig> configs;
  std::vector<std::vector<double>> axis_values;
  configs.reserve(grid_size);
  axis_values.reserve(grid_size);
  for (std::size_t point = 0; point < grid_size; ++point) {
    ParConfig config = spec.base;
    std::vector<double> values(spec.axes.size());
    std::size_t remainder = point;
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      const SweepAxis& axis = spec.axes[a];
      const std::size_t idx = remainder % axis.values.size();
      remainder /= axis.values.size();
      values[a] = axis.values[idx];
      apply_axis(config, axis.path, axis.values[idx]);
    }
    validate(config);
    configs.push_back(std::move(config));
    axis_values.push_back(std::move(values));
  }

  std::vector<SimReport> reports(total_runs);
  const auto run_one = [&](std::size_t i) {
    const std::size_t point = i / spec.replications;
    const std::size_t replica = i % spec.replications;
    ParConfig config = configs[point];
    config.base.seed =
        spec.base.base.seed + point * spec.replications + replica;
    if (config.concurrency_value == 1) {
      reports[i] = run(config.base).report;
    } else {
      reports[i] = run_par(config).report;
    }
  };

  if (jobs <= 1 || total_runs == 1) {
    for (std::size_t i = 0; i < total_runs; ++i) run_one(i);
  } else {
    std::vector<std::future<void>> futures;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < jobs; ++w) {
      futures.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i = next.fetch_add(1); i < total_runs;
             i = next.fetch_add(1)) {
          run_one(i);
        }
      }));
    }
    for (auto& f : futures) f.get();
  }

  SweepTable table;
  for (const SweepAxis& axis : spec.axes) {
    table.axis_paths.push_back(axis.path);
  }
  table.rows.resize(grid_size);
  const auto n = static_cast<double>(spec.replications);
  for (std::size_t point = 0; point < grid_size; ++point) {
    SweepRow& row = table.rows[point];
    row.axis_values = axis_values[point];
    std::array<double, kSweepMetricNames.size()> sums{};
    for (std::size_t r = 0; r < spec.replications; ++r) {
      const auto values = metric_values(reports[point * spec.replications + r]);
      for (std::size_t m = 0; m < values.size(); ++m) sums[m] += values[m];
    }
    for (std::size_t m = 0; m < sums.size(); ++m) {
      row.metrics[m].mean = sums[m] / n;
    }
    if (spec.replications > 1) {
      std::array<double, kSweepMetricNames.size()> ss{};
      for (std::size_t r = 0; r < spec.replications; ++r) {
        const auto values =
            metric_values(reports[point * spec.replications + r]);
        for (std::size_t m = 0; m < values.size(); ++m) {
          const double d = values[m] - row.metrics[m].mean;
          ss[m] += d * d;
        }
      }
      for (std::size_t m = 0; m < ss.size(); ++m) {
        row.metrics[m].ci_half_width =
            kZ95 * std::sqrt(ss[m] / (n - 1.0)) / std::sqrt(n);
      }
    }
  }
  return table;
}

void write_csv(const SweepTable& table, std::ostream& out) {
  bool first = true;
  for (const std::string& path : table.axis_paths) {
    if (!first) out << ',';
    out << path;
    first = false;
  }
  for (const char* name : kSweepMetricNames) {
    if (!first) out << ',';
    out << name << ",ci_" << name;
    first = false;
  }
  out << '\n';
  char buf[64];
  for (const SweepRow& row : table.rows) {
    first = true;
    for (double v : row.axis_values) {
      if (!first) out << ',';
      std::snprintf(buf, sizeof(buf), "%.12g", v);
      out << buf;
      first = false;
    }
    for (const SweepCell& cell : row.metrics) {
      if (!first) out << ',';
      std::snprintf(buf, sizeof(buf), "%.12g,%.12g", cell.mean,
                    cell.ci_half_width);
      out << buf;
      first = false;
    }
    out << '\n';
  }
}

}  // namespace slsim
