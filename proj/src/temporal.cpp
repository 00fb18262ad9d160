#include "slsim/temporal.hpp"

#include <cmath>
#include <future>
#include <ostream>
#include <string>

#include "sim_internal.hpp"

namespace slsim {

namespace {

constexpr double kZ95 = 1.959963984540054;

std::string snapshot_label(std::size_t index) {
  return "initial_state.instances[" + std::to_string(index) + "]";
}

}  // namespace

void validate(const InitialState& init, double expiration_threshold) {
  for (std::size_t i = 0; i < init.instances.size(); ++i) {
    const InstanceSnapshot& snap = init.instances[i];
    if (!(snap.creation_time_offset <= 0.0)) {
      throw ConfigError(snapshot_label(i) +
                        ": creation_time_offset must be <= 0");
    }
    if (!(snap.time_in_state >= 0.0)) {
      throw ConfigError(snapshot_label(i) + ": time_in_state must be >= 0");
    }
    if (snap.creation_time_offset > -snap.time_in_state) {
      throw ConfigError(snapshot_label(i) +
                        ": state predates the instance (creation_time_offset "
                        "must be <= -time_in_state)");
    }
    if (snap.state == InstanceSnapshot::State::Idle) {
      if (!(snap.time_in_state < expiration_threshold)) {
        throw ConfigError(snapshot_label(i) +
                          ": idle time_in_state must be below the "
                          "expiration threshold");
      }
      if (snap.remaining_busy != 0.0) {
        throw ConfigError(snapshot_label(i) +
                          ": remaining_busy is only valid for busy instances");
      }
    } else {
      if (!(snap.remaining_busy > 0.0)) {
        throw ConfigError(snapshot_label(i) +
                          ": busy instances need remaining_busy > 0");
      }
    }
  }
}

RunResult run_transient(const SimConfig& config, const InitialState& init,
                        double horizon, const TransientOptions& options) {
  if (!(horizon > 0.0)) {
    throw ConfigError("transient horizon must be > 0");
  }
  if (!(options.grid_step > 0.0)) {
    throw ConfigError("grid_step must be > 0");
  }
  SimConfig effective = config;
  effective.horizon = horizon;
  effective.skip_initial = 0.0;
  validate(effective);
  validate(init, effective.expiration_threshold);

  detail::CoreParams params;
  params.config = &effective;
  params.horizon = horizon;
  params.skip = 0.0;
  params.seeds.reserve(init.instances.size());
  for (const InstanceSnapshot& snap : init.instances) {
    detail::SeedInstance seed;
    seed.creation_time = snap.creation_time_offset;
    if (snap.state == InstanceSnapshot::State::Busy) {
      seed.busy = true;
      seed.busy_until = snap.remaining_busy;
    } else {
      seed.busy = false;
      seed.idle_since = -snap.time_in_state;
    }
    params.seeds.push_back(seed);
  }

  RunOptions run_options;
  run_options.collect_trace = options.collect_trace;
  run_options.collect_requests = options.collect_requests;
  run_options.grid_step = options.grid_step;
  return detail::simulate_core(params, run_options);
}

namespace {

EnsembleMetric aggregate(const std::vector<RunSeries>& runs,
                         double SeriesPoint::* field) {
  const std::size_t n_points = runs.front().points.size();
  const auto n = static_cast<double>(runs.size());
  EnsembleMetric metric;
  metric.mean.resize(n_points);
  metric.ci_half_width.resize(n_points);
  for (std::size_t p = 0; p < n_points; ++p) {
    double sum = 0.0;
    for (const RunSeries& series : runs) {
      sum += series.points[p].*field;
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (const RunSeries& series : runs) {
      const double d = series.points[p].*field - mean;
      ss += d * d;
    }
    const double sample_std = std::sqrt(ss / (n - 1.0));
    metric.mean[p] = mean;
    metric.ci_half_width[p] = kZ95 * sample_std / std::sqrt(n);
  }
  return metric;
}

}  // namespace

EnsembleCurve run_ensemble_seeded(const SimConfig& config,
                                  const InitialState& init, double horizon,
                                  std::span<const std::uint64_t> seeds,
                                  double grid_step, unsigned jobs) {
  if (seeds.size() < 2) {
    throw ConfigError("ensemble needs at least 2 runs");
  }
  TransientOptions options;
  options.grid_step = grid_step;

  std::vector<RunSeries> runs(seeds.size());
  const auto run_one = [&](std::size_t i) {
    SimConfig cfg = config;
    cfg.seed = seeds[i];
    runs[i] = run_transient(cfg, init, horizon, options).series;
  };

  if (jobs <= 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) run_one(i);
  } else {
    std::vector<std::future<void>> futures;
    futures.reserve(jobs);
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < jobs; ++w) {
      futures.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i = next.fetch_add(1); i < seeds.size();
             i = next.fetch_add(1)) {
          run_one(i);
        }
      }));
    }
    for (auto& f : futures) f.get();
  }

  EnsembleCurve curve;
  curve.n_runs = seeds.size();
  curve.grid.reserve(runs.front().points.size());
  for (const SeriesPoint& point : runs.front().points) {
    curve.grid.push_back(point.t);
  }
  curve.instance_count = aggregate(runs, &SeriesPoint::instance_count);
  curve.avg_instance_count = aggregate(runs, &SeriesPoint::avg_instance_count);
  curve.avg_running_count = aggregate(runs, &SeriesPoint::avg_running_count);
  curve.cold_start_probability =
      aggregate(runs, &SeriesPoint::cold_start_probability);
  return curve;
}

EnsembleCurve run_ensemble(const SimConfig& config, const InitialState& init,
                           double horizon, std::size_t n_runs,
                           double grid_step, unsigned jobs) {
  std::vector<std::uint64_t> seeds(n_runs);
  for (std::size_t i = 0; i < n_runs; ++i) {
    seeds[i] = config.seed + i;
  }
  return run_ensemble_seeded(config, init, horizon, seeds, grid_step, jobs);
}

namespace {

void write_metric_rows(std::ostream& out, const EnsembleCurve& curve,
                       const char* name, const EnsembleMetric& metric) {
  char buf[160];
  for (std::size_t p = 0; p < curve.grid.size(); ++p) {
    const double mean = metric.mean[p];
    const double hw = metric.ci_half_width[p];
    std::snprintf(buf, sizeof(buf), "%.12g,%s,%.12g,%.12g,%.12g\n",
                  curve.grid[p], name, mean, mean - hw, mean + hw);
    out << buf;
  }
}

}  // namespace

void write_csv(const EnsembleCurve& curve, std::ostream& out) {
  out << "t,metric,mean,ci_low,ci_high\n";
  write_metric_rows(out, curve, "instance_count", curve.instance_count);
  write_metric_rows(out, curve, "avg_instance_count", curve.avg_instance_count);
  write_metric_rows(out, curve, "avg_running_count", curve.avg_running_count);
  write_metric_rows(out, curve, "cold_start_probability",
                    curve.cold_start_probability);
}

}  // namespace slsim
