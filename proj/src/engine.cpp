#include "slsim/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <queue>
#include <set>
#include <string>

#include "slsim/instance.hpp"
#include "sim_internal.hpp"

namespace slsim {

void validate(const SimConfig& config) {
  if (!(config.skip_initial >= 0.0)) {
    throw ConfigError("skip_initial must be >= 0");
  }
  if (!(config.horizon > config.skip_initial)) {
    throw ConfigError("horizon must be greater than skip_initial");
  }
  if (!(config.expiration_threshold > 0.0)) {
    throw ConfigError("expiration_threshold must be > 0");
  }
  if (config.max_concurrency && *config.max_concurrency < 1) {
    throw ConfigError("max_concurrency must be >= 1 when bounded");
  }
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ArrivalCold:
      return "arrival-cold";
    case EventKind::ArrivalWarm:
      return "arrival-warm";
    case EventKind::ArrivalRejected:
      return "arrival-rejected";
    case EventKind::Departure:
      return "departure";
    case EventKind::Expiration:
      return "expiration";
  }
  return "unknown";
}

void write_csv(const EventTrace& trace, std::ostream& out) {
  char buf[64];
  for (const EventRecord& rec : trace.records) {
    std::snprintf(buf, sizeof(buf), "%.12g", rec.time);
    out << buf << ',' << to_string(rec.kind) << ',' << rec.instance_id << '\n';
  }
}

namespace detail {

SimReport finalize_report(MetricsAccumulator& acc, const RequestCounters& requests,
                          const LifespanAccumulator& lifespans) {
  SimReport report;
  const double window = acc.window();
  report.avg_running_count = acc.area_running() / window;
  report.avg_idle_count = acc.area_idle() / window;
  report.avg_server_count = report.avg_running_count + report.avg_idle_count;
  for (const auto& [count, time] : acc.histogram()) {
    report.instance_count_histogram[count] = time / window;
  }
  report.requests_total = requests.total;
  report.requests_cold = requests.cold;
  report.requests_rejected = requests.rejected;
  if (requests.total > 0) {
    report.cold_start_probability = static_cast<double>(requests.cold) /
                                    static_cast<double>(requests.total);
    report.rejection_probability = static_cast<double>(requests.rejected) /
                                   static_cast<double>(requests.total);
  }
  if (lifespans.count > 0) {
    report.avg_lifespan = lifespans.sum / static_cast<double>(lifespans.count);
  }
  if (report.avg_server_count > 0.0) {
    report.avg_utilization = report.avg_running_count / report.avg_server_count;
    report.avg_wasted_capacity = report.avg_idle_count / report.avg_server_count;
  }
  return report;
}

void abort_with_trace(const InternalError& error, const EventTrace& trace) {
  std::string message = error.what();
  if (!trace.records.empty()) {
    message += "; last events:";
    const std::size_t n = trace.records.size();
    char buf[96];
    for (std::size_t i = n > 12 ? n - 12 : 0; i < n; ++i) {
      const EventRecord& rec = trace.records[i];
      std::snprintf(buf, sizeof(buf), "\n  t=%.9g %s instance=%lld", rec.time,
                    to_string(rec.kind),
                    static_cast<long long>(rec.instance_id));
      message += buf;
    }
  }
  throw InternalError(message);
}

namespace {

struct ExpirationEntry {
  double time;
  std::uint64_t id;
  std::uint64_t epoch;

  // Min-heap on (time, id): simultaneous expirations fire in id order.
  bool operator>(const ExpirationEntry& other) const {
    if (time != other.time) return time > other.time;
    return id > other.id;
  }
};

struct DepartureEntry {
  double time;
  std::uint64_t id;

  bool operator>(const DepartureEntry& other) const {
    if (time != other.time) return time > other.time;
    return id > other.id;
  }
};

template <typename T>
using MinHeap = std::priority_queue<T, std::vector<T>, std::greater<T>>;

}  // namespace

RunResult simulate_core(const CoreParams& params, const RunOptions& options) {
  const SimConfig& cfg = *params.config;
  const double horizon = params.horizon;
  const double threshold = cfg.expiration_threshold;

  RngStream rng(cfg.seed);
  std::vector<FunctionInstance> instances;
  // Idle instances keyed by (creation_time, id); routing picks the
  // newest, i.e. the largest key.
  std::set<std::pair<double, std::uint64_t>> idle;
  MinHeap<DepartureEntry> departures;
  MinHeap<ExpirationEntry> expirations;

  MetricsAccumulator acc(params.skip, horizon, options.grid_step);
  RequestCounters counters;
  LifespanAccumulator lifespans;
  RunResult result;

  const auto record = [&](double t, EventKind kind, std::int64_t id) {
    if (options.collect_trace) {
      result.trace.records.push_back({t, kind, id});
    }
  };

  instances.reserve(params.seeds.size());
  for (const SeedInstance& seed : params.seeds) {
    const auto id = static_cast<std::uint64_t>(instances.size());
    if (seed.busy) {
      instances.push_back(FunctionInstance::restore_busy(
          id, seed.creation_time, seed.busy_until, threshold));
      departures.push({seed.busy_until, id});
    } else {
      instances.push_back(FunctionInstance::restore_idle(
          id, seed.creation_time, seed.idle_since, threshold));
      idle.insert({seed.creation_time, id});
      expirations.push(
          {instances[id].expiration_time(), id, instances[id].idle_epoch()});
    }
  }

  double next_arrival = sample(cfg.arrival, rng);

  const auto running_count = [&] { return departures.size(); };
  const auto idle_count = [&] { return idle.size(); };

  try {
    for (;;) {
      // Drop stale expiration entries (instance got reused or is gone).
      while (!expirations.empty()) {
        const ExpirationEntry& top = expirations.top();
        const FunctionInstance& inst = instances[top.id];
        if (inst.state() == InstanceState::Idle && inst.idle_epoch() == top.epoch) {
          break;
        }
        expirations.pop();
      }

      const double t_dep = departures.empty() ? kInf : departures.top().time;
      const double t_exp = expirations.empty() ? kInf : expirations.top().time;
      const double t_arr = next_arrival;

      // Simultaneous events: departures, then expirations, then arrivals.
      if (t_dep <= t_exp && t_dep <= t_arr) {
        if (t_dep > horizon) break;
        const std::uint64_t id = departures.top().id;
        acc.advance(t_dep, running_count(), idle_count());
        departures.pop();
        FunctionInstance& inst = instances[id];
        inst.complete(t_dep);
        idle.insert({inst.creation_time(), id});
        expirations.push({inst.expiration_time(), id, inst.idle_epoch()});
        record(t_dep, EventKind::Departure, static_cast<std::int64_t>(id));
      } else if (t_exp <= t_arr) {
        if (t_exp > horizon) break;
        const std::uint64_t id = expirations.top().id;
        acc.advance(t_exp, running_count(), idle_count());
        expirations.pop();
        FunctionInstance& inst = instances[id];
        inst.terminate(t_exp);
        idle.erase({inst.creation_time(), id});
        if (t_exp >= params.skip) {
          lifespans.record(inst.creation_time(), t_exp);
        }
        record(t_exp, EventKind::Expiration, static_cast<std::int64_t>(id));
      } else {
        if (t_arr > horizon) break;
        acc.advance(t_arr, running_count(), idle_count());
        const bool in_window = t_arr >= params.skip;
        if (in_window) ++counters.total;
        if (!idle.empty()) {
          const std::uint64_t id = std::prev(idle.end())->second;
          const double duration = sample(cfg.warm_service, rng);
          FunctionInstance& inst = instances[id];
          idle.erase({inst.creation_time(), id});
          inst.assign_warm(t_arr, duration);
          departures.push({inst.busy_until(), id});
          acc.count_arrival_for_grid(false);
          record(t_arr, EventKind::ArrivalWarm, static_cast<std::int64_t>(id));
          if (in_window && options.collect_requests) {
            result.requests.push_back(
                {t_arr, duration, false, std::to_string(id)});
          }
        } else if (!cfg.max_concurrency ||
                   running_count() < *cfg.max_concurrency) {
          const auto id = static_cast<std::uint64_t>(instances.size());
          const double duration = sample(cfg.cold_service, rng);
          instances.push_back(
              FunctionInstance::create_cold(id, t_arr, duration, threshold));
          departures.push({instances[id].busy_until(), id});
          if (in_window) ++counters.cold;
          acc.count_arrival_for_grid(true);
          record(t_arr, EventKind::ArrivalCold, static_cast<std::int64_t>(id));
          if (in_window && options.collect_requests) {
            result.requests.push_back({t_arr, duration, true, std::to_string(id)});
          }
        } else {
          if (in_window) ++counters.rejected;
          acc.count_arrival_for_grid(false);
          record(t_arr, EventKind::ArrivalRejected, -1);
        }
        next_arrival = t_arr + sample(cfg.arrival, rng);
      }
    }
  } catch (const InternalError& e) {
    abort_with_trace(e, result.trace);
  }

  acc.finish(running_count(), idle_count());
  result.report = finalize_report(acc, counters, lifespans);
  result.series = acc.take_series();
  return result;
}

}  // namespace detail

RunResult run(const SimConfig& config, const RunOptions& options) {
  validate(config);
  if (options.grid_step && !(*options.grid_step > 0.0)) {
    throw ConfigError("grid_step must be > 0");
  }
  detail::CoreParams params;
  params.config = &config;
  params.horizon = config.horizon;
  params.skip = config.skip_initial;
  return detail::simulate_core(params, options);
}

}  // namespace slsim
