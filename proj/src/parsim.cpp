#include "slsim/parsim.hpp"

#include <queue>
#include <set>
#include <string>
#include <vector>

#include "sim_internal.hpp"

namespace slsim {

void validate(const ParConfig& config) {
  validate(config.base);
  if (config.concurrency_value < 1) {
    throw ConfigError("concurrency_value must be >= 1");
  }
}

namespace {

using detail::kInf;

struct ParInstance {
  double creation_time = 0.0;
  double idle_since = 0.0;
  std::uint64_t in_flight = 0;
  std::uint64_t idle_epoch = 0;
  bool terminated = false;
};

struct CompletionEntry {
  double time;
  std::uint64_t id;

  bool operator>(const CompletionEntry& other) const {
    if (time != other.time) return time > other.time;
    return id > other.id;
  }
};

struct ExpirationEntry {
  double time;
  std::uint64_t id;
  std::uint64_t epoch;

  bool operator>(const ExpirationEntry& other) const {
    if (time != other.time) return time > other.time;
    return id > other.id;
  }
};

template <typename T>
using MinHeap = std::priority_queue<T, std::vector<T>, std::greater<T>>;

}  // namespace

RunResult run_par(const ParConfig& config, const RunOptions& options) {
  validate(config);
  if (options.grid_step && !(*options.grid_step > 0.0)) {
    throw ConfigError("grid_step must be > 0");
  }
  const SimConfig& cfg = config.base;
  const double horizon = cfg.horizon;
  const double skip = cfg.skip_initial;
  const double threshold = cfg.expiration_threshold;
  const std::uint64_t capacity = config.concurrency_value;

  RngStream rng(cfg.seed);
  std::vector<ParInstance> instances;
  // Instances with a spare request slot, keyed (creation_time, id);
  // routing picks the largest key (the newest).
  std::set<std::pair<double, std::uint64_t>> available;
  MinHeap<CompletionEntry> completions;  // one entry per in-flight request
  MinHeap<ExpirationEntry> expirations;
  std::uint64_t busy_instances = 0;
  std::uint64_t live_instances = 0;

  detail::MetricsAccumulator acc(skip, horizon, options.grid_step);
  detail::RequestCounters counters;
  detail::LifespanAccumulator lifespans;
  RunResult result;

  const auto record = [&](double t, EventKind kind, std::int64_t id) {
    if (options.collect_trace) {
      result.trace.records.push_back({t, kind, id});
    }
  };

  const auto idle_count = [&] { return live_instances - busy_instances; };

  const auto start_request = [&](std::uint64_t id, double t, double duration) {
    ParInstance& inst = instances[id];
    if (inst.in_flight == 0) {
      ++busy_instances;  // leaves idle; pending expiration goes stale
    }
    ++inst.in_flight;
    if (inst.in_flight == capacity) {
      available.erase({inst.creation_time, id});
    }
    completions.push({t + duration, id});
  };

  double next_arrival = sample(cfg.arrival, rng);

  try {
    for (;;) {
      while (!expirations.empty()) {
        const ExpirationEntry& top = expirations.top();
        const ParInstance& inst = instances[top.id];
        if (!inst.terminated && inst.in_flight == 0 &&
            inst.idle_epoch == top.epoch) {
          break;
        }
        expirations.pop();
      }

      const double t_dep = completions.empty() ? kInf : completions.top().time;
      const double t_exp = expirations.empty() ? kInf : expirations.top().time;
      const double t_arr = next_arrival;

      if (t_dep <= t_exp && t_dep <= t_arr) {
        if (t_dep > horizon) break;
        const std::uint64_t id = completions.top().id;
        acc.advance(t_dep, busy_instances, idle_count());
        completions.pop();
        ParInstance& inst = instances[id];
        if (inst.terminated || inst.in_flight == 0) {
          throw InternalError("departure for instance " + std::to_string(id) +
                              (inst.terminated ? " which is terminated"
                                               : " with nothing in flight"));
        }
        if (inst.in_flight == capacity) {
          available.insert({inst.creation_time, id});
        }
        --inst.in_flight;
        if (inst.in_flight == 0) {
          --busy_instances;
          inst.idle_since = t_dep;
          ++inst.idle_epoch;
          expirations.push({t_dep + threshold, id, inst.idle_epoch});
        }
        record(t_dep, EventKind::Departure, static_cast<std::int64_t>(id));
      } else if (t_exp <= t_arr) {
        if (t_exp > horizon) break;
        const std::uint64_t id = expirations.top().id;
        acc.advance(t_exp, busy_instances, idle_count());
        expirations.pop();
        ParInstance& inst = instances[id];
        inst.terminated = true;
        available.erase({inst.creation_time, id});
        --live_instances;
        if (t_exp >= skip) {
          lifespans.record(inst.creation_time, t_exp);
        }
        record(t_exp, EventKind::Expiration, static_cast<std::int64_t>(id));
      } else {
        if (t_arr > horizon) break;
        acc.advance(t_arr, busy_instances, idle_count());
        const bool in_window = t_arr >= skip;
        if (in_window) ++counters.total;
        if (!available.empty()) {
          const std::uint64_t id = std::prev(available.end())->second;
          const double duration = sample(cfg.warm_service, rng);
          start_request(id, t_arr, duration);
          acc.count_arrival_for_grid(false);
          record(t_arr, EventKind::ArrivalWarm, static_cast<std::int64_t>(id));
          if (in_window && options.collect_requests) {
            result.requests.push_back(
                {t_arr, duration, false, std::to_string(id)});
          }
        } else if (!cfg.max_concurrency ||
                   busy_instances < *cfg.max_concurrency) {
          const auto id = static_cast<std::uint64_t>(instances.size());
          const double duration = sample(cfg.cold_service, rng);
          ParInstance inst;
          inst.creation_time = t_arr;
          instances.push_back(inst);
          ++live_instances;
          if (capacity > 1) {
            available.insert({t_arr, id});
          }
          start_request(id, t_arr, duration);
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
    detail::abort_with_trace(e, result.trace);
  }

  acc.finish(busy_instances, idle_count());
  result.report = detail::finalize_report(acc, counters, lifespans);
  result.series = acc.take_series();
  return result;
}

}  // namespace slsim
