#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "slsim/process.hpp"
#include "slsim/request_log.hpp"

namespace slsim {

inline constexpr std::uint64_t kDefaultSeed = 123456789;

/// Full input of one scale-per-request simulation run.
struct SimConfig {
  ProcessSpec arrival;
  ProcessSpec warm_service;
  ProcessSpec cold_service;
  double expiration_threshold = 600.0;
  /// Platform cap on simultaneously busy instances; nullopt = unbounded.
  std::optional<std::uint64_t> max_concurrency;
  double horizon = 0.0;
  double skip_initial = 0.0;
  std::uint64_t seed = kDefaultSeed;
};

/// Throws ConfigError when horizon/skip/threshold/concurrency bounds are
/// violated. Process specs are valid by construction.
void validate(const SimConfig& config);

/// Steady-state output metrics. Counts are time-weighted over
/// [skip_initial, horizon]; probabilities are request-weighted over
/// arrivals in the same window.
struct SimReport {
  double cold_start_probability = 0.0;
  double rejection_probability = 0.0;
  double avg_server_count = 0.0;
  double avg_running_count = 0.0;
  double avg_idle_count = 0.0;
  /// Mean creation-to-termination span of instances terminated inside
  /// the measurement window; survivors at the horizon are excluded.
  double avg_lifespan = 0.0;
  /// live-instance count -> fraction of measured time.
  std::map<std::uint64_t, double> instance_count_histogram;
  std::uint64_t requests_total = 0;
  std::uint64_t requests_cold = 0;
  std::uint64_t requests_rejected = 0;
  double avg_utilization = 0.0;
  double avg_wasted_capacity = 0.0;

  std::uint64_t requests_warm() const {
    return requests_total - requests_cold - requests_rejected;
  }
};

/// Fraction of measured time with exactly k live instances.
inline const std::map<std::uint64_t, double>& instance_count_distribution(
    const SimReport& report) {
  return report.instance_count_histogram;
}

enum class EventKind { ArrivalCold, ArrivalWarm, ArrivalRejected, Departure, Expiration };

const char* to_string(EventKind kind);

struct EventRecord {
  double time = 0.0;
  EventKind kind = EventKind::ArrivalCold;
  /// -1 for rejected arrivals (no instance involved).
  std::int64_t instance_id = -1;
};

/// Ordered event log of a whole run, including any warm-up interval.
struct EventTrace {
  std::vector<EventRecord> records;
};

/// One record per line: time,kind,instance_id. Times keep 12
/// significant digits so replays stay unambiguous.
void write_csv(const EventTrace& trace, std::ostream& out);

/// Per-run time series sampled on a uniform grid. instance_count is the
/// piecewise-constant count after all events at t; the avg_* columns are
/// time averages over [0, t]; cold_start_probability is the cold
/// fraction of arrivals in the bucket ending at t.
struct SeriesPoint {
  double t = 0.0;
  double instance_count = 0.0;
  double avg_instance_count = 0.0;
  double avg_running_count = 0.0;
  double cold_start_probability = 0.0;
};

struct RunSeries {
  double grid_step = 0.0;
  std::vector<SeriesPoint> points;
};

struct RunOptions {
  bool collect_trace = false;
  /// Emit one RequestRecord per accepted request arriving inside the
  /// measurement window (response time known at assignment).
  bool collect_requests = false;
  std::optional<double> grid_step;
};

struct RunResult {
  SimReport report;
  EventTrace trace;
  std::vector<RequestRecord> requests;
  RunSeries series;
};

/// Run the scale-per-request event loop to the configured horizon.
RunResult run(const SimConfig& config, const RunOptions& options = {});

}  // namespace slsim
