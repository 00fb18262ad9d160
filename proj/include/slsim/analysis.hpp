#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "slsim/parsim.hpp"

namespace slsim {

/// Billing knobs. Per-request and runtime charges for the developer
/// side; a flat per-instance-second rate for the provider side.
struct CostSpec {
  double price_per_request = 0.0;        // currency / request
  double price_per_memory_second = 0.0;  // currency / (GB * s)
  double memory = 0.0;                   // GB
  /// Fraction of the cold service interval that is billed (platform
  /// provisioning time is typically free, application init is not).
  double billed_cold_fraction = 1.0;
  double provider_unit_cost = 0.0;  // currency / (instance * s)
};

void validate(const CostSpec& spec);

struct CostRates {
  double developer_cost_rate = 0.0;  // currency / s
  double provider_cost_rate = 0.0;   // currency / s
};

/// developer = accepted_rate * [price_per_request + price_per_memory_second
///             * memory * (p_cold * billed_cold_fraction * cold_mean
///                         + (1 - p_cold) * warm_mean)]
/// provider  = provider_unit_cost * avg_server_count
/// with accepted_rate = arrival_rate * (1 - rejection_probability), using
/// the run-measured probabilities rather than analytic approximations.
CostRates estimate_cost(const SimReport& report, double arrival_rate,
                        double warm_mean, double cold_mean,
                        const CostSpec& cost);

/// One sweepable parameter, addressed by its config-file path. Supported:
/// workload.arrival.rate (exponential arrivals only),
/// platform.expiration_threshold, platform.max_concurrency,
/// platform.concurrency_value.
struct SweepAxis {
  std::string path;
  std::vector<double> values;
};

struct SweepSpec {
  ParConfig base;
  std::vector<SweepAxis> axes;
  std::size_t replications = 1;
  /// Budget: grid size x replications may not exceed this.
  std::size_t max_runs = 10000;
};

inline constexpr std::array<const char*, 8> kSweepMetricNames = {
    "cold_start_probability", "rejection_probability", "avg_server_count",
    "avg_running_count",      "avg_idle_count",        "avg_lifespan",
    "avg_utilization",        "avg_wasted_capacity"};

struct SweepCell {
  double mean = 0.0;
  double ci_half_width = 0.0;  // 0 with a single replication
};

struct SweepRow {
  std::vector<double> axis_values;
  std::array<SweepCell, kSweepMetricNames.size()> metrics;
};

struct SweepTable {
  std::vector<std::string> axis_paths;
  std::vector<SweepRow> rows;
};

/// Cartesian grid over the axes (last axis fastest), replications per
/// point seeded base_seed + point_index * replications + replica_index.
/// Rows are independent; jobs > 1 fans the runs out without changing
/// any result.
SweepTable sweep(const SweepSpec& spec, unsigned jobs = 1);

/// Header: axis paths, then metric,ci_metric pairs.
void write_csv(const SweepTable& table, std::ostream& out);

}  // namespace slsim
