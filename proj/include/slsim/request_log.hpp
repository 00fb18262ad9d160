#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "slsim/process.hpp"

namespace slsim {

/// One request as seen from a platform log (or exported by the engine).
struct RequestRecord {
  double start_time = 0.0;
  double response_time = 0.0;
  bool is_cold = false;
  std::string instance_id;
};

/// CSV with header start_time,response_time,is_cold,instance_id.
/// is_cold accepts 0/1/true/false.
std::vector<RequestRecord> read_request_csv(std::istream& in);
void write_request_csv(const std::vector<RequestRecord>& records,
                       std::ostream& out);

/// Simulator inputs recovered from a request log.
struct ParameterEstimate {
  double arrival_rate;
  double warm_mean;
  double cold_mean;
  ProcessSpec warm_empirical;
  ProcessSpec cold_empirical;
};

/// Requires at least one warm and one cold record; arrival rate is
/// (n-1) / (last - first start time).
ParameterEstimate estimate_parameters(std::vector<RequestRecord> records);

struct EmpiricalMetricsOptions {
  /// Sliding window for the unique-instance warm-pool estimator.
  double window = 600.0;
  double sample_step = 10.0;
};

/// Log-side counterparts of the simulator metrics. The warm-pool
/// estimator counts instances only after a completed response, so it
/// undercounts instances idle longer than the window and instances
/// still serving their first request; idle_count inherits that bias
/// and may dip below zero pointwise.
struct EmpiricalMetrics {
  double cold_start_probability = 0.0;
  double wasted_capacity = 0.0;  // clamped to [0, 1]
  double t0 = 0.0;
  double sample_step = 0.0;
  std::vector<double> warm_pool_count_series;
  std::vector<double> running_count_series;
  std::vector<double> idle_count_series;
};

EmpiricalMetrics empirical_metrics(const std::vector<RequestRecord>& records,
                                   const EmpiricalMetricsOptions& options = {});

}  // namespace slsim
