#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "slsim/analysis.hpp"
#include "slsim/temporal.hpp"

namespace slsim {

/// Sweep section of a config file; the base config comes from the same
/// file's workload/platform/simulation sections.
struct SweepFileSpec {
  std::vector<SweepAxis> axes;
  std::size_t replications = 1;
  std::size_t max_runs = 10000;
};

/// Everything a config file can carry. Unknown keys anywhere are
/// rejected with an error naming the offending key; durations are in
/// seconds, rates in 1/seconds.
struct ConfigFile {
  ParConfig sim;
  std::size_t replications = 1;
  double grid_step = 10.0;
  std::optional<CostSpec> cost;
  std::optional<InitialState> initial_state;
  std::optional<SweepFileSpec> sweep;
};

ConfigFile parse_config(const nlohmann::json& doc);
ConfigFile load_config_file(const std::string& path);

nlohmann::json process_to_json(const ProcessSpec& spec);
ProcessSpec process_from_json(const nlohmann::json& node,
                              const std::string& path);

/// JSON keys are exactly the report field names in snake case.
nlohmann::json report_to_json(const SimReport& report);

}  // namespace slsim
