#pragma once

#include <cstdint>

#include "slsim/engine.hpp"

namespace slsim {

/// Scale-per-request scaling, but each instance accepts up to
/// concurrency_value simultaneous requests. With concurrency_value = 1
/// the run is bit-identical to engine run() for the same config.
struct ParConfig {
  SimConfig base;
  std::uint64_t concurrency_value = 1;
};

void validate(const ParConfig& config);

/// Arrival routing: newest instance with spare request slots; a new
/// instance is created (cold) only when no instance has capacity and the
/// busy-instance count is below max_concurrency, otherwise the request
/// is rejected. An instance is idle iff it has zero requests in flight,
/// and only idle time counts toward expiration. Service durations are
/// drawn independently of the in-flight count.
RunResult run_par(const ParConfig& config, const RunOptions& options = {});

}  // namespace slsim
