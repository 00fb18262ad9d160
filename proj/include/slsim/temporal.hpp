#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "slsim/engine.hpp"

namespace slsim {

/// Snapshot of one pre-existing instance at run start (t = 0).
struct InstanceSnapshot {
  enum class State { Idle, Busy };

  State state = State::Idle;
  /// Creation instant relative to run start; never positive. Offsets
  /// order the snapshot pool for newest-first routing (ties broken by
  /// position in the list, later entries treated as newer).
  double creation_time_offset = 0.0;
  /// How long the instance has already been in its current state.
  double time_in_state = 0.0;
  /// Busy only: service time still ahead of the instance.
  double remaining_busy = 0.0;
};

/// A warm pool to seed a transient run with.
struct InitialState {
  std::vector<InstanceSnapshot> instances;
};

/// Throws ConfigError on snapshots that could not have been observed:
/// idle past the expiration threshold, negative ages, busy without
/// remaining work, or a state entered before the instance existed.
void validate(const InitialState& init, double expiration_threshold);

struct TransientOptions {
  bool collect_trace = false;
  bool collect_requests = false;
  double grid_step = 10.0;
};

/// Same event semantics as run(), but the calendar starts from the given
/// warm pool and metrics cover [0, horizon] (no warm-up skip). The
/// config's horizon and skip_initial fields are ignored.
RunResult run_transient(const SimConfig& config, const InitialState& init,
                        double horizon, const TransientOptions& options = {});

/// Across-replication mean and 95% CI half-width, per grid point.
struct EnsembleMetric {
  std::vector<double> mean;
  std::vector<double> ci_half_width;
};

struct EnsembleCurve {
  std::vector<double> grid;
  std::size_t n_runs = 0;
  EnsembleMetric instance_count;
  EnsembleMetric avg_instance_count;
  EnsembleMetric avg_running_count;
  EnsembleMetric cold_start_probability;
};

/// Long-format CSV: t,metric,mean,ci_low,ci_high.
void write_csv(const EnsembleCurve& curve, std::ostream& out);

/// n_runs independent replications seeded config.seed + run index,
/// aggregated per grid point. jobs > 1 runs replications in parallel;
/// results do not depend on the job count.
EnsembleCurve run_ensemble(const SimConfig& config, const InitialState& init,
                           double horizon, std::size_t n_runs,
                           double grid_step, unsigned jobs = 1);

/// Same, with explicit per-run seeds (repeated seeds give zero CI).
EnsembleCurve run_ensemble_seeded(const SimConfig& config,
                                  const InitialState& init, double horizon,
                                  std::span<const std::uint64_t> seeds,
                                  double grid_step, unsigned jobs = 1);

}  // namespace slsim
