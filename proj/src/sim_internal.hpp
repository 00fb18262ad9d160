#pragma once

// Shared internals of the engine and parsim event loops. Both loops feed
// the same accumulator so a concurrency-value-1 parsim run reproduces an
// engine run bit for bit, report included.

#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "slsim/engine.hpp"

namespace slsim::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Cold-fraction bookkeeping for the bucket ending at the next
/// unflushed grid point.
struct GridBucket {
  std::uint64_t total = 0;
  std::uint64_t cold = 0;
};

/// Time-weighted metric accumulation plus optional grid sampling.
/// advance() must be called with the pre-event counts before every
/// event is applied; grid points strictly before the new time are
/// flushed with the old state, so a point at an event time picks up the
/// state after all events at that instant (piecewise-constant,
/// right-continuous).
class MetricsAccumulator {
 public:
  MetricsAccumulator(double skip, double horizon, std::optional<double> grid_step)
      : skip_(skip), horizon_(horizon), grid_step_(grid_step) {
    if (grid_step_) {
      series_.grid_step = *grid_step_;
    }
  }

  void advance(double to, std::uint64_t running, std::uint64_t idle) {
    if (grid_step_) {
      flush_grid_before(to, running, idle);
    }
    const double live = static_cast<double>(running + idle);
    if (to > t_cur_) {
      const double from = t_cur_ > skip_ ? t_cur_ : skip_;
      if (to > from) {
        const double w = to - from;
        area_running_ += static_cast<double>(running) * w;
        area_idle_ += static_cast<double>(idle) * w;
        histogram_[running + idle] += w;
      }
      const double w_full = to - t_cur_;
      area_running_full_ += static_cast<double>(running) * w_full;
      area_live_full_ += live * w_full;
      t_cur_ = to;
    }
  }

  void count_arrival_for_grid(bool is_cold) {
    if (!grid_step_) {
      return;
    }
    ++bucket_.total;
    if (is_cold) {
      ++bucket_.cold;
    }
  }

  /// Advance to the horizon and emit the grid point sitting exactly on
  /// it (or the last one before it) with the final state.
  void finish(std::uint64_t running, std::uint64_t idle) {
    advance(horizon_, running, idle);
    if (grid_step_) {
      while (next_grid_time() <= horizon_) {
        emit_grid_point(next_grid_time(), running, idle, 0.0);
      }
    }
  }

  double window() const { return horizon_ - skip_; }
  double area_running() const { return area_running_; }
  double area_idle() const { return area_idle_; }
  const std::map<std::uint64_t, double>& histogram() const { return histogram_; }
  RunSeries&& take_series() { return std::move(series_); }

 private:
  double next_grid_time() const {
    return static_cast<double>(grid_index_) * *grid_step_;
  }

  void flush_grid_before(double to, std::uint64_t running, std::uint64_t idle) {
    while (next_grid_time() < to && next_grid_time() <= horizon_) {
      const double dt = next_grid_time() - t_cur_;
      emit_grid_point(next_grid_time(), running, idle, dt);
    }
  }

  void emit_grid_point(double g, std::uint64_t running, std::uint64_t idle,
                       double dt_since_last_event) {
    const double live = static_cast<double>(running + idle);
    const double live_area = area_live_full_ + live * dt_since_last_event;
    const double running_area =
        area_running_full_ + static_cast<double>(running) * dt_since_last_event;
    SeriesPoint point;
    point.t = g;
    point.instance_count = live;
    point.avg_instance_count = g > 0.0 ? live_area / g : live;
    point.avg_running_count =
        g > 0.0 ? running_area / g : static_cast<double>(running);
    point.cold_start_probability =
        bucket_.total > 0
            ? static_cast<double>(bucket_.cold) / static_cast<double>(bucket_.total)
            : 0.0;
    series_.points.push_back(point);
    bucket_ = GridBucket{};
    ++grid_index_;
  }

  double skip_;
  double horizon_;
  std::optional<double> grid_step_;
  double t_cur_ = 0.0;
  double area_running_ = 0.0;
  double area_idle_ = 0.0;
  double area_running_full_ = 0.0;
  double area_live_full_ = 0.0;
  std::map<std::uint64_t, double> histogram_;
  RunSeries series_;
  std::uint64_t grid_index_ = 0;
  GridBucket bucket_;
};

struct RequestCounters {
  std::uint64_t total = 0;
  std::uint64_t cold = 0;
  std::uint64_t rejected = 0;
};

struct LifespanAccumulator {
  double sum = 0.0;
  std::uint64_t count = 0;

  void record(double creation_time, double termination_time) {
    sum += termination_time - creation_time;
    ++count;
  }
};

SimReport finalize_report(MetricsAccumulator& acc, const RequestCounters& requests,
                          const LifespanAccumulator& lifespans);

/// Re-throws an internal error with the tail of the event trace attached
/// (when one was collected), so aborted runs leave a usable dump.
[[noreturn]] void abort_with_trace(const InternalError& error,
                                   const EventTrace& trace);

/// Pre-existing instance injected at run start (transient analysis).
struct SeedInstance {
  bool busy = false;
  double creation_time = 0.0;  // <= 0, relative to run start
  double idle_since = 0.0;     // idle only
  double busy_until = 0.0;     // busy only
};

struct CoreParams {
  const SimConfig* config = nullptr;
  double horizon = 0.0;
  double skip = 0.0;
  std::vector<SeedInstance> seeds;
};

/// The scale-per-request event loop; engine::run and the transient
/// simulator are thin wrappers over this.
RunResult simulate_core(const CoreParams& params, const RunOptions& options);

}  // namespace slsim::detail
