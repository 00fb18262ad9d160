#pragma once

#include <cstdint>

#include "slsim/errors.hpp"

namespace slsim {

/// Initializing and Running share timing (a cold start is one busy
/// interval covering provisioning plus service); Initializing is kept
/// as a label so cold-serving instances are distinguishable in
/// snapshots and traces. Terminated is absorbing.
enum class InstanceState { Initializing, Running, Idle, Terminated };

const char* to_string(InstanceState state);

/// One function instance: lifecycle state, timestamps and expiration
/// bookkeeping. Owned by a single simulation run.
class FunctionInstance {
 public:
  /// Spin up a new instance for the request that triggered it. The
  /// instance is busy until now + cold_duration.
  static FunctionInstance create_cold(std::uint64_t id, double now,
                                      double cold_duration, double threshold);

  /// Rebuild an idle instance from a snapshot; idle_since may predate
  /// the run start (negative time).
  static FunctionInstance restore_idle(std::uint64_t id, double creation_time,
                                       double idle_since, double threshold);

  /// Rebuild a busy instance from a snapshot. Snapshot-busy instances
  /// are treated as warm-serving.
  static FunctionInstance restore_busy(std::uint64_t id, double creation_time,
                                       double busy_until, double threshold);

  /// Route a request to this idle instance. Requires Idle state and
  /// now earlier than the scheduled expiration (expiration wins ties).
  void assign_warm(double now, double warm_duration);

  /// Finish the in-flight request; the instance turns Idle and its
  /// termination is due at now + expiration_threshold.
  void complete(double now);

  /// Expire an instance that has been idle for the full threshold.
  void terminate(double now);

  std::uint64_t id() const { return id_; }
  InstanceState state() const { return state_; }
  double creation_time() const { return creation_time_; }
  double busy_until() const { return busy_until_; }
  double idle_since() const { return idle_since_; }
  double expiration_threshold() const { return expiration_threshold_; }
  double expiration_time() const { return idle_since_ + expiration_threshold_; }
  std::uint64_t served_count() const { return served_count_; }
  bool is_cold_serving() const { return is_cold_serving_; }

  bool is_busy() const {
    return state_ == InstanceState::Initializing ||
           state_ == InstanceState::Running;
  }

  /// Bumped each time the instance turns Idle; lets the engine detect
  /// stale expiration entries without removing them from its calendar.
  std::uint64_t idle_epoch() const { return idle_epoch_; }

 private:
  FunctionInstance() = default;

  std::uint64_t id_ = 0;
  InstanceState state_ = InstanceState::Terminated;
  double creation_time_ = 0.0;
  double busy_until_ = 0.0;
  double idle_since_ = 0.0;
  double expiration_threshold_ = 0.0;
  std::uint64_t served_count_ = 0;
  bool is_cold_serving_ = false;
  std::uint64_t idle_epoch_ = 0;
};

}  // namespace slsim
