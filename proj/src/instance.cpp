#include "slsim/instance.hpp"

#include <string>

namespace slsim {

const char* to_string(InstanceState state) {
  switch (state) {
    case InstanceState::Initializing:
      return "initializing";
    case InstanceState::Running:
      return "running";
    case InstanceState::Idle:
      return "idle";
    case InstanceState::Terminated:
      return "terminated";
  }
  return "unknown";
}

FunctionInstance FunctionInstance::create_cold(std::uint64_t id, double now,
                                               double cold_duration,
                                               double threshold) {
  FunctionInstance inst;
  inst.id_ = id;
  inst.state_ = InstanceState::Initializing;
  inst.creation_time_ = now;
  inst.busy_until_ = now + cold_duration;
  inst.expiration_threshold_ = threshold;
  inst.served_count_ = 1;  // the triggering request
  inst.is_cold_serving_ = true;
  return inst;
}

FunctionInstance FunctionInstance::restore_idle(std::uint64_t id,
                                                double creation_time,
                                                double idle_since,
                                                double threshold) {
  FunctionInstance inst;
  inst.id_ = id;
  inst.state_ = InstanceState::Idle;
  inst.creation_time_ = creation_time;
  inst.idle_since_ = idle_since;
  inst.expiration_threshold_ = threshold;
  inst.served_count_ = 1;
  return inst;
}

FunctionInstance FunctionInstance::restore_busy(std::uint64_t id,
                                                double creation_time,
                                                double busy_until,
                                                double threshold) {
  FunctionInstance inst;
  inst.id_ = id;
  inst.state_ = InstanceState::Running;
  inst.creation_time_ = creation_time;
  inst.busy_until_ = busy_until;
  inst.expiration_threshold_ = threshold;
  inst.served_count_ = 1;
  return inst;
}

void FunctionInstance::assign_warm(double now, double warm_duration) {
  if (state_ != InstanceState::Idle) {
    throw InternalError("assign_warm on instance " + std::to_string(id_) +
                        " in state " + to_string(state_));
  }
  if (!(now >= idle_since_) || !(now < expiration_time())) {
    throw InternalError("assign_warm at t=" + std::to_string(now) +
                        " outside idle window of instance " +
                        std::to_string(id_));
  }
  state_ = InstanceState::Running;
  busy_until_ = now + warm_duration;
  is_cold_serving_ = false;
  ++served_count_;
}

void FunctionInstance::complete(double now) {
  if (!is_busy()) {
    throw InternalError("complete on instance " + std::to_string(id_) +
                        " in state " + to_string(state_));
  }
  if (now != busy_until_) {
    throw InternalError("complete at t=" + std::to_string(now) +
                        " but instance " + std::to_string(id_) +
                        " is busy until " + std::to_string(busy_until_));
  }
  state_ = InstanceState::Idle;
  idle_since_ = now;
  is_cold_serving_ = false;
  ++idle_epoch_;
}

void FunctionInstance::terminate(double now) {
  if (state_ != InstanceState::Idle) {
    throw InternalError("terminate on instance " + std::to_string(id_) +
                        " in state " + to_string(state_));
  }
  if (now != expiration_time()) {
    throw InternalError("terminate at t=" + std::to_string(now) +
                        " but instance " + std::to_string(id_) +
                        " expires at " + std::to_string(expiration_time()));
  }
  state_ = InstanceState::Terminated;
}

}  // namespace slsim
