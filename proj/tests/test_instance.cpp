#include "doctest.h"
#include "slsim/instance.hpp"

using namespace slsim;

TEST_SUITE_BEGIN("instance");

TEST_CASE("cold creation starts one busy interval") {
  const auto inst = FunctionInstance::create_cold(0, 10.0, 2.2, 600.0);
  CHECK(inst.state() == InstanceState::Initializing);
  CHECK(inst.busy_until() == doctest::Approx(12.2));
  CHECK(inst.is_cold_serving());
  CHECK(inst.served_count() == 1);
  CHECK(inst.creation_time() == 10.0);
}

TEST_CASE("lifecycle of an instance that never sees a second request") {
  auto inst = FunctionInstance::create_cold(0, 0.0, 2.244, 600.0);
  inst.complete(2.244);
  CHECK(inst.state() == InstanceState::Idle);
  CHECK_FALSE(inst.is_cold_serving());
  CHECK(inst.expiration_time() == doctest::Approx(602.244));
  inst.terminate(inst.expiration_time());
  CHECK(inst.state() == InstanceState::Terminated);
  // Creation-to-termination span: first service plus the idle threshold.
  CHECK(inst.expiration_time() - inst.creation_time() ==
        doctest::Approx(602.244));
  CHECK(inst.served_count() == 1);
}

TEST_CASE("warm assignment reschedules the expiration candidate") {
  auto inst = FunctionInstance::create_cold(4, 10.0, 2.2, 600.0);
  inst.complete(12.2);
  inst.assign_warm(100.0, 1.99);
  CHECK(inst.state() == InstanceState::Running);
  CHECK(inst.busy_until() == doctest::Approx(101.99));
  CHECK_FALSE(inst.is_cold_serving());
  inst.complete(101.99);
  CHECK(inst.expiration_time() == doctest::Approx(701.99));
}

TEST_CASE("expiration wins a tie at the idle boundary") {
  auto inst = FunctionInstance::create_cold(0, 10.0, 2.2, 600.0);
  inst.complete(12.2);
  CHECK_THROWS_AS(inst.assign_warm(inst.expiration_time(), 1.0),
                  InternalError);
  // Just inside the window is still fine.
  inst.assign_warm(612.0, 1.0);
  CHECK(inst.state() == InstanceState::Running);
}

TEST_CASE("two consecutive warm assignments bump served_count by two") {
  auto inst = FunctionInstance::create_cold(0, 0.0, 1.0, 600.0);
  inst.complete(1.0);
  const auto base = inst.served_count();
  inst.assign_warm(5.0, 1.0);
  inst.complete(6.0);
  inst.assign_warm(7.0, 1.0);
  inst.complete(8.0);
  CHECK(inst.served_count() == base + 2);
}

TEST_CASE("illegal transitions raise internal errors") {
  auto inst = FunctionInstance::create_cold(0, 0.0, 1.0, 600.0);
  CHECK_THROWS_AS(inst.assign_warm(0.5, 1.0), InternalError);  // still busy
  CHECK_THROWS_AS(inst.complete(0.7), InternalError);  // wrong completion time
  inst.complete(1.0);
  CHECK_THROWS_AS(inst.complete(1.0), InternalError);  // already idle
  CHECK_THROWS_AS(inst.terminate(2.0), InternalError);  // not due yet
  inst.terminate(601.0);
  // Terminated is absorbing.
  CHECK_THROWS_AS(inst.assign_warm(700.0, 1.0), InternalError);
  CHECK_THROWS_AS(inst.complete(700.0), InternalError);
  CHECK_THROWS_AS(inst.terminate(700.0), InternalError);
}

TEST_CASE("idle epoch distinguishes idle periods") {
  auto inst = FunctionInstance::create_cold(0, 0.0, 1.0, 600.0);
  const auto before = inst.idle_epoch();
  inst.complete(1.0);
  CHECK(inst.idle_epoch() == before + 1);
  inst.assign_warm(2.0, 1.0);
  CHECK(inst.idle_epoch() == before + 1);
  inst.complete(3.0);
  CHECK(inst.idle_epoch() == before + 2);
}

TEST_SUITE_END();
