#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "slsim/parsim.hpp"

using namespace slsim;

namespace {

ParConfig par_config(SimConfig base, std::uint64_t concurrency) {
  return ParConfig{std::move(base), concurrency};
}

// In-flight per instance can be reconstructed from the trace alone.
void check_in_flight_cap(const EventTrace& trace, std::uint64_t capacity) {
  std::map<std::int64_t, std::uint64_t> in_flight;
  for (const EventRecord& rec : trace.records) {
    switch (rec.kind) {
      case EventKind::ArrivalCold:
      case EventKind::ArrivalWarm:
        ++in_flight[rec.instance_id];
        REQUIRE(in_flight[rec.instance_id] <= capacity);
        break;
      case EventKind::Departure:
        REQUIRE(in_flight[rec.instance_id] >= 1);
        --in_flight[rec.instance_id];
        break;
      default:
        break;
    }
  }
}

}  // namespace

TEST_SUITE_BEGIN("parsim");

TEST_CASE("concurrency value one is bit-identical to the engine") {
  for (const std::uint64_t seed : {3u, 19u, 4040u}) {
    SimConfig cfg{
        ProcessSpec::exponential(1.2),
        ProcessSpec::exponential(0.6),
        ProcessSpec::exponential(0.5),
    };
    cfg.expiration_threshold = 20.0;
    cfg.max_concurrency = 4;
    cfg.horizon = 5000.0;
    cfg.skip_initial = 50.0;
    cfg.seed = seed;

    RunOptions options;
    options.collect_trace = true;
    const RunResult engine_result = run(cfg, options);
    const RunResult par_result = run_par(par_config(cfg, 1), options);

    REQUIRE(engine_result.trace.records.size() ==
            par_result.trace.records.size());
    for (std::size_t i = 0; i < engine_result.trace.records.size(); ++i) {
      REQUIRE(engine_result.trace.records[i].time ==
              par_result.trace.records[i].time);
      REQUIRE(engine_result.trace.records[i].kind ==
              par_result.trace.records[i].kind);
      REQUIRE(engine_result.trace.records[i].instance_id ==
              par_result.trace.records[i].instance_id);
    }
    CHECK(engine_result.report.avg_server_count ==
          par_result.report.avg_server_count);
    CHECK(engine_result.report.avg_running_count ==
          par_result.report.avg_running_count);
    CHECK(engine_result.report.avg_idle_count ==
          par_result.report.avg_idle_count);
    CHECK(engine_result.report.avg_lifespan == par_result.report.avg_lifespan);
    CHECK(engine_result.report.cold_start_probability ==
          par_result.report.cold_start_probability);
    CHECK(engine_result.report.instance_count_histogram ==
          par_result.report.instance_count_histogram);
  }
}

TEST_CASE("one shared instance replaces three dedicated ones") {
  // Arrivals every 1 s, service 2.5 s: C = 3 packs the load onto a
  // single instance while C = 1 needs a steady three.
  SimConfig cfg{
      ProcessSpec::deterministic(1.0),
      ProcessSpec::deterministic(2.5),
      ProcessSpec::deterministic(2.5),
  };
  cfg.expiration_threshold = 600.0;
  cfg.horizon = 2000.0;

  const SimReport with_sharing = run_par(par_config(cfg, 3)).report;
  const SimReport without = run_par(par_config(cfg, 1)).report;

  CHECK(with_sharing.requests_cold == 1);
  CHECK(with_sharing.avg_server_count == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(without.requests_cold == 3);
  CHECK(without.avg_server_count == doctest::Approx(3.0).epsilon(1e-2));
}

TEST_CASE("unbounded sharing gives exactly one cold start") {
  SimConfig cfg{
      ProcessSpec::exponential(5.0),
      ProcessSpec::exponential(0.5),
      ProcessSpec::exponential(0.4),
  };
  cfg.expiration_threshold = 600.0;
  cfg.horizon = 1e5;
  cfg.seed = 17;
  const SimReport report = run_par(par_config(cfg, 1'000'000'000)).report;
  CHECK(report.requests_cold == 1);
  CHECK(report.avg_server_count == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("higher concurrency never needs more instances (coupled runs)") {
  // Deterministic processes make the draws identical across runs, so the
  // instantaneous instance counts are directly comparable.
  SimConfig cfg{
      ProcessSpec::deterministic(0.8),
      ProcessSpec::deterministic(3.1),
      ProcessSpec::deterministic(3.1),
  };
  cfg.expiration_threshold = 40.0;
  cfg.horizon = 500.0;

  RunOptions options;
  options.grid_step = 1.0;
  const RunResult base = run_par(par_config(cfg, 1), options);
  for (const std::uint64_t c : {2u, 3u, 8u}) {
    const RunResult shared = run_par(par_config(cfg, c), options);
    REQUIRE(shared.series.points.size() == base.series.points.size());
    for (std::size_t p = 0; p < base.series.points.size(); ++p) {
      CHECK(shared.series.points[p].instance_count <=
            base.series.points[p].instance_count);
    }
  }
}

TEST_CASE("in-flight per instance never exceeds the concurrency value") {
  for (const std::uint64_t c : {1u, 2u, 5u}) {
    SimConfig cfg{
        ProcessSpec::exponential(4.0),
        ProcessSpec::exponential(0.9),
        ProcessSpec::exponential(0.8),
    };
    cfg.expiration_threshold = 10.0;
    cfg.horizon = 2000.0;
    cfg.seed = 100 + c;
    RunOptions options;
    options.collect_trace = true;
    const RunResult result = run_par(par_config(cfg, c), options);
    REQUIRE(result.trace.records.size() > 100);
    check_in_flight_cap(result.trace, c);
  }
}

TEST_CASE("requests are rejected only when every instance is saturated") {
  SimConfig cfg{
      ProcessSpec::deterministic(1.0),
      ProcessSpec::deterministic(10.0),
      ProcessSpec::deterministic(10.0),
  };
  cfg.expiration_threshold = 600.0;
  cfg.max_concurrency = 1;
  cfg.horizon = 1e4;
  const SimReport report = run_par(par_config(cfg, 2)).report;
  // One instance, two slots: two accepted then eight rejected per cycle.
  CHECK(std::abs(report.rejection_probability - 0.8) < 0.01);
  CHECK(report.requests_cold == 1);
}

TEST_CASE("invalid concurrency value is rejected") {
  SimConfig cfg{
      ProcessSpec::exponential(1.0),
      ProcessSpec::exponential(1.0),
      ProcessSpec::exponential(1.0),
  };
  cfg.expiration_threshold = 10.0;
  cfg.horizon = 10.0;
  CHECK_THROWS_AS(run_par(par_config(cfg, 0)), ConfigError);
}

TEST_SUITE_END();
