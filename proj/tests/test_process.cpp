#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "slsim/process.hpp"

using namespace slsim;

TEST_SUITE_BEGIN("process");

TEST_CASE("deterministic yields its value on every draw") {
  const ProcessSpec spec = ProcessSpec::deterministic(2.5);
  RngStream rng(7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(sample(spec, rng) == 2.5);
  }
}

TEST_CASE("exponential sample mean matches 1/rate") {
  const ProcessSpec spec = ProcessSpec::exponential(0.9);
  RngStream rng(12345);
  const int n = 1'000'000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += sample(spec, rng);
  }
  const double expected = 1.0 / 0.9;
  CHECK(std::abs(sum / n - expected) / expected < 0.005);
}

TEST_CASE("exponential empirical CDF passes a KS check") {
  const double rate = 0.9;
  const ProcessSpec spec = ProcessSpec::exponential(rate);
  RngStream rng(99);
  const std::size_t n = 100'000;
  std::vector<double> xs(n);
  for (double& x : xs) {
    x = sample(spec, rng);
  }
  std::sort(xs.begin(), xs.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cdf = 1.0 - std::exp(-rate * xs[i]);
    const double hi = static_cast<double>(i + 1) / n - cdf;
    const double lo = cdf - static_cast<double>(i) / n;
    ks = std::max({ks, hi, lo});
  }
  CHECK(ks < 0.01);
}

TEST_CASE("gaussian draws are always positive") {
  const ProcessSpec spec = ProcessSpec::gaussian(1.0, 5.0);
  RngStream rng(3);
  for (int i = 0; i < 100'000; ++i) {
    CHECK(sample(spec, rng) > 0.0);
  }
}

TEST_CASE("gaussian with zero std acts deterministically") {
  const ProcessSpec spec = ProcessSpec::gaussian(3.25, 0.0);
  RngStream rng(3);
  CHECK(sample(spec, rng) == 3.25);
}

TEST_CASE("empirical draws come from the sample list") {
  const std::vector<double> samples = {0.5, 1.5, 9.0};
  const ProcessSpec spec = ProcessSpec::empirical(samples);
  RngStream rng(42);
  bool seen[3] = {false, false, false};
  for (int i = 0; i < 10'000; ++i) {
    const double x = sample(spec, rng);
    const auto it = std::find(samples.begin(), samples.end(), x);
    REQUIRE(it != samples.end());
    seen[it - samples.begin()] = true;
  }
  CHECK(seen[0]);
  CHECK(seen[1]);
  CHECK(seen[2]);
}

TEST_CASE("analytic means") {
  CHECK(mean(ProcessSpec::exponential(0.9)) == doctest::Approx(1.0 / 0.9));
  CHECK(mean(ProcessSpec::deterministic(1.991)) == 1.991);
  CHECK(mean(ProcessSpec::empirical({1.0, 2.0, 3.0})) == 2.0);
  CHECK(mean(ProcessSpec::gaussian(2.0, 0.1)) == 2.0);
}

TEST_CASE("gaussian mean carries a truncation caveat when std is large") {
  CHECK_FALSE(mean_info(ProcessSpec::gaussian(1.0, 0.2)).truncation_caveat);
  CHECK(mean_info(ProcessSpec::gaussian(1.0, 0.3)).truncation_caveat);
  CHECK(mean_info(ProcessSpec::gaussian(1.0, 5.0)).truncation_caveat);
}

TEST_CASE("equal seeds give bit-equal sequences") {
  const ProcessSpec specs[] = {
      ProcessSpec::exponential(0.37),
      ProcessSpec::gaussian(2.0, 1.0),
      ProcessSpec::empirical({0.25, 4.0, 7.5, 11.0}),
  };
  for (const ProcessSpec& spec : specs) {
    RngStream a(555);
    RngStream b(555);
    for (int i = 0; i < 20'000; ++i) {
      REQUIRE(sample(spec, a) == sample(spec, b));
    }
  }
}

TEST_CASE("positivity holds across all kinds") {
  const ProcessSpec specs[] = {
      ProcessSpec::exponential(50.0),
      ProcessSpec::deterministic(1e-9),
      ProcessSpec::gaussian(0.001, 0.5),
      ProcessSpec::empirical({1e-12, 2.0}),
  };
  RngStream rng(8);
  for (const ProcessSpec& spec : specs) {
    for (int i = 0; i < 50'000; ++i) {
      REQUIRE(sample(spec, rng) > 0.0);
    }
  }
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(ProcessSpec::exponential(0.0), ConfigError);
  CHECK_THROWS_AS(ProcessSpec::exponential(-1.0), ConfigError);
  CHECK_THROWS_AS(ProcessSpec::deterministic(0.0), ConfigError);
  CHECK_THROWS_AS(ProcessSpec::gaussian(0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(ProcessSpec::gaussian(1.0, -0.5), ConfigError);
  CHECK_THROWS_AS(ProcessSpec::empirical({}), ConfigError);
  CHECK_THROWS_AS(ProcessSpec::empirical({1.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(ProcessSpec::empirical({-2.0}), ConfigError);
}

TEST_SUITE_END();
