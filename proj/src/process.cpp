#include "slsim/process.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace slsim {

ProcessSpec ProcessSpec::exponential(double rate) {
  if (!(rate > 0.0)) {
    throw ConfigError("exponential process requires rate > 0, got " +
                      std::to_string(rate));
  }
  return ProcessSpec(ExponentialProcess{rate});
}

ProcessSpec ProcessSpec::deterministic(double value) {
  if (!(value > 0.0)) {
    throw ConfigError("deterministic process requires value > 0, got " +
                      std::to_string(value));
  }
  return ProcessSpec(DeterministicProcess{value});
}

ProcessSpec ProcessSpec::gaussian(double mean, double std) {
  if (!(mean > 0.0)) {
    throw ConfigError("gaussian process requires mean > 0, got " +
                      std::to_string(mean));
  }
  if (!(std >= 0.0)) {
    throw ConfigError("gaussian process requires std >= 0, got " +
                      std::to_string(std));
  }
  return ProcessSpec(GaussianProcess{mean, std});
}

ProcessSpec ProcessSpec::empirical(std::vector<double> samples) {
  if (samples.empty()) {
    throw ConfigError("empirical process requires a non-empty sample list");
  }
  for (double s : samples) {
    if (!(s > 0.0)) {
      throw ConfigError("empirical process requires positive samples, got " +
                        std::to_string(s));
    }
  }
  return ProcessSpec(EmpiricalProcess{std::move(samples)});
}

std::string ProcessSpec::kind() const {
  struct Visitor {
    std::string operator()(const ExponentialProcess&) { return "exponential"; }
    std::string operator()(const DeterministicProcess&) {
      return "deterministic";
    }
    std::string operator()(const GaussianProcess&) { return "gaussian"; }
    std::string operator()(const EmpiricalProcess&) { return "empirical"; }
  };
  return std::visit(Visitor{}, dist_);
}

namespace {

double sample_gaussian(const GaussianProcess& p, RngStream& rng) {
  if (p.std == 0.0) {
    return p.mean;
  }
  // Box-Muller, second variate discarded: keeps the stream state equal
  // to the underlying generator state. Resample until positive; since
  // mean > 0, acceptance probability exceeds 1/2.
  for (;;) {
    const double u1 = rng.uniform01();
    const double u2 = rng.uniform01();
    const double z =
        std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    const double x = p.mean + p.std * z;
    if (x > 0.0) {
      return x;
    }
  }
}

}  // namespace

double sample(const ProcessSpec& spec, RngStream& rng) {
  struct Visitor {
    RngStream& rng;
    double operator()(const ExponentialProcess& p) {
      return -std::log(rng.uniform01()) / p.rate;
    }
    double operator()(const DeterministicProcess& p) { return p.value; }
    double operator()(const GaussianProcess& p) {
      return sample_gaussian(p, rng);
    }
    double operator()(const EmpiricalProcess& p) {
      return p.samples[rng.uniform_index(p.samples.size())];
    }
  };
  return std::visit(Visitor{rng}, spec.dist_);
}

ProcessMean mean_info(const ProcessSpec& spec) {
  if (const auto* e = spec.as_exponential()) {
    return {1.0 / e->rate, false};
  }
  if (const auto* d = spec.as_deterministic()) {
    return {d->value, false};
  }
  if (const auto* g = spec.as_gaussian()) {
    return {g->mean, g->std / g->mean > 0.25};
  }
  const auto* emp = spec.as_empirical();
  const double sum =
      std::accumulate(emp->samples.begin(), emp->samples.end(), 0.0);
  return {sum / static_cast<double>(emp->samples.size()), false};
}

}  // namespace slsim
