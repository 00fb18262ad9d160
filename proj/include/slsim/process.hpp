#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "slsim/errors.hpp"

namespace slsim {

/// Seeded random stream. Same seed gives the same sample sequence,
/// bit for bit, run after run. Single owner: move-only.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  RngStream(const RngStream&) = delete;
  RngStream& operator=(const RngStream&) = delete;
  RngStream(RngStream&&) = default;
  RngStream& operator=(RngStream&&) = default;

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on the open interval (0, 1); excludes both endpoints so
  /// log() transforms stay finite and samples stay strictly positive.
  double uniform01() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform index in [0, n). Multiply-shift, no rejection loop.
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

struct ExponentialProcess {
  double rate;  // 1/seconds
};

struct DeterministicProcess {
  double value;  // seconds
};

struct GaussianProcess {
  double mean;  // seconds
  double std;   // seconds
};

struct EmpiricalProcess {
  std::vector<double> samples;  // seconds, all > 0
};

/// A distribution of positive durations (inter-arrival or service time).
/// Immutable once built; factories validate, so an existing spec is
/// always well-formed. Gaussian draws are resampled until positive;
/// empirical draws bootstrap uniformly from the given samples.
class ProcessSpec {
 public:
  static ProcessSpec exponential(double rate);
  static ProcessSpec deterministic(double value);
  static ProcessSpec gaussian(double mean, double std);
  static ProcessSpec empirical(std::vector<double> samples);

  const ExponentialProcess* as_exponential() const {
    return std::get_if<ExponentialProcess>(&dist_);
  }
  const DeterministicProcess* as_deterministic() const {
    return std::get_if<DeterministicProcess>(&dist_);
  }
  const GaussianProcess* as_gaussian() const {
    return std::get_if<GaussianProcess>(&dist_);
  }
  const EmpiricalProcess* as_empirical() const {
    return std::get_if<EmpiricalProcess>(&dist_);
  }

  std::string kind() const;

  friend double sample(const ProcessSpec& spec, RngStream& rng);

 private:
  template <typename T>
  explicit ProcessSpec(T dist) : dist_(std::move(dist)) {}

  std::variant<ExponentialProcess, DeterministicProcess, GaussianProcess,
               EmpiricalProcess>
      dist_;
};

/// Draw one duration; always strictly positive.
double sample(const ProcessSpec& spec, RngStream& rng);

struct ProcessMean {
  double value = 0.0;
  /// Gaussian means are reported untruncated; the rejection sampler
  /// shifts the realized mean upward. Set when std/mean > 0.25.
  bool truncation_caveat = false;
};

ProcessMean mean_info(const ProcessSpec& spec);

inline double mean(const ProcessSpec& spec) { return mean_info(spec).value; }

}  // namespace slsim
