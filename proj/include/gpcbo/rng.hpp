#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace gpcbo {

/// Deterministic stream of standard normal deviates.
///
/// Wraps mt19937_64 with an explicit Box-Muller transform so that a given key
/// always yields the same sequence, independent of platform quirks in
/// std::normal_distribution and of which thread consumes the stream. Streams
/// keyed by (seed, purpose, iteration, agent) are what make parallel runs
/// reproducible at any thread count.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : gen_(seed) {}

  /// Stream for one (iteration, agent) slot of a run. `purpose` separates the
  /// initial draw, per-iteration noise and recovery resampling key spaces.
  static NormalStream keyed(std::uint64_t seed, std::uint64_t purpose,
                            std::uint64_t iteration, std::uint64_t agent);

  double next();

  Eigen::VectorXd vector(Eigen::Index n);

 private:
  std::mt19937_64 gen_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// splitmix64 finalizer; used to hash stream keys into seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace gpcbo
