#include "gpcbo/rng.hpp"

#include <cmath>
#include <numbers>

namespace gpcbo {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

NormalStream NormalStream::keyed(std::uint64_t seed, std::uint64_t purpose,
                                 std::uint64_t iteration, std::uint64_t agent) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ (purpose + 0x9e3779b97f4a7c15ull));
  h = mix64(h ^ iteration);
  h = mix64(h ^ agent);
  return NormalStream(h);
}

double NormalStream::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // 53-bit uniforms; u1 in (0,1] so the log is finite.
  const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(t);
  has_cached_ = true;
  return r * std::cos(t);
}

Eigen::VectorXd NormalStream::vector(Eigen::Index n) {
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = next();
  return z;
}

}  // namespace gpcbo
