#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace locsim {

/// splitmix64 finalizer; used to spread seeds and derive substreams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Deterministic random stream. Wraps the (fully specified) mt19937_64
/// engine and hand-rolled transforms so that a given seed yields the same
/// values on every platform and thread count.
///
/// Substreams for parallel blocks are derived with `derive(salt)`, which
/// depends only on the root seed and the salt, never on draw order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), eng_(splitmix64(seed)) {}

  Rng derive(std::uint64_t salt) const {
    return Rng(splitmix64(splitmix64(seed_ ^ 0xa57c5d7b2fe1cc4full) + salt));
  }

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1); never returns an exact endpoint.
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exponential wait with the given rate (per ns). Strictly positive.
  /// A rate of zero means "never": returns +infinity.
  double exponential(double rate_per_ns) {
    if (rate_per_ns <= 0.0) return std::numeric_limits<double>::infinity();
    return -std::log(uniform_pos()) / rate_per_ns;
  }

  /// Standard normal via Box-Muller; the spare value is cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double a = 6.283185307179586476925286766559 * uniform();
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace locsim
