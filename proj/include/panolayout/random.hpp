#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "panolayout/common.hpp"

namespace panolayout {

// splitmix64 step; used for seed mixing and stream derivation.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random stream.  All draws go through explicit conversions
// (never std::uniform_*_distribution) so sequences are identical across
// standard library implementations.  Sub-streams are derived by hashing the
// parent seed with a path of integers, which keeps parallel work (per room,
// per epoch, per sample) independent of scheduling order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    gen_.seed(splitmix64_next(s));
    // Warm up so nearby seeds decorrelate quickly.
    for (int i = 0; i < 8; ++i) gen_();
  }

  // Derives an independent stream from a master seed and a path of indices.
  static Rng stream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = master;
    std::uint64_t mixed = splitmix64_next(s);
    for (std::uint64_t p : path) {
      s = mixed ^ (p + 0x632be59bd9b4e019ULL);
      mixed = splitmix64_next(s);
    }
    return Rng(mixed);
  }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    if (hi < lo) throw ValidationError("uniform_int: empty range");
    std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    return lo + static_cast<int>(gen_() % span);
  }

  // Standard normal via Box-Muller.  Always consumes two uniforms and never
  // caches the sine branch, so a draw's value depends only on the stream
  // position, not on the parity of earlier normal draws.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace panolayout
