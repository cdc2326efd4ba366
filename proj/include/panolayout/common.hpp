#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace panolayout {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

// Wraps an angle in degrees into [0, 360).
inline double wrap_degrees(double a) {
  a = std::fmod(a, 360.0);
  if (a < 0.0) a += 360.0;
  // fmod of tiny negatives can round back up to 360 exactly.
  if (a >= 360.0) a = 0.0;
  return a;
}

// Minimal circular separation between two angles in degrees, in [0, 180].
inline double circular_diff_degrees(double a, double b) {
  double d = std::fabs(wrap_degrees(a) - wrap_degrees(b));
  return d > 180.0 ? 360.0 - d : d;
}

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent input data (bad scene, bad label image, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Bad or contradictory run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// File I/O and serialization failures.
class IoError : public Error {
 public:
  using Error::Error;
};

// Numerical/geometric failure of an estimation stage (degenerate layout,
// empty point cloud, unsolvable system, ...).
class EstimationError : public Error {
 public:
  using Error::Error;
};

// Runs fn(i) for i in [0, n) on up to `jobs` threads.  Callers must write
// results only by index so the output does not depend on scheduling.
inline void parallel_for(std::size_t n, int jobs,
                         const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> threads;
  int count = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  threads.reserve(count);
  for (int t = 0; t < count; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
}

}  // namespace panolayout
