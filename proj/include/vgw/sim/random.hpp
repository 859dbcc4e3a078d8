#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include "vgw/core/time.hpp"

namespace vgw::sim {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }

  double uniform_real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  std::uint64_t next() { return engine_(); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Uniform delay over [min, max], sampled at microsecond resolution.
struct UniformDelay {
  SimDuration min{};
  SimDuration max{};

  static UniformDelay fixed(SimDuration d) { return {d, d}; }
  static UniformDelay ms(double lo, double hi) { return {from_ms(lo), from_ms(hi)}; }

  bool valid() const { return min >= SimDuration::zero() && max >= min; }

  SimDuration sample(Rng& rng) const {
    if (!valid()) throw std::invalid_argument("invalid delay range");
    if (min == max) return min;
    return SimDuration(rng.uniform_int(min.count(), max.count()));
  }
};

}  // namespace vgw::sim
