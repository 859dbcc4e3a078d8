#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>

namespace vgw {

// Virtual time. All timestamps in the system are microseconds on this clock;
// nothing here ever reads the wall clock.
struct VirtualClock {
  using duration = std::chrono::microseconds;
  using rep = duration::rep;
  using period = duration::period;
  using time_point = std::chrono::time_point<VirtualClock, duration>;
  static constexpr bool is_steady = true;
};

using SimTime = VirtualClock::time_point;
using SimDuration = VirtualClock::duration;

constexpr SimTime kEpoch{};

constexpr SimDuration from_ms(std::int64_t ms) { return std::chrono::milliseconds(ms); }

constexpr SimDuration from_ms(int ms) { return std::chrono::milliseconds(ms); }

inline SimDuration from_ms(double ms) {
  return SimDuration(static_cast<std::int64_t>(std::llround(ms * 1000.0)));
}

constexpr SimTime at_ms(std::int64_t ms) { return kEpoch + from_ms(ms); }

constexpr double to_ms(SimDuration d) { return static_cast<double>(d.count()) / 1000.0; }

constexpr double to_ms(SimTime t) { return to_ms(t - kEpoch); }

constexpr std::int64_t to_us(SimTime t) { return (t - kEpoch).count(); }

}  // namespace vgw
