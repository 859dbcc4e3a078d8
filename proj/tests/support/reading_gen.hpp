#pragma once

#include <random>
#include <string>
#include <vector>

#include "vgw/dataplane/raw.hpp"

namespace vgw::testing {

/// Random decimal text in JSON number grammar, optionally with exponent.
inline std::string random_decimal(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::string s;
  if (pick(0, 3) == 0) s += '-';
  const int int_digits = pick(1, 6);
  s += static_cast<char>(int_digits == 1 ? '0' + pick(0, 9) : '1' + pick(0, 8));
  for (int i = 1; i < int_digits; ++i) s += static_cast<char>('0' + pick(0, 9));
  if (pick(0, 1)) {
    s += '.';
    const int frac = pick(1, 17);
    for (int i = 0; i < frac; ++i) s += static_cast<char>('0' + pick(0, 9));
  }
  if (pick(0, 9) == 0) s += "e" + std::to_string(pick(-5, 5));
  return s == "-0" ? "0" : s;
}

/// One payload's worth of readings from a single sensor.
inline std::vector<dataplane::RawMeasurement> random_readings(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const std::string id = "s" + std::to_string(pick(0, 999)) + (pick(0, 1) ? "-node" : "");
  const auto base = static_cast<std::uint32_t>(pick(0, 2'000'000'000));
  std::vector<dataplane::RawMeasurement> out(static_cast<std::size_t>(pick(1, 5)));
  for (auto& m : out) {
    m.sensor_id = id;
    m.quantity = static_cast<Quantity>(pick(0, 4));
    m.value = dataplane::Decimal::of(random_decimal(rng));
    m.unit = std::string(unit_for(m.quantity));
    m.timestamp_s = base + static_cast<std::uint32_t>(pick(0, 30));
  }
  return out;
}

}  // namespace vgw::testing
