#pragma once

// Log-only oracles for the autoscaler: which scale-outs must have fired, and
// which did.

#include <map>
#include <set>
#include <vector>

#include "vgw/autoscaler/autoscaler.hpp"

namespace vgw::testing {

/// Recomputes, from the event log alone, the (position, period) pairs in
/// which a scale-out must fire.
inline std::set<std::pair<std::uint64_t, std::uint64_t>> expected_scale_outs(const std::vector<sim::Event>& events,
                                                                      const autoscaler::ScalingPolicy& p) {
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> peak;
  std::map<std::uint64_t, std::vector<std::uint64_t>> joins;
  for (const auto& e : events) {
    if (e.transition == "UTILIZATION_SAMPLED") {
      auto& v = peak[{e.detail.at("position").get<std::uint64_t>(), e.detail.at("period").get<std::uint64_t>()}];
      v = std::max(v, e.detail.at("utilization").get<double>());
    } else if (e.transition == "REPLICA_JOINED") {
      joins[e.detail.at("position").get<std::uint64_t>()].push_back(e.detail.at("period").get<std::uint64_t>());
    }
  }
  std::set<std::pair<std::uint64_t, std::uint64_t>> out;
  for (const auto& [key, u] : peak) {
    const auto [pos, period] = key;
    bool cooling = false;
    for (auto q : joins[pos]) cooling |= q <= period && period < q + static_cast<std::uint64_t>(p.cooldown_periods);
    if (u > p.cpu_threshold && !cooling) out.insert(key);
  }
  return out;
}

inline std::set<std::pair<std::uint64_t, std::uint64_t>> logged_scale_outs(const std::vector<sim::Event>& events) {
  std::set<std::pair<std::uint64_t, std::uint64_t>> out;
  for (const auto& e : events) {
    if (e.transition == "SCALE_OUT") {
      out.insert({e.detail.at("position").get<std::uint64_t>(), e.detail.at("period").get<std::uint64_t>()});
    }
  }
  return out;
}

/// Per chain position, the replica count never shrinks.
inline bool replicas_non_decreasing(const std::vector<autoscaler::ReplicaCount>& trace) {
  std::map<std::size_t, std::size_t> last;
  for (const auto& t : trace) {
    if (t.replicas < last[t.position]) return false;
    last[t.position] = t.replicas;
  }
  return true;
}

}  // namespace vgw::testing
