#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vgw/sim/event_log.hpp"

namespace vgw::harness {

// Every reducer reads the event log only.

struct ChainProvisioning {
  std::string chain_id;
  std::string ref;
  SimTime first_instantiating{};
  SimTime last_running_at_target{};

  SimDuration duration() const { return last_running_at_target - first_instantiating; }
};

/// Per chain that reached the VWSAN provider domain: first INSTANTIATING of
/// any of its instances to the last RUNNING there.
inline std::vector<ChainProvisioning> provisioning_times(const std::vector<sim::Event>& events,
                                                         const std::string& target = "VWSAN_PROVIDER") {
  std::map<std::string, std::set<std::string>> members;
  std::map<std::string, std::string> refs;
  std::vector<std::string> order;
  for (const auto& e : events) {
    if (e.transition != "CHAINING") continue;
    if (!members.contains(e.entity)) order.push_back(e.entity);
    for (const auto& id : e.detail.at("instances")) members[e.entity].insert(id.get<std::string>());
    refs[e.entity] = e.ref;
  }
  std::map<std::string, SimTime> started;
  std::map<std::string, SimTime> landed;
  for (const auto& e : events) {
    if (e.transition == "INSTANTIATING" && !started.contains(e.entity)) started[e.entity] = e.time;
    if (e.transition == "RUNNING" && e.detail.value("domain", std::string()) == target) landed[e.entity] = e.time;
  }
  std::vector<ChainProvisioning> out;
  for (const auto& cid : order) {
    std::optional<SimTime> first;
    std::optional<SimTime> last;
    bool complete = true;
    for (const auto& id : members[cid]) {
      if (started.contains(id) && (!first || started[id] < *first)) first = started[id];
    }
    // Only the instances of the chain's final membership must have landed.
    std::set<std::string> final_members;
    for (const auto& e : events) {
      if (e.transition == "CHAINING" && e.entity == cid) {
        final_members.clear();
        for (const auto& id : e.detail.at("instances")) final_members.insert(id.get<std::string>());
      }
    }
    for (const auto& id : final_members) {
      if (!landed.contains(id)) {
        complete = false;
        break;
      }
      if (!last || landed[id] > *last) last = landed[id];
    }
    if (complete && first && last) out.push_back({cid, refs[cid], *first, *last});
  }
  return out;
}

/// Every DOWN span of every instance's VM that ended with the VM UP again.
inline std::map<std::string, std::vector<SimDuration>> vm_downtimes(const std::vector<sim::Event>& events) {
  std::map<std::string, std::vector<SimDuration>> out;
  std::map<std::string, SimTime> down_since;
  for (const auto& e : events) {
    if (!e.entity.starts_with("vm-")) continue;
    const auto id = e.detail.value("instanceId", std::string());
    if (e.transition == "DOWN") {
      down_since.try_emplace(id, e.time);
    } else if (e.transition == "UP") {
      auto it = down_since.find(id);
      if (it != down_since.end()) {
        out[id].push_back(e.time - it->second);
        down_since.erase(it);
      }
    }
  }
  return out;
}

struct E2eEpisode {
  int episode = 0;
  std::string sensor;
  SimTime emitted{};
  SimTime detected{};
  SimTime deployed{};

  SimDuration delay() const { return deployed - emitted; }
};

/// Pairs each FIRE_DETECTED of `app` with the next DEPLOYED of `robot`.
/// Detections the robot never answered are left out.
inline std::vector<E2eEpisode> e2e_episodes(const std::vector<sim::Event>& events, const std::string& app,
                                            const std::string& robot) {
  std::vector<E2eEpisode> out;
  std::optional<E2eEpisode> open;
  for (const auto& e : events) {
    if (e.entity == app && e.transition == "FIRE_DETECTED") {
      open = E2eEpisode{e.detail.at("episode").get<int>(), e.detail.at("sensor").get<std::string>(),
                        kEpoch + SimDuration(e.detail.at("emittedUs").get<std::int64_t>()), e.time, {}};
    } else if (open && e.entity == robot && e.transition == "DEPLOYED") {
      open->deployed = e.time;
      out.push_back(*open);
      open.reset();
    }
  }
  return out;
}

/// The service request id an application's request was assigned.
inline std::optional<std::string> service_request_of(const std::vector<sim::Event>& events, const std::string& app) {
  for (const auto& e : events) {
    if (e.transition == "PENDING" && e.detail.is_object() && e.detail.value("applicationId", std::string()) == app) {
      return e.ref;
    }
  }
  return std::nullopt;
}

}  // namespace vgw::harness
