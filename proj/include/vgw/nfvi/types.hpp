#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vgw/core/json.hpp"
#include "vgw/core/time.hpp"
#include "vgw/core/types.hpp"

namespace vgw::nfvi {

using InstanceId = std::string;
using VmId = std::string;
using ChainId = std::string;
using MigrationId = std::string;

enum class VmState : std::uint8_t { Booting, Up, Migrating, Down };

enum class InstanceState : std::uint8_t { Instantiating, Running, Migrating, Terminated };

enum class MigrationApproach : std::uint8_t { LiveAfterChain, ImageThenInstantiate };

inline constexpr EnumNames<VmState, 4> kVmStateNames{{{
    {VmState::Booting, "BOOTING"},
    {VmState::Up, "UP"},
    {VmState::Migrating, "MIGRATING"},
    {VmState::Down, "DOWN"},
}}};

inline constexpr EnumNames<InstanceState, 4> kInstanceStateNames{{{
    {InstanceState::Instantiating, "INSTANTIATING"},
    {InstanceState::Running, "RUNNING"},
    {InstanceState::Migrating, "MIGRATING"},
    {InstanceState::Terminated, "TERMINATED"},
}}};

inline constexpr EnumNames<MigrationApproach, 2> kApproachNames{{{
    {MigrationApproach::LiveAfterChain, "LIVE_AFTER_CHAIN"},
    {MigrationApproach::ImageThenInstantiate, "IMAGE_THEN_INSTANTIATE"},
}}};

constexpr std::string_view to_string(VmState s) { return kVmStateNames.name(s); }
constexpr std::string_view to_string(InstanceState s) { return kInstanceStateNames.name(s); }
constexpr std::string_view to_string(MigrationApproach a) { return kApproachNames.name(a); }

struct VmTransition {
  SimTime at{};
  VmState state = VmState::Booting;
};

struct SimVm {
  VmId vm_id;
  int vcpu = 1;
  int ram_mb = 2048;
  SimDuration boot_delay{};
  VmState state = VmState::Booting;
  std::vector<VmTransition> history;

  bool reachable() const { return state == VmState::Up || state == VmState::Migrating; }

  /// Total time spent DOWN within [from, until).
  SimDuration time_down(SimTime from, SimTime until) const {
    SimDuration total{};
    for (std::size_t i = 0; i < history.size(); ++i) {
      if (history[i].state != VmState::Down) continue;
      SimTime start = std::max(history[i].at, from);
      SimTime end = i + 1 < history.size() ? history[i + 1].at : until;
      end = std::min(end, until);
      if (end > start) total += end - start;
    }
    return total;
  }
};

struct VnfInstance {
  InstanceId instance_id;
  std::string image_id;
  SimVm vm;
  Domain domain = Domain::GatewayProvider;
  InstanceState state = InstanceState::Instantiating;
  std::string ref;  // owning service request, if any
  SimTime busy_until{};
  SimTime running_since{};
  std::optional<double> utilization;  // set by the element manager, RUNNING only
  std::uint64_t served = 0;

  /// Able to process traffic: the instance is live and its VM answers.
  bool serving() const {
    return (state == InstanceState::Running || state == InstanceState::Migrating) && vm.reachable();
  }
};

struct ForwardingChain {
  ChainId chain_id;
  Direction direction = Direction::Uplink;
  std::vector<InstanceId> instances;
  std::vector<std::string> image_ids;
  std::string service_request_id;
  Domain domain = Domain::GatewayProvider;
  SimTime ready_at{};
  bool dissolved = false;
};

struct MigrationPlan {
  MigrationApproach approach = MigrationApproach::LiveAfterChain;
  Domain source = Domain::GatewayProvider;
  Domain target = Domain::VwsanProvider;
  std::vector<SimDuration> per_instance_downtime;
  SimDuration transfer_delay{};
};

struct DowntimeWindow {
  InstanceId instance_id;
  SimDuration downtime{};
  SimTime start{};
  SimTime end{};
};

struct MigrationRecord {
  MigrationId migration_id;
  ChainId chain_id;
  MigrationApproach approach = MigrationApproach::LiveAfterChain;
  Domain source = Domain::GatewayProvider;
  Domain target = Domain::VwsanProvider;
  SimTime start{};
  std::optional<SimTime> end;
  bool aborted = false;
  std::vector<DowntimeWindow> windows;
};

struct ProbeSample {
  SimTime at{};
  bool reachable = false;
};

/// Span from the first failed sample to the next successful one, per outage.
inline std::vector<SimDuration> measured_outages(const std::vector<ProbeSample>& samples) {
  std::vector<SimDuration> out;
  std::optional<SimTime> fail_start;
  for (const auto& s : samples) {
    if (!s.reachable && !fail_start) fail_start = s.at;
    if (s.reachable && fail_start) {
      out.push_back(s.at - *fail_start);
      fail_start.reset();
    }
  }
  return out;
}

}  // namespace vgw::nfvi
