#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vgw/dataplane/pipeline.hpp"
#include "vgw/nfvi/nfvi.hpp"

namespace vgw::autoscaler {

struct ScalingPolicy {
  SimDuration period = from_ms(10000);  // monitoring unit T
  double cpu_threshold = 0.70;
  int cooldown_periods = 1;

  void validate() const {
    if (period <= SimDuration::zero()) fail(ErrorCode::MalformedRequest, "periodTMs must be positive");
    if (!(cpu_threshold > 0 && cpu_threshold < 1)) {
      fail(ErrorCode::MalformedRequest, "cpuThreshold must lie strictly between 0 and 1");
    }
    if (cooldown_periods < 0) fail(ErrorCode::MalformedRequest, "cooldownPeriods must be non-negative");
  }
};

struct UtilizationSample {
  nfvi::InstanceId instance_id;
  std::uint64_t period_index = 0;
  std::uint64_t dispatched = 0;
  double utilization = 0;  // in [0, 1]
};

enum class ScalingAction : std::uint8_t { None, ScaleOut };

/// Replicas serving one chain position. Every instance runs the same image.
struct ReplicaGroup {
  nfvi::ChainId chain_id;
  std::size_t position = 0;
  std::string image_id;
  SimDuration cost{};
  std::vector<nfvi::InstanceId> instances;
  std::size_t cursor = 0;
  std::map<nfvi::InstanceId, std::uint64_t> dispatched;  // this period
  std::uint64_t all_down = 0;
  std::optional<std::uint64_t> last_join_period;
  int pending = 0;  // replicas booting
};

/// Utilization of each replica over one period: dispatched x cost / T.
inline std::vector<UtilizationSample> sample_utilization(const ReplicaGroup& g, std::uint64_t period_index,
                                                         SimDuration period) {
  std::vector<UtilizationSample> out;
  for (const auto& id : g.instances) {
    auto it = g.dispatched.find(id);
    const std::uint64_t n = it == g.dispatched.end() ? 0 : it->second;
    const double busy = static_cast<double>(n) * static_cast<double>(g.cost.count());
    out.push_back({id, period_index, n, std::clamp(busy / static_cast<double>(period.count()), 0.0, 1.0)});
  }
  return out;
}

/// SCALE_OUT iff some replica is strictly above the threshold and no replica
/// joined during the last `cooldown_periods` periods up to and including
/// `period_index`.
inline ScalingAction decide(const std::vector<UtilizationSample>& samples, const ScalingPolicy& policy,
                            std::optional<std::uint64_t> last_join_period, std::uint64_t period_index) {
  double peak = 0;
  for (const auto& s : samples) peak = std::max(peak, s.utilization);
  if (!(peak > policy.cpu_threshold)) return ScalingAction::None;
  if (last_join_period && period_index - *last_join_period < static_cast<std::uint64_t>(policy.cooldown_periods)) {
    return ScalingAction::None;
  }
  return ScalingAction::ScaleOut;
}

struct ReplicaCount {
  SimTime at{};
  nfvi::ChainId chain_id;
  std::size_t position = 0;
  std::size_t replicas = 0;
};

/// Element manager plus horizontal scaler for managed chains. Samples every
/// replica once per period, adds one replica per position whose decision
/// fires, and round-robins traffic over the serving replicas.
class Autoscaler {
 public:
  Autoscaler(sim::EventLoop& loop, sim::EventLog& log, nfvi::Nfvi& nfvi, ScalingPolicy policy = {},
             bool enabled = true)
      : loop_(loop), log_(log), nfvi_(nfvi), policy_(policy), enabled_(enabled) {
    policy_.validate();
  }

  const ScalingPolicy& policy() const { return policy_; }
  bool enabled() const { return enabled_; }

  /// One group per chain position, seeded with the chain's own instances.
  void manage(const nfvi::ChainId& chain_id) {
    const auto& ch = nfvi_.chain_info(chain_id);
    auto& groups = groups_[chain_id];
    groups.clear();
    for (std::size_t i = 0; i < ch.instances.size(); ++i) {
      const auto& inst = nfvi_.instance(ch.instances[i]);
      ReplicaGroup g;
      g.chain_id = chain_id;
      g.position = i;
      g.image_id = inst.image_id;
      g.cost = nfvi_.store().find(inst.image_id)->cost();
      g.instances.push_back(ch.instances[i]);
      groups.push_back(std::move(g));
      trace_.push_back({loop_.now(), chain_id, i, 1});
    }
  }

  /// Selector for Pipeline::process over a managed chain.
  dataplane::ReplicaSelector selector(const nfvi::ChainId& chain_id) {
    return [this, chain_id](std::size_t position, const nfvi::InstanceId&) {
      return dispatch(group(chain_id, position));
    };
  }

  /// Strict round-robin over serving replicas. Throws ALL_DOWN, counting the
  /// drop, when none can serve.
  nfvi::InstanceId dispatch(ReplicaGroup& g) {
    const std::size_t n = g.instances.size();
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t idx = (g.cursor + k) % n;
      const auto& id = g.instances[idx];
      if (!nfvi_.instance(id).serving()) continue;
      g.cursor = (idx + 1) % n;
      ++g.dispatched[id];
      return id;
    }
    ++g.all_down;
    fail(ErrorCode::AllDown, g.chain_id + " position " + std::to_string(g.position) + " has no serving replica");
  }

  /// Samples at start + T, start + 2T, ... while the sample time is <= until.
  void start(SimTime until) {
    until_ = until;
    next_period_ = 0;
    schedule(loop_.now() + policy_.period);
  }

  ReplicaGroup& group(const nfvi::ChainId& chain_id, std::size_t position) {
    return groups_.at(chain_id).at(position);
  }
  const std::vector<ReplicaGroup>& groups(const nfvi::ChainId& chain_id) const { return groups_.at(chain_id); }
  const std::vector<ReplicaCount>& replica_trace() const { return trace_; }
  const std::vector<UtilizationSample>& samples() const { return samples_; }

 private:
  void schedule(SimTime at) {
    if (at > until_) return;
    loop_.post_at(at, [this, at] {
      tick(next_period_++);
      schedule(at + policy_.period);
    });
  }

  void tick(std::uint64_t p) {
    for (auto& [chain_id, groups] : groups_) {
      for (auto& g : groups) {
        const auto samples = sample_utilization(g, p, policy_.period);
        for (const auto& s : samples) {
          nfvi_.instance_at(s.instance_id).utilization = s.utilization;
          samples_.push_back(s);
          log_.record(loop_.now(), "Autoscaler", "UTILIZATION_SAMPLED", chain_id, sim::Phase::None,
                      {{"chain", chain_id},
                       {"position", g.position},
                       {"instance", s.instance_id},
                       {"period", p},
                       {"dispatched", s.dispatched},
                       {"utilization", s.utilization}});
        }
        g.dispatched.clear();
        if (enabled_ && decide(samples, policy_, g.last_join_period, p) == ScalingAction::ScaleOut) {
          scale_out(g, p);
        }
      }
    }
  }

  void scale_out(ReplicaGroup& g, std::uint64_t p) {
    const auto domain = nfvi_.chain_info(g.chain_id).domain;
    log_.record(loop_.now(), "Autoscaler", "SCALE_OUT", g.chain_id, sim::Phase::None,
                {{"chain", g.chain_id}, {"position", g.position}, {"period", p}, {"replicas", g.instances.size()}});
    try {
      ++g.pending;
      const auto chain_id = g.chain_id;
      const auto position = g.position;
      nfvi_.instantiate(g.image_id, domain, g.chain_id, [this, chain_id, position](const nfvi::InstanceId& id) {
        auto& grp = group(chain_id, position);
        --grp.pending;
        grp.instances.push_back(id);
        // The period in progress is the one after the last completed sample.
        grp.last_join_period = next_period_;
        trace_.push_back({loop_.now(), chain_id, position, grp.instances.size()});
        log_.record(loop_.now(), "Autoscaler", "REPLICA_JOINED", chain_id, sim::Phase::None,
                    {{"chain", chain_id},
                     {"position", position},
                     {"instance", id},
                     {"period", next_period_},
                     {"replicas", grp.instances.size()}});
      });
    } catch (const Error& e) {
      --g.pending;
      log_.record(loop_.now(), "Autoscaler", "SCALE_OUT_REJECTED", g.chain_id, sim::Phase::None,
                  {{"chain", g.chain_id}, {"position", g.position}, {"error", std::string(to_string(e.code()))}});
    }
  }

  sim::EventLoop& loop_;
  sim::EventLog& log_;
  nfvi::Nfvi& nfvi_;
  ScalingPolicy policy_;
  bool enabled_;
  std::map<nfvi::ChainId, std::vector<ReplicaGroup>> groups_;
  std::vector<ReplicaCount> trace_;
  std::vector<UtilizationSample> samples_;
  SimTime until_{};
  std::uint64_t next_period_ = 0;
};

}  // namespace vgw::autoscaler
