#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vgw/core/error.hpp"
#include "vgw/nfvi/types.hpp"
#include "vgw/sim/event_log.hpp"
#include "vgw/sim/event_loop.hpp"
#include "vgw/sim/random.hpp"
#include "vgw/store/vnf_store.hpp"

namespace vgw::nfvi {

struct NfviConfig {
  sim::UniformDelay boot_delay = sim::UniformDelay::ms(12000, 18000);
  SimDuration chain_delay = from_ms(1000);
  bool parallel_instantiation = false;
  std::map<Domain, int> vm_quota{{Domain::GatewayProvider, 64}, {Domain::VwsanProvider, 64}};
};

/// Simulated NFV infrastructure spanning both provider domains: VM boot,
/// VNF lifecycle, static chaining, the two migration approaches, and ping
/// style liveness probes. All work is expressed as events on the loop.
class Nfvi {
 public:
  using ProbeId = std::size_t;
  using InstanceCallback = std::function<void(const InstanceId&)>;
  using Callback = std::function<void()>;

  Nfvi(sim::EventLoop& loop, sim::EventLog& log, const store::VnfStore& store, sim::Rng& rng,
       NfviConfig config = {})
      : loop_(loop), log_(log), store_(store), rng_(rng), config_(std::move(config)) {}

  const NfviConfig& config() const { return config_; }
  NfviConfig& mutable_config() { return config_; }

  // ---- lifecycle -----------------------------------------------------------

  /// Creates an instance in INSTANTIATING; it turns RUNNING once its VM has
  /// booted. `boot_delay` overrides the configured distribution.
  InstanceId instantiate(const std::string& image_id, Domain domain, const std::string& ref = {},
                         InstanceCallback on_running = {},
                         std::optional<SimDuration> boot_delay = std::nullopt) {
    auto image = store_.find(image_id);
    if (!image) fail(ErrorCode::UnknownImage, "no image " + image_id + " in store");
    if (vm_count(domain) + 1 > quota(domain)) {
      fail(ErrorCode::CapacityExceeded, std::string(to_string(domain)) + " VM quota reached");
    }
    const SimDuration boot = boot_delay.value_or(config_.boot_delay.sample(rng_));
    VnfInstance inst;
    inst.instance_id = "vnf-" + std::to_string(++instance_seq_);
    inst.image_id = image_id;
    inst.domain = domain;
    inst.ref = ref;
    inst.vm.vm_id = "vm-" + std::to_string(instance_seq_);
    inst.vm.vcpu = image->resources.vcpu;
    inst.vm.ram_mb = image->resources.ram_mb;
    inst.vm.boot_delay = boot;
    const InstanceId id = inst.instance_id;
    instances_.emplace(id, std::move(inst));
    set_vm_state(id, VmState::Booting);
    log_instance(id, InstanceState::Instantiating,
                 {{"imageId", image_id},
                  {"domain", domain},
                  {"vmId", instances_.at(id).vm.vm_id},
                  {"bootDelayMs", to_ms(boot)}});

    loop_.post_after(boot, [this, id, on_running = std::move(on_running)] {
      auto& i = instances_.at(id);
      if (i.state != InstanceState::Instantiating) return;  // terminated while booting
      set_vm_state(id, VmState::Up);
      i.state = InstanceState::Running;
      i.running_since = loop_.now();
      i.busy_until = loop_.now();
      log_instance(id, InstanceState::Running, {{"domain", i.domain}});
      if (on_running) on_running(id);
    });
    return id;
  }

  /// Instantiates `image_ids` in order (sequentially, or all at once in
  /// parallel mode) and reports the instance ids once every one is RUNNING.
  std::vector<InstanceId> instantiate_all(const std::vector<std::string>& image_ids, Domain domain,
                                          const std::string& ref,
                                          std::function<void(std::vector<InstanceId>)> on_all_running,
                                          InstanceCallback on_created = {}) {
    for (const auto& id : image_ids) {
      if (!store_.contains(id)) fail(ErrorCode::UnknownImage, "no image " + id + " in store");
    }
    if (vm_count(domain) + static_cast<int>(image_ids.size()) > quota(domain)) {
      fail(ErrorCode::CapacityExceeded, std::string(to_string(domain)) + " VM quota reached");
    }
    auto state = std::make_shared<BatchState>();
    state->images = image_ids;
    state->domain = domain;
    state->ref = ref;
    state->done = std::move(on_all_running);
    state->created = std::move(on_created);
    if (image_ids.empty()) {
      loop_.post([state] { state->done({}); });
      return {};
    }
    if (config_.parallel_instantiation) {
      for (const auto& img : image_ids) {
        state->ids.push_back(instantiate(img, domain, ref, [state](const InstanceId&) {
          if (++state->running == state->images.size()) state->done(state->ids);
        }));
        if (state->created) state->created(state->ids.back());
      }
    } else {
      start_next_in_batch(state);
    }
    return state->ids;
  }

  /// Links RUNNING instances of one domain into a forwarding chain; the chain
  /// carries traffic after the configured chaining delay.
  ChainId chain(const std::vector<InstanceId>& ids, Direction direction, const std::string& ref = {},
                Callback on_ready = {}) {
    if (ids.empty()) {
      fail(ErrorCode::CompositionMismatch, "an empty conversion is a direct path, not a chain");
    }
    std::vector<std::string> images;
    std::optional<Domain> domain;
    for (const auto& id : ids) {
      const auto& inst = instance(id);
      if (inst.state != InstanceState::Running) {
        fail(ErrorCode::NotRunning, id + " is " + std::string(to_string(inst.state)));
      }
      if (domain && *domain != inst.domain) {
        fail(ErrorCode::NotRunning, "chain members must run in one domain");
      }
      domain = inst.domain;
      images.push_back(inst.image_id);
    }
    for (std::size_t i = 1; i < images.size(); ++i) {
      if (store_.find(images[i - 1])->output != store_.find(images[i])->input) {
        fail(ErrorCode::CompositionMismatch, images[i - 1] + " does not feed " + images[i]);
      }
    }
    ForwardingChain c;
    c.chain_id = "chain-" + std::to_string(++chain_seq_);
    c.direction = direction;
    c.instances = ids;
    c.image_ids = images;
    c.service_request_id = ref;
    c.domain = *domain;
    c.ready_at = loop_.now() + config_.chain_delay;
    const ChainId cid = c.chain_id;
    chains_.emplace(cid, std::move(c));
    log_.record(loop_.now(), cid, "CHAINING", ref, sim::Phase::Mano,
                {{"direction", direction}, {"instances", ids}, {"domain", *domain}});
    loop_.post_after(config_.chain_delay, [this, cid, ref, on_ready = std::move(on_ready)] {
      auto& ch = chains_.at(cid);
      if (ch.dissolved) return;
      log_.record(loop_.now(), cid, "CHAINED", ref, sim::Phase::Mano);
      if (on_ready) on_ready();
    });
    return cid;
  }

  /// Moves a chain between domains following `plan`.
  ///
  /// LIVE_AFTER_CHAIN: every instance is MIGRATING for `transfer_delay` and
  /// then RUNNING in the target domain. Its VM is DOWN for exactly its
  /// configured downtime: the window closes at switchover when it fits in
  /// the transfer, otherwise it opens at migration start and outlasts the
  /// switchover by the difference.
  ///
  /// IMAGE_THEN_INSTANTIATE: images are shipped for `transfer_delay`, fresh
  /// instances boot and are chained in the target, then the originals are
  /// terminated. No VM is ever unreachable.
  MigrationId migrate(const ChainId& chain_id, const MigrationPlan& plan, Callback on_done = {}) {
    auto& ch = chain_at(chain_id);
    if (ch.dissolved || ch.domain != plan.source) {
      fail(ErrorCode::SourceMismatch, chain_id + " is not live in " + std::string(to_string(plan.source)));
    }
    for (const auto& id : ch.instances) {
      if (instance(id).state != InstanceState::Running || instance(id).domain != plan.source) {
        fail(ErrorCode::SourceMismatch, id + " is not RUNNING in the source domain");
      }
    }
    validate(plan, ch.instances.size());
    if (plan.source == plan.target) fail(ErrorCode::InvalidPlan, "source and target coincide");
    if (vm_count(plan.target) + static_cast<int>(ch.instances.size()) > quota(plan.target)) {
      fail(ErrorCode::CapacityExceeded, std::string(to_string(plan.target)) + " VM quota reached");
    }

    MigrationRecord rec;
    rec.migration_id = "migration-" + std::to_string(++migration_seq_);
    rec.chain_id = chain_id;
    rec.approach = plan.approach;
    rec.source = plan.source;
    rec.target = plan.target;
    rec.start = loop_.now();
    const MigrationId mid = rec.migration_id;
    const std::string ref = ch.service_request_id;
    migrations_.emplace(mid, std::move(rec));
    log_.record(loop_.now(), mid, "MIGRATION_START", ref, sim::Phase::Mano,
                {{"chainId", chain_id},
                 {"approach", std::string(to_string(plan.approach))},
                 {"transferDelayMs", to_ms(plan.transfer_delay)},
                 {"target", plan.target}});

    if (plan.approach == MigrationApproach::LiveAfterChain) {
      start_live_migration(mid, plan, std::move(on_done));
    } else {
      start_image_migration(mid, plan, std::move(on_done));
    }
    return mid;
  }

  /// Terminates an instance. Chains containing it dissolve; a migration in
  /// flight for it is closed as aborted.
  void terminate(const InstanceId& id) {
    auto it = instances_.find(id);
    if (it == instances_.end() || it->second.state == InstanceState::Terminated) {
      fail(ErrorCode::NotFound, "no live instance " + id);
    }
    const bool was_migrating = it->second.state == InstanceState::Migrating;
    it->second.state = InstanceState::Terminated;
    it->second.utilization.reset();
    set_vm_state(id, VmState::Down);
    log_instance(id, InstanceState::Terminated, {});
    for (auto& [cid, ch] : chains_) {
      if (ch.dissolved) continue;
      if (std::find(ch.instances.begin(), ch.instances.end(), id) == ch.instances.end()) continue;
      ch.dissolved = true;
      log_.record(loop_.now(), cid, "DISSOLVED", ch.service_request_id, sim::Phase::Mano);
      if (was_migrating) {
        for (auto& [mid, rec] : migrations_) {
          if (rec.chain_id != cid || rec.end || rec.aborted) continue;
          rec.aborted = true;
          rec.end = loop_.now();
          log_.record(loop_.now(), mid, "MIGRATION_ABORTED", ch.service_request_id, sim::Phase::Mano);
        }
      }
    }
  }

  // ---- probing -------------------------------------------------------------

  /// Samples reachability of an instance's VM every `period` across
  /// [from, until]. Unreachable exactly while the VM is DOWN or BOOTING.
  ProbeId probe(const InstanceId& id, SimDuration period, SimTime from, SimTime until) {
    if (period <= SimDuration::zero()) fail(ErrorCode::MalformedRequest, "probe period must be positive");
    instance(id);
    const ProbeId pid = probes_.size();
    probes_.push_back({});
    for (SimTime t = std::max(from, loop_.now()); t <= until; t += period) {
      loop_.post_at(t, [this, pid, id] {
        probes_[pid].push_back({loop_.now(), instances_.at(id).vm.reachable()});
      });
    }
    return pid;
  }

  const std::vector<ProbeSample>& probe_samples(ProbeId pid) const { return probes_.at(pid); }

  // ---- simulated CPU -------------------------------------------------------

  /// FIFO single-server admission: the request starts once the instance is
  /// free and holds it for `cost`. Returns the completion time.
  SimTime serve(const InstanceId& id, SimTime arrival, SimDuration cost) {
    auto& inst = instance_at(id);
    const SimTime start = std::max(arrival, inst.busy_until);
    inst.busy_until = start + cost;
    ++inst.served;
    return inst.busy_until;
  }

  // ---- queries -------------------------------------------------------------

  const VnfInstance& instance(const InstanceId& id) const {
    auto it = instances_.find(id);
    if (it == instances_.end()) fail(ErrorCode::NotFound, "no instance " + id);
    return it->second;
  }

  VnfInstance& instance_at(const InstanceId& id) {
    auto it = instances_.find(id);
    if (it == instances_.end()) fail(ErrorCode::NotFound, "no instance " + id);
    return it->second;
  }

  bool has_instance(const InstanceId& id) const { return instances_.contains(id); }

  const ForwardingChain& chain_info(const ChainId& id) const {
    auto it = chains_.find(id);
    if (it == chains_.end()) fail(ErrorCode::NotFound, "no chain " + id);
    return it->second;
  }

  bool chain_ready(const ChainId& id) const {
    const auto& ch = chain_info(id);
    return !ch.dissolved && loop_.now() >= ch.ready_at;
  }

  const MigrationRecord& migration(const MigrationId& id) const { return migrations_.at(id); }

  std::vector<MigrationRecord> migrations() const {
    std::vector<MigrationRecord> out;
    for (const auto& [id, rec] : migrations_) out.push_back(rec);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
    return out;
  }

  const std::map<InstanceId, VnfInstance>& instances() const { return instances_; }
  const std::map<ChainId, ForwardingChain>& chains() const { return chains_; }

  int vm_count(Domain d) const {
    return static_cast<int>(std::count_if(instances_.begin(), instances_.end(), [d](const auto& kv) {
      return kv.second.domain == d && kv.second.state != InstanceState::Terminated;
    }));
  }

  int quota(Domain d) const {
    auto it = config_.vm_quota.find(d);
    return it == config_.vm_quota.end() ? 0 : it->second;
  }

  const store::VnfStore& store() const { return store_; }
  sim::EventLoop& loop() { return loop_; }
  sim::EventLog& log() { return log_; }
  sim::Rng& rng() { return rng_; }

  static void validate(const MigrationPlan& plan, std::size_t chain_length) {
    if (plan.per_instance_downtime.size() != chain_length) {
      fail(ErrorCode::InvalidPlan, "one downtime per chain instance required");
    }
    if (plan.transfer_delay < SimDuration::zero()) fail(ErrorCode::InvalidPlan, "negative transfer delay");
    for (auto d : plan.per_instance_downtime) {
      if (plan.approach == MigrationApproach::LiveAfterChain && d <= SimDuration::zero()) {
        fail(ErrorCode::InvalidPlan, "live migration downtime must be positive");
      }
      if (plan.approach == MigrationApproach::ImageThenInstantiate && d != SimDuration::zero()) {
        fail(ErrorCode::InvalidPlan, "fresh instantiation has no downtime");
      }
    }
  }

 private:
  struct BatchState {
    std::vector<std::string> images;
    Domain domain = Domain::GatewayProvider;
    std::string ref;
    std::vector<InstanceId> ids;
    std::size_t running = 0;
    std::function<void(std::vector<InstanceId>)> done;
    InstanceCallback created;
  };

  void start_next_in_batch(const std::shared_ptr<BatchState>& state) {
    const auto& img = state->images[state->ids.size()];
    state->ids.push_back(instantiate(img, state->domain, state->ref, [this, state](const InstanceId&) {
      if (state->ids.size() < state->images.size()) {
        try {
          start_next_in_batch(state);
        } catch (const Error&) {
          return;  // quota changed under us; the batch never completes
        }
      } else {
        state->done(state->ids);
      }
    }));
    if (state->created) state->created(state->ids.back());
  }

  void start_live_migration(const MigrationId& mid, const MigrationPlan& plan, Callback on_done) {
    auto& rec = migrations_.at(mid);
    const auto& ch = chains_.at(rec.chain_id);
    const SimTime t0 = loop_.now();
    const SimTime switchover = t0 + plan.transfer_delay;
    for (std::size_t i = 0; i < ch.instances.size(); ++i) {
      const InstanceId id = ch.instances[i];
      const SimDuration down = plan.per_instance_downtime[i];
      const SimTime down_start = t0 + std::max(SimDuration::zero(), plan.transfer_delay - down);
      const SimTime down_end = down_start + down;
      rec.windows.push_back({id, down, down_start, down_end});

      auto& inst = instances_.at(id);
      inst.state = InstanceState::Migrating;
      inst.utilization.reset();
      set_vm_state(id, VmState::Migrating);
      log_instance(id, InstanceState::Migrating, {{"migrationId", mid}, {"target", plan.target}});

      auto go_down = [this, id] {
        if (instances_.at(id).state == InstanceState::Terminated) return;
        set_vm_state(id, VmState::Down);
      };
      if (down_start == t0) {
        go_down();
      } else {
        loop_.post_at(down_start, go_down);
      }
      loop_.post_at(down_end, [this, id] {
        if (instances_.at(id).state == InstanceState::Terminated) return;
        set_vm_state(id, VmState::Up);
      });
    }
    loop_.post_at(switchover, [this, mid, target = plan.target, on_done = std::move(on_done)] {
      auto& r = migrations_.at(mid);
      if (r.aborted) return;
      auto& c = chains_.at(r.chain_id);
      for (const auto& id : c.instances) {
        auto& inst = instances_.at(id);
        inst.domain = target;
        inst.state = InstanceState::Running;
        inst.running_since = loop_.now();
        if (inst.vm.state == VmState::Migrating) set_vm_state(id, VmState::Up);
        log_instance(id, InstanceState::Running, {{"domain", target}});
      }
      c.domain = target;
      r.end = loop_.now();
      log_.record(loop_.now(), mid, "MIGRATION_END", c.service_request_id, sim::Phase::Mano,
                  {{"chainId", c.chain_id}});
      if (on_done) on_done();
    });
  }

  void start_image_migration(const MigrationId& mid, const MigrationPlan& plan, Callback on_done) {
    const ChainId cid = migrations_.at(mid).chain_id;
    loop_.post_after(plan.transfer_delay, [this, mid, cid, plan, on_done = std::move(on_done)]() mutable {
      auto& r = migrations_.at(mid);
      if (r.aborted) return;
      const auto images = chains_.at(cid).image_ids;
      const std::string ref = chains_.at(cid).service_request_id;
      instantiate_all(images, plan.target, ref,
                      [this, mid, cid, ref, on_done = std::move(on_done)](std::vector<InstanceId> fresh) mutable {
                        auto& rr = migrations_.at(mid);
                        if (rr.aborted) return;
                        for (const auto& id : fresh) rr.windows.push_back({id, SimDuration::zero(), loop_.now(), loop_.now()});
                        const auto old = chains_.at(cid).instances;
                        const Direction dir = chains_.at(cid).direction;
                        // Chain at the target under the original chain id.
                        for (const auto& id : fresh) {
                          if (instance(id).state != InstanceState::Running) return;
                        }
                        log_.record(loop_.now(), cid, "CHAINING", ref, sim::Phase::Mano,
                                    {{"direction", dir}, {"instances", fresh}, {"domain", instance(fresh.front()).domain}});
                        loop_.post_after(config_.chain_delay, [this, mid, cid, ref, old, fresh,
                                                                on_done = std::move(on_done)] {
                          auto& r3 = migrations_.at(mid);
                          if (r3.aborted) return;
                          auto& c = chains_.at(cid);
                          for (const auto& id : old) {
                            if (instances_.at(id).state != InstanceState::Terminated) retire(id);
                          }
                          c.instances = fresh;
                          c.domain = instance(fresh.front()).domain;
                          c.dissolved = false;
                          c.ready_at = loop_.now();
                          log_.record(loop_.now(), cid, "CHAINED", ref, sim::Phase::Mano);
                          r3.end = loop_.now();
                          log_.record(loop_.now(), mid, "MIGRATION_END", ref, sim::Phase::Mano, {{"chainId", cid}});
                          if (on_done) on_done();
                        });
                      });
    });
  }

  // Terminates a superseded instance without dissolving its chain.
  void retire(const InstanceId& id) {
    auto& inst = instances_.at(id);
    inst.state = InstanceState::Terminated;
    inst.utilization.reset();
    set_vm_state(id, VmState::Down);
    log_instance(id, InstanceState::Terminated, {{"reason", "superseded"}});
  }

  void set_vm_state(const InstanceId& id, VmState s) {
    auto& inst = instances_.at(id);
    inst.vm.state = s;
    inst.vm.history.push_back({loop_.now(), s});
    log_.record(loop_.now(), inst.vm.vm_id, std::string(to_string(s)), inst.ref, sim::Phase::Mano,
                {{"instanceId", id}});
  }

  void log_instance(const InstanceId& id, InstanceState s, Json detail) {
    auto& inst = instances_.at(id);
    inst.state = s;
    log_.record(loop_.now(), id, std::string(to_string(s)), inst.ref, sim::Phase::Mano, std::move(detail));
  }

  ForwardingChain& chain_at(const ChainId& id) {
    auto it = chains_.find(id);
    if (it == chains_.end()) fail(ErrorCode::NotFound, "no chain " + id);
    return it->second;
  }

  sim::EventLoop& loop_;
  sim::EventLog& log_;
  const store::VnfStore& store_;
  sim::Rng& rng_;
  NfviConfig config_;

  std::map<InstanceId, VnfInstance> instances_;
  std::map<ChainId, ForwardingChain> chains_;
  std::map<MigrationId, MigrationRecord> migrations_;
  std::vector<std::vector<ProbeSample>> probes_;
  std::uint64_t instance_seq_ = 0;
  std::uint64_t chain_seq_ = 0;
  std::uint64_t migration_seq_ = 0;
};

}  // namespace vgw::nfvi
