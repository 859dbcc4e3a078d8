#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "vgw/nfvi/nfvi.hpp"

namespace vgw::nfvi {

struct MigrationSettings {
  MigrationApproach approach = MigrationApproach::LiveAfterChain;
  sim::UniformDelay transfer = sim::UniformDelay::ms(4000, 6000);
  sim::UniformDelay protocol_converter_downtime = sim::UniformDelay::ms(24000, 33000);
  sim::UniformDelay info_model_converter_downtime = sim::UniformDelay::ms(38000, 39000);
  // Per chain position; overrides the per-kind distributions when set.
  std::optional<std::vector<SimDuration>> downtime;
};

struct Provisioned {
  ChainId chain_id;
  std::vector<InstanceId> instances;
  SimTime started{};
  SimTime ready{};
  std::optional<MigrationId> migration_id;
};

/// Orchestrates instantiate -> chain -> migrate for one chain of images,
/// landing it in the VWSAN provider domain.
class Mano {
 public:
  using ProvisionId = std::uint64_t;
  using ReadyFn = std::function<void(const Provisioned&)>;
  using FailFn = std::function<void(const Error&)>;

  explicit Mano(Nfvi& nfvi, MigrationSettings settings = {}) : nfvi_(nfvi), settings_(std::move(settings)) {}

  MigrationSettings& settings() { return settings_; }
  Nfvi& nfvi() { return nfvi_; }

  ProvisionId provision(const std::vector<std::string>& image_ids, Direction direction,
                        const std::string& ref, ReadyFn on_ready, FailFn on_failed = {}) {
    auto job = std::make_shared<Job>();
    job->id = ++job_seq_;
    job->images = image_ids;
    job->direction = direction;
    job->ref = ref;
    job->on_ready = std::move(on_ready);
    job->on_failed = std::move(on_failed);
    job->started = nfvi_.loop().now();
    jobs_[job->id] = job;

    const Domain first = settings_.approach == MigrationApproach::LiveAfterChain ? Domain::GatewayProvider
                                                                                   : Domain::VwsanProvider;
    try {
      if (settings_.approach == MigrationApproach::ImageThenInstantiate) {
        // Images travel first; there is nothing running at the source.
        const SimDuration transfer = settings_.transfer.sample(nfvi_.rng());
        nfvi_.log().record(nfvi_.loop().now(), "mano", "IMAGE_TRANSFER", ref, sim::Phase::Mano,
                           {{"images", image_ids}, {"transferDelayMs", to_ms(transfer)}});
        nfvi_.loop().post_after(transfer, [this, job, first] { guarded(job, [&] { instantiate(job, first); }); });
      } else {
        instantiate(job, first);
      }
    } catch (const Error& e) {
      fail_job(job, e);
    }
    return job->id;
  }

  /// Stops a provisioning job and terminates whatever it created so far.
  void abort(ProvisionId id) {
    auto it = jobs_.find(id);
    if (it == jobs_.end()) return;
    auto job = it->second;
    job->aborted = true;
    for (const auto& inst : job->instances) {
      if (nfvi_.has_instance(inst) && nfvi_.instance(inst).state != InstanceState::Terminated) {
        nfvi_.terminate(inst);
      }
    }
    jobs_.erase(it);
  }

  /// Terminates every live instance of a chain.
  void teardown(const ChainId& chain_id) {
    for (const auto& inst : nfvi_.chain_info(chain_id).instances) {
      if (nfvi_.instance(inst).state != InstanceState::Terminated) nfvi_.terminate(inst);
    }
  }

  MigrationPlan plan_for(const std::vector<std::string>& image_ids) {
    MigrationPlan plan;
    plan.approach = settings_.approach;
    plan.source = Domain::GatewayProvider;
    plan.target = Domain::VwsanProvider;
    plan.transfer_delay = settings_.transfer.sample(nfvi_.rng());
    for (std::size_t i = 0; i < image_ids.size(); ++i) {
      if (plan.approach == MigrationApproach::ImageThenInstantiate) {
        plan.per_instance_downtime.push_back(SimDuration::zero());
      } else if (settings_.downtime && i < settings_.downtime->size()) {
        plan.per_instance_downtime.push_back((*settings_.downtime)[i]);
      } else {
        const auto kind = nfvi_.store().find(image_ids[i])->kind;
        const auto& dist = kind == store::ImageKind::ProtocolConverter ? settings_.protocol_converter_downtime
                                                                       : settings_.info_model_converter_downtime;
        plan.per_instance_downtime.push_back(dist.sample(nfvi_.rng()));
      }
    }
    return plan;
  }

 private:
  struct Job {
    ProvisionId id = 0;
    std::vector<std::string> images;
    Direction direction = Direction::Uplink;
    std::string ref;
    ReadyFn on_ready;
    FailFn on_failed;
    SimTime started{};
    std::vector<InstanceId> instances;
    ChainId chain_id;
    std::optional<MigrationId> migration_id;
    bool aborted = false;
  };

  template <typename F>
  void guarded(const std::shared_ptr<Job>& job, F&& step) {
    if (job->aborted) return;
    try {
      step();
    } catch (const Error& e) {
      fail_job(job, e);
    }
  }

  void instantiate(const std::shared_ptr<Job>& job, Domain domain) {
    nfvi_.instantiate_all(
        job->images, domain, job->ref,
        [this, job](std::vector<InstanceId> ids) {
          guarded(job, [&] {
            job->chain_id = nfvi_.chain(ids, job->direction, job->ref, [this, job] {
              guarded(job, [&] { chained(job); });
            });
          });
        },
        [job](const InstanceId& id) { job->instances.push_back(id); });
  }

  void chained(const std::shared_ptr<Job>& job) {
    if (settings_.approach == MigrationApproach::ImageThenInstantiate) {
      finish(job);
      return;
    }
    job->migration_id = nfvi_.migrate(job->chain_id, plan_for(job->images), [this, job] {
      guarded(job, [&] { finish(job); });
    });
  }

  void finish(const std::shared_ptr<Job>& job) {
    Provisioned p{job->chain_id, nfvi_.chain_info(job->chain_id).instances, job->started, nfvi_.loop().now(),
                  job->migration_id};
    jobs_.erase(job->id);
    if (job->on_ready) job->on_ready(p);
  }

  void fail_job(const std::shared_ptr<Job>& job, const Error& e) {
    nfvi_.log().record(nfvi_.loop().now(), "mano", "PROVISION_FAILED", job->ref, sim::Phase::Mano,
                       {{"error", std::string(to_string(e.code()))}, {"message", e.what()}});
    abort(job->id);
    if (job->on_failed) {
      auto fn = job->on_failed;
      auto err = e;
      nfvi_.loop().post([fn, err] { fn(err); });
    }
  }

  Nfvi& nfvi_;
  MigrationSettings settings_;
  std::map<ProvisionId, std::shared_ptr<Job>> jobs_;
  ProvisionId job_seq_ = 0;
};

/// One row per instance and migration: instanceId,downtimeMs,start,end.
inline void write_migration_csv(std::ostream& os, const std::vector<MigrationRecord>& records) {
  os << "migrationId,instanceId,downtimeMs,startMs,endMs\n";
  for (const auto& rec : records) {
    for (const auto& w : rec.windows) {
      os << rec.migration_id << ',' << w.instance_id << ',' << to_ms(w.downtime) << ',' << to_ms(w.start) << ','
         << to_ms(w.end) << '\n';
    }
  }
}

}  // namespace vgw::nfvi
