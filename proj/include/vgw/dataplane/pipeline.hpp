#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "vgw/dataplane/converters.hpp"
#include "vgw/nfvi/nfvi.hpp"

namespace vgw::dataplane {

struct Hop {
  nfvi::InstanceId instance_id;
  std::string image_id;
  SimTime arrival{};
  SimTime done{};
};

struct Traversal {
  Message out;
  SimTime sent{};
  SimTime delivered{};
  std::vector<Hop> hops;

  SimDuration latency() const { return delivered - sent; }
};

/// Picks the replica serving chain position `position`; the default keeps
/// the chain's own instance.
using ReplicaSelector = std::function<nfvi::InstanceId(std::size_t position, const nfvi::InstanceId& primary)>;

struct PipelineConfig {
  SimDuration hop_latency = SimDuration(500);  // between consecutive VNFs
};

/// Pushes messages through forwarding chains hosted on the NFVI. Each hop
/// queues on its instance's simulated CPU for the image's cost.
class Pipeline {
 public:
  explicit Pipeline(nfvi::Nfvi& nfvi, PipelineConfig config = {}) : nfvi_(nfvi), config_(config) {}

  const PipelineConfig& config() const { return config_; }

  /// Throws CHAIN_DOWN, counting the drop, when any hop cannot serve at `sent`.
  Traversal process(const nfvi::ChainId& chain_id, const Message& in, SimTime sent,
                    const ReplicaSelector& select = {}) {
    const auto& ch = nfvi_.chain_info(chain_id);
    std::vector<nfvi::InstanceId> path;
    for (std::size_t i = 0; i < ch.instances.size(); ++i) {
      path.push_back(select ? select(i, ch.instances[i]) : ch.instances[i]);
    }
    const bool up = !ch.dissolved && sent >= ch.ready_at &&
                    std::all_of(path.begin(), path.end(), [&](const auto& id) { return nfvi_.instance(id).serving(); });
    if (!up) {
      ++drops_[chain_id];
      fail(ErrorCode::ChainDown, chain_id + " cannot carry traffic");
    }

    Traversal t;
    t.sent = sent;
    Message m = in;
    SimTime at = sent;
    for (std::size_t i = 0; i < path.size(); ++i) {
      const auto& inst = nfvi_.instance(path[i]);
      const auto image = *nfvi_.store().find(inst.image_id);
      m = apply_image(image, m);
      Hop hop{path[i], inst.image_id, at, nfvi_.serve(path[i], at, image.cost())};
      at = hop.done + (i + 1 < path.size() ? config_.hop_latency : SimDuration::zero());
      t.hops.push_back(std::move(hop));
    }
    t.out = std::move(m);
    t.delivered = at;
    ++delivered_[chain_id];
    return t;
  }

  /// The direct path used when both sides already match.
  static Traversal identity(const Message& in, SimTime sent) { return {in, sent, sent, {}}; }

  std::uint64_t drops(const nfvi::ChainId& id) const {
    auto it = drops_.find(id);
    return it == drops_.end() ? 0 : it->second;
  }

  std::uint64_t delivered(const nfvi::ChainId& id) const {
    auto it = delivered_.find(id);
    return it == delivered_.end() ? 0 : it->second;
  }

  std::uint64_t total_drops() const {
    std::uint64_t n = 0;
    for (const auto& [id, c] : drops_) n += c;
    return n;
  }

 private:
  nfvi::Nfvi& nfvi_;
  PipelineConfig config_;
  std::map<nfvi::ChainId, std::uint64_t> drops_;
  std::map<nfvi::ChainId, std::uint64_t> delivered_;
};

/// Non-virtualized gateway: the same conversions on one host, with no VMs
/// and no inter-VNF hops.
class DirectGateway {
 public:
  explicit DirectGateway(std::vector<store::VnfImage> images) : images_(std::move(images)) {}

  const std::vector<store::VnfImage>& images() const { return images_; }

  Traversal process(const Message& in, SimTime sent) {
    Traversal t;
    t.sent = sent;
    Message m = in;
    SimTime at = std::max(sent, busy_until_);
    for (const auto& img : images_) {
      m = apply_image(img, m);
      Hop hop{"direct", img.image_id, at, at + img.cost()};
      at = hop.done;
      t.hops.push_back(std::move(hop));
    }
    busy_until_ = at;
    t.out = std::move(m);
    t.delivered = at;
    return t;
  }

 private:
  std::vector<store::VnfImage> images_;
  SimTime busy_until_{};
};

}  // namespace vgw::dataplane
