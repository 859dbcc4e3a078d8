#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "vgw/control/bus.hpp"
#include "vgw/control/types.hpp"
#include "vgw/nfvi/mano.hpp"
#include "vgw/store/vnf_store.hpp"

namespace vgw::control {

struct GatewayConfig {
  std::string endpoint = "gateway";
  std::string provider_endpoint = "provider";
  std::int64_t retry_after_s = 30;
};

/// One conversion the gateway must realize for a VNF request.
struct ChainKey {
  DeviceBrand brand = DeviceBrand::Sunspot;
  InterfaceDescriptor south;
  InterfaceDescriptor north;
  Direction direction = Direction::Uplink;

  friend auto operator<=>(const ChainKey&, const ChainKey&) = default;
};

inline std::vector<ChainKey> chain_keys(const VwsanDescriptor& vwsan, const std::vector<InterfaceDescriptor>& north) {
  std::set<ChainKey> keys;
  for (std::size_t i = 0; i < vwsan.device_brands.size(); ++i) {
    const auto brand = vwsan.device_brands[i];
    for (const auto& n : north) {
      keys.insert({brand, vwsan.southbound[i], n, is_actuator(brand) ? Direction::Downlink : Direction::Uplink});
    }
  }
  return {keys.begin(), keys.end()};
}

/// VWSAN gateway provider domain: the Central Controller hosting the R2
/// resources, backed by the VNF store and MANO.
///
/// POST   /VNFsRequest
/// PUT    /VNFsRequest/{VNFsRequestId}
/// DELETE /VNFsRequest/{VNFsRequestId}
class GatewayDomain {
 public:
  GatewayDomain(sim::EventLoop& loop, sim::EventLog& log, MessageBus& bus, const store::VnfStore& store,
                nfvi::Mano& mano, GatewayConfig config = {})
      : loop_(loop), log_(log), bus_(bus), store_(store), mano_(mano), config_(std::move(config)) {
    router_.add("POST", "/VNFsRequest", [this](const RestRequest& r, const Router::Params&) { return submit(r.body); });
    router_.add("PUT", "/VNFsRequest/{id}",
                [this](const RestRequest& r, const Router::Params& p) { return update(p.at("id"), r.body); });
    router_.add("DELETE", "/VNFsRequest/{id}",
                [this](const RestRequest&, const Router::Params& p) { return remove(p.at("id")); });
    router_.add("GET", "/VNFsRequest", [this](const RestRequest&, const Router::Params&) {
      Json list = Json::array();
      for (const auto& [id, rec] : requests_) list.push_back(rec.request);
      return RestResponse{200, list, {}};
    });
    router_.add("GET", "/VNFsRequest/{id}", [this](const RestRequest&, const Router::Params& p) {
      return RestResponse{200, Json(record(p.at("id")).request), {}};
    });
    bus_.attach(config_.endpoint, router_);
  }

  GatewayDomain(const GatewayDomain&) = delete;
  GatewayDomain& operator=(const GatewayDomain&) = delete;

  const Router& router() const { return router_; }

  const VnfRequest* find(const std::string& id) const {
    auto it = requests_.find(id);
    return it == requests_.end() ? nullptr : &it->second.request;
  }

  /// Chain id realizing each key of a request; identity conversions map to
  /// an empty id.
  std::map<ChainKey, std::string> chains_of(const std::string& id) const {
    std::map<ChainKey, std::string> out;
    auto it = requests_.find(id);
    if (it == requests_.end()) return out;
    for (const auto& [key, slot] : it->second.slots) {
      if (slot.ready) out[key] = slot.chain_id;
    }
    return out;
  }

 private:
  struct Slot {
    std::vector<std::string> images;
    std::optional<nfvi::Mano::ProvisionId> job;
    std::string chain_id;
    bool ready = false;
  };

  struct Record {
    VnfRequest request;
    std::map<ChainKey, Slot> slots;
    std::uint64_t generation = 0;  // bumps on every re-resolution
  };

  Record& record(const std::string& id) {
    auto it = requests_.find(id);
    if (it == requests_.end()) fail(ErrorCode::NotFound, "no VNF request " + id);
    return it->second;
  }

  void set_state(Record& rec, VnfRequestState s) {
    rec.request.state = s;
    log_.record(loop_.now(), "VNFsRequest/" + rec.request.vnf_request_id, std::string(to_string(s)),
                rec.request.service_request_id, s == VnfRequestState::Received ? sim::Phase::VnfRequest
                                                                               : sim::Phase::None);
  }

  RestResponse submit(const Json& body) {
    Record rec;
    rec.request.service_request_id = json_detail::require_string(body, "serviceRequestId");
    rec.request.northbound = parse_northbound(body);
    rec.request.vwsan = json_detail::require(body, "vwsan").get<VwsanDescriptor>();
    rec.request.qos = json_detail::require(body, "qos").get<QosParams>();
    rec.request.vnf_request_id = "vr-" + std::to_string(++seq_);
    const std::string id = rec.request.vnf_request_id;
    auto& stored = requests_.emplace(id, std::move(rec)).first->second;
    set_state(stored, VnfRequestState::Received);
    loop_.post([this, id, gen = stored.generation] { resolve(id, gen); });
    return {201, Json(stored.request), "/VNFsRequest/" + id};
  }

  RestResponse update(const std::string& id, const Json& patch) {
    auto& rec = record(id);
    if (!patch.is_object()) fail(ErrorCode::MalformedRequest, "patch must be an object");
    auto north = patch.contains("northbound") ? parse_northbound(patch) : rec.request.northbound;
    auto vwsan = patch.contains("vwsan") ? patch.at("vwsan").get<VwsanDescriptor>() : rec.request.vwsan;
    auto qos = patch.contains("qos") ? patch.at("qos").get<QosParams>() : rec.request.qos;
    rec.request.northbound = std::move(north);
    rec.request.vwsan = std::move(vwsan);
    rec.request.qos = qos;
    ++rec.generation;
    set_state(rec, VnfRequestState::Received);
    loop_.post([this, id, gen = rec.generation] { resolve(id, gen); });
    return {200, Json(rec.request), {}};
  }

  RestResponse remove(const std::string& id) {
    auto& rec = record(id);
    for (auto& [key, slot] : rec.slots) release(slot);
    log_.record(loop_.now(), "VNFsRequest/" + id, "DELETED", rec.request.service_request_id);
    requests_.erase(id);
    return {204, {}, {}};
  }

  void release(Slot& slot) {
    if (slot.job) mano_.abort(*slot.job);
    if (!slot.chain_id.empty() && slot.ready) mano_.teardown(slot.chain_id);
    slot = {};
  }

  void resolve(const std::string& id, std::uint64_t gen) {
    auto it = requests_.find(id);
    if (it == requests_.end() || it->second.generation != gen) return;
    auto& rec = it->second;
    const auto& ref = rec.request.service_request_id;
    const auto keys = chain_keys(rec.request.vwsan, rec.request.northbound);

    std::map<ChainKey, std::vector<std::string>> wanted;
    Json lookup = Json::array();
    bool feasible = true;
    for (const auto& key : keys) {
      auto chain = store_.resolve_chain(key.south, key.north, key.direction);
      Json entry = {{"brand", key.brand}, {"south", key.south}, {"north", key.north}, {"direction", key.direction}};
      if (!chain) {
        feasible = false;
        entry["found"] = false;
      } else {
        std::vector<std::string> ids;
        for (const auto& img : *chain) ids.push_back(img.image_id);
        entry["images"] = ids;
        wanted[key] = ids;
      }
      lookup.push_back(entry);
    }
    log_.record(loop_.now(), "CentralController", feasible ? "CHAINS_RESOLVED" : "CHAIN_NOT_FOUND", ref,
                sim::Phase::StoreLookup, {{"keys", lookup}});

    if (!feasible) {
      for (auto& [key, slot] : rec.slots) release(slot);
      rec.slots.clear();
      fail_request(rec);
      return;
    }

    // Keep slots whose conversion is unchanged; release the rest.
    for (auto s = rec.slots.begin(); s != rec.slots.end();) {
      auto w = wanted.find(s->first);
      if (w != wanted.end() && w->second == s->second.images) {
        ++s;
      } else {
        release(s->second);
        s = rec.slots.erase(s);
      }
    }
    set_state(rec, VnfRequestState::Provisioning);
    for (const auto& [key, images] : wanted) {
      if (rec.slots.contains(key)) continue;
      auto& slot = rec.slots[key];
      slot.images = images;
      if (images.empty()) {
        slot.ready = true;
        continue;
      }
      slot.job = mano_.provision(
          images, key.direction, ref,
          [this, id, gen, key](const nfvi::Provisioned& p) { chain_ready(id, gen, key, p.chain_id); },
          [this, id, gen](const Error&) { chain_failed(id, gen); });
    }
    loop_.post([this, id, gen] { maybe_ready(id, gen); });
  }

  void chain_ready(const std::string& id, std::uint64_t gen, const ChainKey& key, const std::string& chain_id) {
    auto it = requests_.find(id);
    if (it == requests_.end() || it->second.generation != gen) return;
    auto& slot = it->second.slots.at(key);
    slot.job.reset();
    slot.chain_id = chain_id;
    slot.ready = true;
    maybe_ready(id, gen);
  }

  void chain_failed(const std::string& id, std::uint64_t gen) {
    auto it = requests_.find(id);
    if (it == requests_.end() || it->second.generation != gen) return;
    auto& rec = it->second;
    for (auto& [key, slot] : rec.slots) release(slot);
    rec.slots.clear();
    ++rec.generation;
    fail_request(rec);
  }

  void maybe_ready(const std::string& id, std::uint64_t gen) {
    auto it = requests_.find(id);
    if (it == requests_.end() || it->second.generation != gen) return;
    auto& rec = it->second;
    if (rec.request.state != VnfRequestState::Provisioning) return;
    for (const auto& [key, slot] : rec.slots) {
      if (!slot.ready) return;
    }
    rec.request.chain_ids.clear();
    for (const auto& [key, slot] : rec.slots) {
      if (!slot.chain_id.empty()) rec.request.chain_ids.push_back(slot.chain_id);
    }
    set_state(rec, VnfRequestState::Ready);
    AvailabilityNotification n;
    n.service_request_id = rec.request.service_request_id;
    n.available = true;
    n.chain_ids = rec.request.chain_ids;
    notify(n);
  }

  void fail_request(Record& rec) {
    rec.request.chain_ids.clear();
    set_state(rec, VnfRequestState::Failed);
    AvailabilityNotification n;
    n.service_request_id = rec.request.service_request_id;
    n.available = false;
    n.retry_after_s = config_.retry_after_s;
    notify(n);
  }

  void notify(const AvailabilityNotification& n) {
    bus_.send("CentralController", config_.provider_endpoint, {"POST", "/ServiceAvailabilityNotification", Json(n)},
              n.service_request_id, sim::Phase::Availability);
  }

  sim::EventLoop& loop_;
  sim::EventLog& log_;
  MessageBus& bus_;
  const store::VnfStore& store_;
  nfvi::Mano& mano_;
  GatewayConfig config_;
  Router router_;
  std::map<std::string, Record> requests_;
  std::uint64_t seq_ = 0;
};

}  // namespace vgw::control
