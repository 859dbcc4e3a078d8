#pragma once

#include <map>
#include <optional>
#include <string>

#include "vgw/control/bus.hpp"
#include "vgw/control/types.hpp"

namespace vgw::control {

/// Source of the VWSAN description. Can be told to fail the next queries.
class OssBss {
 public:
  explicit OssBss(VwsanDescriptor d = {}) : descriptor_(std::move(d)) {}

  void set_descriptor(VwsanDescriptor d) { descriptor_ = std::move(d); }
  const VwsanDescriptor& descriptor() const { return descriptor_; }
  void fail_next(int n) { failures_ = n; }

  std::optional<VwsanDescriptor> query() {
    if (failures_ > 0) {
      --failures_;
      return std::nullopt;
    }
    return descriptor_;
  }

 private:
  VwsanDescriptor descriptor_;
  int failures_ = 0;
};

struct ProviderConfig {
  std::string endpoint = "provider";
  std::string gateway_endpoint = "gateway";
  SimDuration oss_latency = from_ms(5);
  SimDuration oss_retry = std::chrono::seconds(30);
};

inline std::string app_endpoint(const std::string& application_id) { return "app/" + application_id; }

/// VWSAN provider domain: the Local Controller and OSS/BSS, hosting the
/// application-facing R1 resources.
///
/// POST   /ApplicationsServiceRequests
/// PUT    /ApplicationsServiceRequests/{RequestId}
/// DELETE /ApplicationsServiceRequests/{RequestId}
/// POST   /ServiceAvailabilityNotification
class ProviderDomain {
 public:
  ProviderDomain(sim::EventLoop& loop, sim::EventLog& log, MessageBus& bus, OssBss& oss, ProviderConfig config = {})
      : loop_(loop), log_(log), bus_(bus), oss_(oss), config_(std::move(config)) {
    router_.add("POST", "/ApplicationsServiceRequests", [this](const RestRequest& r, const Router::Params&) {
      return submit(r.body);
    });
    router_.add("PUT", "/ApplicationsServiceRequests/{id}", [this](const RestRequest& r, const Router::Params& p) {
      return update(p.at("id"), r.body);
    });
    router_.add("DELETE", "/ApplicationsServiceRequests/{id}",
                [this](const RestRequest&, const Router::Params& p) { return remove(p.at("id")); });
    router_.add("POST", "/ServiceAvailabilityNotification", [this](const RestRequest& r, const Router::Params&) {
      return notified(r.body.get<AvailabilityNotification>());
    });
    router_.add("GET", "/ApplicationsServiceRequests", [this](const RestRequest&, const Router::Params&) {
      Json list = Json::array();
      for (const auto& [id, sr] : requests_) list.push_back(sr.request);
      return RestResponse{200, list, {}};
    });
    router_.add("GET", "/ApplicationsServiceRequests/{id}", [this](const RestRequest&, const Router::Params& p) {
      return RestResponse{200, Json(record(p.at("id")).request), {}};
    });
    bus_.attach(config_.endpoint, router_);
  }

  ProviderDomain(const ProviderDomain&) = delete;
  ProviderDomain& operator=(const ProviderDomain&) = delete;

  const Router& router() const { return router_; }
  const ProviderConfig& config() const { return config_; }

  const ServiceRequest* find(const std::string& id) const {
    auto it = requests_.find(id);
    return it == requests_.end() ? nullptr : &it->second.request;
  }

  std::optional<std::string> vnf_request_of(const std::string& id) const {
    auto it = requests_.find(id);
    if (it == requests_.end() || it->second.vnf_request_id.empty()) return std::nullopt;
    return it->second.vnf_request_id;
  }

 private:
  struct Record {
    ServiceRequest request;
    std::string vnf_request_id;
    bool vnf_post_in_flight = false;
  };

  Record& record(const std::string& id) {
    auto it = requests_.find(id);
    if (it == requests_.end()) fail(ErrorCode::NotFound, "no service request " + id);
    return it->second;
  }

  void transition(Record& rec, RequestState to, sim::Phase phase) {
    if (!can_transition(rec.request.state, to)) {
      fail(ErrorCode::Conflict, rec.request.request_id + " is " + std::string(to_string(rec.request.state)));
    }
    rec.request.state = to;
    log_.record(loop_.now(), "ApplicationsServiceRequests/" + rec.request.request_id, std::string(to_string(to)),
                rec.request.request_id, phase);
  }

  RestResponse submit(const Json& body) {
    Record rec;
    rec.request.application_id = json_detail::require_string(body, "applicationId");
    rec.request.northbound = parse_northbound(body);
    rec.request.qos = json_detail::require(body, "qos").get<QosParams>();
    rec.request.request_id = "sr-" + std::to_string(++seq_);
    const std::string id = rec.request.request_id;
    requests_.emplace(id, rec);
    log_.record(loop_.now(), "ApplicationsServiceRequests/" + id, "PENDING", id, sim::Phase::ServiceRequest,
                {{"applicationId", rec.request.application_id}});
    loop_.post([this, id] { query_oss(id); });
    return {201, Json(requests_.at(id).request), "/ApplicationsServiceRequests/" + id};
  }

  // Local Controller: collect VWSAN parameters, then request VNFs.
  void query_oss(const std::string& id) {
    auto& rec = requests_.at(id);
    if (rec.request.state != RequestState::Pending) return;
    log_.record(loop_.now(), "LocalController", "OSS_QUERY", id, sim::Phase::OssQuery);
    loop_.post_after(config_.oss_latency, [this, id] {
      auto& r = requests_.at(id);
      if (r.request.state != RequestState::Pending) return;
      auto vwsan = oss_.query();
      if (!vwsan) {
        log_.record(loop_.now(), "OSS/BSS", "OSS_UNAVAILABLE", id, sim::Phase::OssQuery,
                    {{"retryInMs", to_ms(config_.oss_retry)}});
        loop_.post_after(config_.oss_retry, [this, id] { query_oss(id); });
        return;
      }
      log_.record(loop_.now(), "OSS/BSS", "VWSAN_DESCRIBED", id, sim::Phase::OssQuery, Json(*vwsan));
      request_vnfs(r, *vwsan);
    });
  }

  Json vnf_request_body(const Record& rec, const VwsanDescriptor& vwsan) const {
    return {{"serviceRequestId", rec.request.request_id},
            {"northbound", rec.request.northbound},
            {"vwsan", vwsan},
            {"qos", rec.request.qos}};
  }

  void request_vnfs(Record& rec, const VwsanDescriptor& vwsan) {
    const std::string id = rec.request.request_id;
    transition(rec, RequestState::VnfsRequested, sim::Phase::VnfRequest);
    if (!rec.vnf_request_id.empty()) {
      bus_.send("LocalController", config_.gateway_endpoint,
                {"PUT", "/VNFsRequest/" + rec.vnf_request_id, vnf_request_body(rec, vwsan)}, id,
                sim::Phase::VnfRequest);
      return;
    }
    rec.vnf_post_in_flight = true;
    bus_.send("LocalController", config_.gateway_endpoint, {"POST", "/VNFsRequest", vnf_request_body(rec, vwsan)}, id,
              sim::Phase::VnfRequest, [this, id](const RestResponse& resp) {
                auto& r = requests_.at(id);
                r.vnf_post_in_flight = false;
                if (!resp.ok()) return;
                r.vnf_request_id = resp.body.value("vnfRequestId", "");
                if (r.request.state == RequestState::Cancelled) withdraw(r);
              });
  }

  void withdraw(Record& rec) {
    if (rec.vnf_request_id.empty()) return;
    bus_.send("LocalController", config_.gateway_endpoint, {"DELETE", "/VNFsRequest/" + rec.vnf_request_id, {}},
              rec.request.request_id, sim::Phase::VnfRequest);
    rec.vnf_request_id.clear();
  }

  RestResponse update(const std::string& id, const Json& patch) {
    auto& rec = record(id);
    if (rec.request.state == RequestState::Cancelled) fail(ErrorCode::Conflict, id + " is CANCELLED");
    if (!patch.is_object()) fail(ErrorCode::MalformedRequest, "patch must be an object");
    auto northbound = patch.contains("northbound") ? parse_northbound(patch) : rec.request.northbound;
    auto qos = patch.contains("qos") ? patch.at("qos").get<QosParams>() : rec.request.qos;
    rec.request.northbound = std::move(northbound);
    rec.request.qos = qos;
    log_.record(loop_.now(), "ApplicationsServiceRequests/" + id, "UPDATED", id, sim::Phase::ServiceRequest);
    if (rec.request.state == RequestState::Unavailable) request_vnfs(rec, oss_.descriptor());
    return {200, Json(rec.request), {}};
  }

  RestResponse remove(const std::string& id) {
    auto& rec = record(id);
    if (rec.request.state == RequestState::Cancelled) fail(ErrorCode::NotFound, id + " was already deleted");
    transition(rec, RequestState::Cancelled, sim::Phase::ServiceRequest);
    if (!rec.vnf_post_in_flight) withdraw(rec);
    return {204, {}, {}};
  }

  RestResponse notified(const AvailabilityNotification& n) {
    auto& rec = record(n.service_request_id);
    if (rec.request.state != RequestState::VnfsRequested) {
      fail(ErrorCode::Conflict, n.service_request_id + " is " + std::string(to_string(rec.request.state)));
    }
    transition(rec, n.available ? RequestState::Available : RequestState::Unavailable, sim::Phase::Availability);
    bus_.send("LocalController", app_endpoint(rec.request.application_id),
              {"POST", "/ServiceAvailabilityNotification", Json(n)}, n.service_request_id, sim::Phase::Availability);
    return {200, Json(rec.request), {}};
  }

  sim::EventLoop& loop_;
  sim::EventLog& log_;
  MessageBus& bus_;
  OssBss& oss_;
  ProviderConfig config_;
  Router router_;
  std::map<std::string, Record> requests_;
  std::uint64_t seq_ = 0;
};

}  // namespace vgw::control
