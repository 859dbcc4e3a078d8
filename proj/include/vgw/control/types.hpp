#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vgw/core/error.hpp"
#include "vgw/core/json.hpp"
#include "vgw/core/types.hpp"

namespace vgw::control {

struct QosParams {
  std::int64_t max_latency_ms = 2000;
  std::int64_t min_throughput_rps = 100;

  bool valid() const { return max_latency_ms > 0 && min_throughput_rps > 0; }
  friend bool operator==(const QosParams&, const QosParams&) = default;
};

struct VwsanDescriptor {
  std::string provider_id;
  std::vector<DeviceBrand> device_brands;
  std::vector<InterfaceDescriptor> southbound;  // parallel to device_brands

  void validate() const {
    if (provider_id.empty()) fail(ErrorCode::MalformedRequest, "vwsan.providerId is empty");
    if (device_brands.size() != southbound.size()) {
      fail(ErrorCode::MalformedRequest, "one southbound descriptor per device brand");
    }
    std::set<DeviceBrand> seen(device_brands.begin(), device_brands.end());
    if (seen.size() != device_brands.size()) fail(ErrorCode::MalformedRequest, "duplicate device brand");
  }
  friend bool operator==(const VwsanDescriptor&, const VwsanDescriptor&) = default;
};

enum class RequestState : std::uint8_t { Pending, VnfsRequested, Available, Unavailable, Cancelled };

inline constexpr EnumNames<RequestState, 5> kRequestStateNames{{{
    {RequestState::Pending, "PENDING"},
    {RequestState::VnfsRequested, "VNFS_REQUESTED"},
    {RequestState::Available, "AVAILABLE"},
    {RequestState::Unavailable, "UNAVAILABLE"},
    {RequestState::Cancelled, "CANCELLED"},
}}};

constexpr std::string_view to_string(RequestState s) { return kRequestStateNames.name(s); }

/// PENDING -> VNFS_REQUESTED -> {AVAILABLE, UNAVAILABLE}; UNAVAILABLE ->
/// VNFS_REQUESTED; anything -> CANCELLED.
constexpr bool can_transition(RequestState from, RequestState to) {
  using S = RequestState;
  if (to == S::Cancelled) return from != S::Cancelled;
  switch (from) {
    case S::Pending: return to == S::VnfsRequested;
    case S::VnfsRequested: return to == S::Available || to == S::Unavailable;
    case S::Unavailable: return to == S::VnfsRequested;
    case S::Available:
    case S::Cancelled: return false;
  }
  return false;
}

struct ServiceRequest {
  std::string request_id;
  std::string application_id;
  std::vector<InterfaceDescriptor> northbound;
  QosParams qos;
  RequestState state = RequestState::Pending;
};

enum class VnfRequestState : std::uint8_t { Received, Provisioning, Ready, Failed };

inline constexpr EnumNames<VnfRequestState, 4> kVnfRequestStateNames{{{
    {VnfRequestState::Received, "RECEIVED"},
    {VnfRequestState::Provisioning, "PROVISIONING"},
    {VnfRequestState::Ready, "READY"},
    {VnfRequestState::Failed, "FAILED"},
}}};

constexpr std::string_view to_string(VnfRequestState s) { return kVnfRequestStateNames.name(s); }

struct VnfRequest {
  std::string vnf_request_id;
  std::string service_request_id;
  std::vector<InterfaceDescriptor> northbound;
  VwsanDescriptor vwsan;
  QosParams qos;
  VnfRequestState state = VnfRequestState::Received;
  std::vector<std::string> chain_ids;
};

struct AvailabilityNotification {
  std::string service_request_id;
  bool available = false;
  std::vector<std::string> chain_ids;
  std::optional<std::int64_t> retry_after_s;

  void validate() const {
    if (service_request_id.empty()) fail(ErrorCode::MalformedRequest, "serviceRequestId is empty");
    if (available && retry_after_s) fail(ErrorCode::MalformedRequest, "retryAfterS only when unavailable");
    if (!available && !retry_after_s) fail(ErrorCode::MalformedRequest, "retryAfterS required when unavailable");
    if (!available && !chain_ids.empty()) fail(ErrorCode::MalformedRequest, "chainIds only when available");
    if (retry_after_s && *retry_after_s < 0) fail(ErrorCode::MalformedRequest, "retryAfterS is negative");
  }
};

// ---- JSON -------------------------------------------------------------------

inline void check(bool ok, const char* msg) {
  if (!ok) fail(ErrorCode::MalformedRequest, msg);
}

inline void to_json(Json& j, RequestState s) { j = std::string(to_string(s)); }
inline void to_json(Json& j, VnfRequestState s) { j = std::string(to_string(s)); }

inline void to_json(Json& j, const QosParams& q) {
  j = {{"maxLatencyMs", q.max_latency_ms}, {"minThroughputRps", q.min_throughput_rps}};
}

inline void from_json(const Json& j, QosParams& q) {
  using namespace json_detail;
  check(j.is_object(), "qos must be an object");
  q.max_latency_ms = require_int(j, "maxLatencyMs");
  q.min_throughput_rps = require_int(j, "minThroughputRps");
  if (!q.valid()) fail(ErrorCode::MalformedRequest, "qos values must be strictly positive");
}

inline void to_json(Json& j, const VwsanDescriptor& v) {
  j = {{"providerId", v.provider_id}, {"deviceBrands", v.device_brands}, {"southbound", v.southbound}};
}

inline void from_json(const Json& j, VwsanDescriptor& v) {
  using namespace json_detail;
  check(j.is_object(), "vwsan must be an object");
  v.provider_id = require_string(j, "providerId");
  v.device_brands = require_array(j, "deviceBrands").get<std::vector<DeviceBrand>>();
  v.southbound = require_array(j, "southbound").get<std::vector<InterfaceDescriptor>>();
  v.validate();
}

inline std::vector<InterfaceDescriptor> parse_northbound(const Json& j) {
  auto list = json_detail::require_array(j, "northbound").get<std::vector<InterfaceDescriptor>>();
  if (list.empty()) fail(ErrorCode::MalformedRequest, "northbound must not be empty");
  return list;
}

inline void to_json(Json& j, const ServiceRequest& r) {
  j = {{"requestId", r.request_id},
       {"applicationId", r.application_id},
       {"northbound", r.northbound},
       {"qos", r.qos},
       {"state", r.state}};
}

inline void to_json(Json& j, const VnfRequest& r) {
  j = {{"vnfRequestId", r.vnf_request_id},
       {"serviceRequestId", r.service_request_id},
       {"northbound", r.northbound},
       {"vwsan", r.vwsan},
       {"qos", r.qos},
       {"state", r.state},
       {"chainIds", r.chain_ids}};
}

inline void to_json(Json& j, const AvailabilityNotification& n) {
  j = {{"serviceRequestId", n.service_request_id}, {"available", n.available}};
  if (n.available) j["chainIds"] = n.chain_ids;
  if (n.retry_after_s) j["retryAfterS"] = *n.retry_after_s;
}

inline void from_json(const Json& j, AvailabilityNotification& n) {
  using namespace json_detail;
  check(j.is_object(), "notification must be an object");
  n.service_request_id = require_string(j, "serviceRequestId");
  check(j.contains("available") && j.at("available").is_boolean(), "available must be a boolean");
  n.available = j.at("available").get<bool>();
  if (j.contains("chainIds")) {
    for (const auto& c : require_array(j, "chainIds")) {
      check(c.is_string(), "chainIds must be strings");
      n.chain_ids.push_back(c.get<std::string>());
    }
    check(n.available, "chainIds only when available");
  }
  if (j.contains("retryAfterS")) n.retry_after_s = require_int(j, "retryAfterS");
  n.validate();
}

}  // namespace vgw::control
