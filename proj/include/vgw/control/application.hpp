#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vgw/control/bus.hpp"
#include "vgw/control/provider.hpp"
#include "vgw/control/types.hpp"

namespace vgw::control {

struct ApplicationConfig {
  std::string application_id;
  std::vector<InterfaceDescriptor> northbound;
  QosParams qos;
  std::string provider_endpoint = "provider";
  int max_retries = 3;  // negative notifications tolerated before giving up
};

/// Application-side controller. Submits the service request, receives the
/// forwarded availability notification and either starts the service or
/// retries after the advertised interval, cancelling once retries run out.
class InfrastructureAgent {
 public:
  using StartFn = std::function<void(const AvailabilityNotification&)>;

  enum class Status : std::uint8_t { Idle, Waiting, Started, Abandoned, Cancelled };

  InfrastructureAgent(sim::EventLoop& loop, sim::EventLog& log, MessageBus& bus, ApplicationConfig config)
      : loop_(loop), log_(log), bus_(bus), config_(std::move(config)), endpoint_(app_endpoint(config_.application_id)) {
    router_.add("POST", "/ServiceAvailabilityNotification", [this](const RestRequest& r, const Router::Params&) {
      return notified(r.body.get<AvailabilityNotification>());
    });
    bus_.attach(endpoint_, router_);
  }

  ~InfrastructureAgent() { bus_.detach(endpoint_); }

  InfrastructureAgent(const InfrastructureAgent&) = delete;
  InfrastructureAgent& operator=(const InfrastructureAgent&) = delete;

  /// Called once, when the service becomes available.
  void on_start(StartFn fn) { on_start_ = std::move(fn); }

  void submit() {
    status_ = Status::Waiting;
    const Json body = {{"applicationId", config_.application_id},
                       {"northbound", config_.northbound},
                       {"qos", config_.qos}};
    bus_.send(endpoint_, config_.provider_endpoint, {"POST", "/ApplicationsServiceRequests", body},
              config_.application_id, sim::Phase::ServiceRequest, [this](const RestResponse& resp) {
                if (resp.ok()) request_id_ = resp.body.at("requestId").get<std::string>();
              });
  }

  void cancel() {
    if (!request_id_ || status_ == Status::Cancelled) return;
    status_ = Status::Cancelled;
    bus_.send(endpoint_, config_.provider_endpoint, {"DELETE", "/ApplicationsServiceRequests/" + *request_id_, {}},
              *request_id_, sim::Phase::ServiceRequest);
  }

  Status status() const { return status_; }
  const std::optional<std::string>& request_id() const { return request_id_; }
  const std::vector<std::string>& chain_ids() const { return chain_ids_; }
  int retries() const { return retries_; }
  std::optional<SimTime> started_at() const { return started_at_; }
  const std::string& endpoint() const { return endpoint_; }

 private:
  RestResponse notified(const AvailabilityNotification& n) {
    request_id_ = n.service_request_id;
    if (status_ != Status::Waiting) {
      fail(ErrorCode::Conflict, "agent is not waiting for " + n.service_request_id);
    }
    if (n.available) {
      status_ = Status::Started;
      chain_ids_ = n.chain_ids;
      started_at_ = loop_.now();
      log_.record(loop_.now(), "InfrastructureAgent", "SERVICE_START", n.service_request_id, sim::Phase::ServiceStart,
                  {{"chainIds", n.chain_ids}});
      if (on_start_) on_start_(n);
      return {200, {}, {}};
    }
    if (retries_ >= config_.max_retries) {
      log_.record(loop_.now(), "InfrastructureAgent", "SERVICE_ABANDONED", n.service_request_id);
      status_ = Status::Abandoned;
      bus_.send(endpoint_, config_.provider_endpoint,
                {"DELETE", "/ApplicationsServiceRequests/" + n.service_request_id, {}}, n.service_request_id,
                sim::Phase::ServiceRequest);
      return {200, {}, {}};
    }
    ++retries_;
    const auto wait = std::chrono::seconds(n.retry_after_s.value_or(0));
    log_.record(loop_.now(), "InfrastructureAgent", "RETRY_SCHEDULED", n.service_request_id, sim::Phase::None,
                {{"retryInMs", to_ms(wait)}, {"attempt", retries_}});
    loop_.post_after(wait, [this, id = n.service_request_id] {
      if (status_ != Status::Waiting) return;
      bus_.send(endpoint_, config_.provider_endpoint, {"PUT", "/ApplicationsServiceRequests/" + id, Json::object()},
                id, sim::Phase::ServiceRequest);
    });
    return {200, {}, {}};
  }

  sim::EventLoop& loop_;
  sim::EventLog& log_;
  MessageBus& bus_;
  ApplicationConfig config_;
  std::string endpoint_;
  Router router_;
  StartFn on_start_;
  Status status_ = Status::Idle;
  std::optional<std::string> request_id_;
  std::vector<std::string> chain_ids_;
  std::optional<SimTime> started_at_;
  int retries_ = 0;
};

}  // namespace vgw::control
