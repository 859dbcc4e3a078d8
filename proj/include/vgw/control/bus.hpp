#pragma once

#include <functional>
#include <map>
#include <string>

#include "vgw/control/rest.hpp"
#include "vgw/sim/event_log.hpp"
#include "vgw/sim/event_loop.hpp"

namespace vgw::control {

/// Asynchronous REST messaging between domains over the virtual clock.
/// A request reaches its endpoint one latency after sending; the response
/// returns one latency after that.
class MessageBus {
 public:
  using ResponseFn = std::function<void(const RestResponse&)>;

  MessageBus(sim::EventLoop& loop, sim::EventLog& log, SimDuration latency = from_ms(5))
      : loop_(loop), log_(log), latency_(latency) {}

  void attach(const std::string& endpoint, const Router& router) { endpoints_[endpoint] = &router; }
  void detach(const std::string& endpoint) { endpoints_.erase(endpoint); }

  SimDuration latency() const { return latency_; }

  void send(const std::string& from, const std::string& to, RestRequest req, const std::string& ref,
            sim::Phase phase, ResponseFn on_response = {}) {
    loop_.post_after(latency_, [this, from, to, req = std::move(req), ref, phase, on_response] {
      log_.record(loop_.now(), from + "->" + to, req.verb + " " + req.path, ref, phase, req.body);
      auto it = endpoints_.find(to);
      RestResponse resp = it == endpoints_.end()
                              ? RestResponse{503, {{"error", "UNREACHABLE"}, {"message", to}}, {}}
                              : it->second->dispatch(req);
      loop_.post_after(latency_, [this, from, to, req, ref, resp, on_response] {
        log_.record(loop_.now(), to + "->" + from, std::to_string(resp.status) + " " + req.verb + " " + req.path,
                    ref);
        if (on_response) on_response(resp);
      });
    });
  }

 private:
  sim::EventLoop& loop_;
  sim::EventLog& log_;
  SimDuration latency_;
  std::map<std::string, const Router*> endpoints_;
};

}  // namespace vgw::control
