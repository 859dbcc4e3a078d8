#pragma once

#include <httplib.h>

#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "vgw/control/rest.hpp"
#include "vgw/sim/event_loop.hpp"

namespace vgw::control {

/// Serves routers over HTTP/1.1. Each request is dispatched under one lock,
/// then the virtual clock advances so asynchronous signaling makes progress
/// between calls: to quiescence when `settle` is empty, else by `settle`.
class HttpFrontend {
 public:
  HttpFrontend(sim::EventLoop& loop, std::optional<SimDuration> settle = std::nullopt)
      : loop_(loop), settle_(settle) {
    const auto handler = [this](const httplib::Request& req, httplib::Response& res) { handle(req, res); };
    const std::string any = R"(.*)";
    server_.Get(any, handler);
    server_.Post(any, handler);
    server_.Put(any, handler);
    server_.Delete(any, handler);
    server_.Patch(any, handler);
  }

  ~HttpFrontend() { stop(); }

  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  /// Paths starting with `prefix` go to `router`; the first match wins.
  void mount(std::string prefix, const Router& router) { mounts_.emplace_back(std::move(prefix), &router); }

  /// Binds to an ephemeral port on the loopback interface and serves on a
  /// background thread. Returns the port.
  int start(const std::string& host = "127.0.0.1") {
    port_ = server_.bind_to_any_port(host);
    if (port_ <= 0) fail(ErrorCode::IoError, "cannot bind " + host);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return port_;
  }

  void stop() {
    if (!thread_.joinable()) return;
    server_.stop();
    thread_.join();
  }

  int port() const { return port_; }
  std::mutex& mutex() { return mutex_; }

 private:
  void handle(const httplib::Request& req, httplib::Response& res) {
    RestResponse out;
    std::lock_guard lock(mutex_);
    try {
      Json body = req.body.empty() ? Json() : Json::parse(req.body);
      out = dispatch({req.method, req.path, std::move(body)});
    } catch (const Json::parse_error& e) {
      out = error_response(Error(ErrorCode::MalformedRequest, e.what()));
    }
    if (settle_) {
      loop_.run_for(*settle_);
    } else {
      loop_.run();
    }
    res.status = out.status;
    if (!out.location.empty()) res.set_header("Location", out.location);
    if (!out.body.is_null()) res.set_content(out.body.dump(), "application/json");
  }

  RestResponse dispatch(const RestRequest& req) const {
    for (const auto& [prefix, router] : mounts_) {
      if (req.path.rfind(prefix, 0) == 0) return router->dispatch(req);
    }
    return {404, {{"error", "NOT_FOUND"}, {"message", "no resource " + req.path}}, {}};
  }

  sim::EventLoop& loop_;
  std::optional<SimDuration> settle_;
  httplib::Server server_;
  std::vector<std::pair<std::string, const Router*>> mounts_;
  std::mutex mutex_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace vgw::control
