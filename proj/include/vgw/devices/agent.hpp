#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>

#include "vgw/dataplane/pipeline.hpp"
#include "vgw/devices/robot.hpp"
#include "vgw/devices/sensor.hpp"

namespace vgw::devices {

/// A way through the gateway: a forwarding chain, the direct bypass, or
/// nothing at all when both sides already match.
class GatewayPath {
 public:
  virtual ~GatewayPath() = default;
  /// Throws CHAIN_DOWN when the path cannot carry traffic right now.
  virtual dataplane::Traversal carry(const dataplane::Message& in, SimTime sent) = 0;
};

class ChainPath : public GatewayPath {
 public:
  ChainPath(dataplane::Pipeline& pipeline, nfvi::ChainId chain, dataplane::ReplicaSelector select = {})
      : pipeline_(pipeline), chain_(std::move(chain)), select_(std::move(select)) {}

  dataplane::Traversal carry(const dataplane::Message& in, SimTime sent) override {
    return pipeline_.process(chain_, in, sent, select_);
  }

  const nfvi::ChainId& chain() const { return chain_; }

 private:
  dataplane::Pipeline& pipeline_;
  nfvi::ChainId chain_;
  dataplane::ReplicaSelector select_;
};

class DirectPath : public GatewayPath {
 public:
  explicit DirectPath(std::vector<store::VnfImage> images) : gateway_(std::move(images)) {}

  dataplane::Traversal carry(const dataplane::Message& in, SimTime sent) override {
    return gateway_.process(in, sent);
  }

 private:
  dataplane::DirectGateway gateway_;
};

class IdentityPath : public GatewayPath {
 public:
  dataplane::Traversal carry(const dataplane::Message& in, SimTime sent) override {
    return dataplane::Pipeline::identity(in, sent);
  }
};

struct LinkLatency {
  SimDuration coap = from_ms(10);  // sensor to gateway
  SimDuration http = from_ms(5);   // gateway to application, either way
  SimDuration lcp = from_ms(10);   // gateway to robot
};

/// A sensor message as it reaches an application.
struct Uplink {
  std::string sensor_id;
  std::uint64_t seq = 0;
  SimTime emitted{};
  SimTime received{};
  dataplane::Message message;
};

struct DeliveryCounts {
  std::uint64_t received = 0;
  std::uint64_t dropped = 0;
  std::uint64_t buffered = 0;  // waiting for service start
};

/// VWSAN-side agent. Fans each sensor emission out to every subscribed
/// application through that application's uplink path, buffers emissions
/// (drop-tail) until the application's service starts, and carries
/// actuation requests down to robots.
class SensorActuatorAgent {
 public:
  using Consumer = std::function<void(const Uplink&)>;
  using ResultFn = std::function<void(bool delivered)>;

  SensorActuatorAgent(sim::EventLoop& loop, sim::EventLog& log, LinkLatency links = {},
                      std::size_t buffer_capacity = 8)
      : loop_(loop), log_(log), links_(links), capacity_(buffer_capacity) {}

  const LinkLatency& links() const { return links_; }

  void add_robot(RobotEmulator& robot) { robots_[robot.id()] = &robot; }

  /// Sink for sensor emissions; the message reaches the gateway one CoAP
  /// link later.
  void ingest(const Emission& e) {
    loop_.post_at(e.emitted + links_.coap, [this, e] {
      for (auto& [app, sub] : subs_) {
        if (!sub.sensors.empty() && !sub.sensors.contains(e.sensor_id)) continue;
        if (!sub.started) {
          if (sub.buffer.size() < capacity_) {
            sub.buffer.push_back(e);
            ++sub.counts[e.sensor_id].buffered;
          } else {
            drop(app, sub, e.sensor_id, "BUFFER_FULL");
          }
          continue;
        }
        forward(app, sub, e);
      }
    });
  }

  /// Registers an application. An empty sensor set means every sensor.
  void subscribe(const std::string& app, Consumer consumer, std::set<std::string> sensors = {},
                 std::string ref = {}) {
    auto& sub = subs_[app];
    sub.consumer = std::move(consumer);
    sub.sensors = std::move(sensors);
    sub.ref = std::move(ref);
  }

  void set_ref(const std::string& app, std::string ref) { subs_.at(app).ref = std::move(ref); }

  void bind_uplink(const std::string& app, DeviceBrand brand, std::unique_ptr<GatewayPath> path) {
    subs_.at(app).uplinks[brand] = std::move(path);
  }

  void bind_downlink(const std::string& app, const std::string& robot, std::unique_ptr<GatewayPath> path) {
    subs_.at(app).downlinks[robot] = std::move(path);
  }

  /// Service start for `app`: flushes the buffered emissions in order.
  void start(const std::string& app) {
    auto& sub = subs_.at(app);
    if (sub.started) return;
    sub.started = true;
    log_.record(loop_.now(), "SensorActuatorAgent", "QUERYING_SENSORS", sub.ref, sim::Phase::ServiceStart,
                {{"application", app}, {"buffered", sub.buffer.size()}});
    while (!sub.buffer.empty()) {
      auto e = std::move(sub.buffer.front());
      sub.buffer.pop_front();
      --sub.counts[e.sensor_id].buffered;
      forward(app, sub, e);
    }
  }

  bool started(const std::string& app) const { return subs_.at(app).started; }

  /// Carries an actuation request from `app` to `robot`. The request reaches
  /// the gateway one HTTP link later; `done` learns whether it got through.
  void actuate(const std::string& app, const std::string& robot, const dataplane::HttpMessage& request,
               ResultFn done = {}) {
    loop_.post_after(links_.http, [this, app, robot, request, done] {
      auto& sub = subs_.at(app);
      auto rit = robots_.find(robot);
      auto pit = sub.downlinks.find(robot);
      if (rit == robots_.end() || pit == sub.downlinks.end()) {
        return report(done, false);
      }
      dataplane::Traversal t;
      try {
        t = pit->second->carry(request, loop_.now());
      } catch (const Error& e) {
        log_.record(loop_.now(), "SensorActuatorAgent", "ACTUATION_DROPPED", sub.ref, sim::Phase::None,
                    {{"application", app}, {"robot", robot}, {"error", std::string(to_string(e.code()))}});
        ++actuation_drops_;
        return report(done, false);
      }
      const auto* frame = std::get_if<dataplane::LcpFrame>(&t.out);
      if (!frame) return report(done, false);
      RobotEmulator* target = rit->second;
      loop_.post_at(t.delivered + links_.lcp, [target, bytes = frame->bytes] { target->receive(bytes); });
      report(done, true);
    });
  }

  DeliveryCounts counts(const std::string& app, const std::string& sensor) const {
    const auto& c = subs_.at(app).counts;
    auto it = c.find(sensor);
    return it == c.end() ? DeliveryCounts{} : it->second;
  }

  std::uint64_t actuation_drops() const { return actuation_drops_; }

 private:
  struct Subscription {
    Consumer consumer;
    std::set<std::string> sensors;
    std::string ref;
    bool started = false;
    std::deque<Emission> buffer;
    std::map<DeviceBrand, std::unique_ptr<GatewayPath>> uplinks;
    std::map<std::string, std::unique_ptr<GatewayPath>> downlinks;
    std::map<std::string, DeliveryCounts> counts;
  };

  void report(const ResultFn& done, bool ok) {
    if (done) done(ok);
  }

  void drop(const std::string& app, Subscription& sub, const std::string& sensor, const char* why) {
    ++sub.counts[sensor].dropped;
    log_.record(loop_.now(), "SensorActuatorAgent", "UPLINK_DROPPED", sub.ref, sim::Phase::None,
                {{"application", app}, {"sensor", sensor}, {"reason", why}});
  }

  void forward(const std::string& app, Subscription& sub, const Emission& e) {
    auto it = sub.uplinks.find(e.brand);
    if (it == sub.uplinks.end()) return drop(app, sub, e.sensor_id, "NO_PATH");
    dataplane::Traversal t;
    try {
      t = it->second->carry(e.message, loop_.now());
    } catch (const Error& err) {
      return drop(app, sub, e.sensor_id, err.code() == ErrorCode::ChainDown ? "CHAIN_DOWN" : "CONVERSION_FAILED");
    }
    ++sub.counts[e.sensor_id].received;
    Uplink up{e.sensor_id, e.seq, e.emitted, t.delivered + links_.http, std::move(t.out)};
    loop_.post_at(up.received, [consumer = sub.consumer, up = std::move(up)] {
      if (consumer) consumer(up);
    });
  }

  sim::EventLoop& loop_;
  sim::EventLog& log_;
  LinkLatency links_;
  std::size_t capacity_;
  std::map<std::string, Subscription> subs_;
  std::map<std::string, RobotEmulator*> robots_;
  std::uint64_t actuation_drops_ = 0;
};

}  // namespace vgw::devices
