#pragma once

#include <map>
#include <string>
#include <vector>

#include "vgw/devices/agent.hpp"
#include "vgw/devices/fire.hpp"

namespace vgw::devices {

/// Decodes the SenML body of an uplink delivery; nullopt when the message
/// is not (yet) SenML.
inline std::optional<dataplane::SenmlPack> senml_of(const Uplink& up) {
  const auto* h = std::get_if<dataplane::HttpMessage>(&up.message);
  if (!h || h->content_type() != dataplane::kSenmlJson) return std::nullopt;
  return dataplane::decode_senml(h->body);
}

/// Keeps the latest value of every (sensor, quantity) it hears about.
class ForestMonitoringApp {
 public:
  explicit ForestMonitoringApp(std::string id = "forest") : id_(std::move(id)) {}

  const std::string& id() const { return id_; }

  void consume(const Uplink& up) {
    ++received_[up.sensor_id];
    auto pack = senml_of(up);
    if (!pack) {
      ++undecoded_;
      return;
    }
    for (const auto& e : pack->entries) {
      if (const auto* d = std::get_if<dataplane::Decimal>(&e.value)) latest_[pack->base_name + e.name] = *d;
    }
  }

  std::uint64_t received(const std::string& sensor) const {
    auto it = received_.find(sensor);
    return it == received_.end() ? 0 : it->second;
  }

  const std::map<std::string, dataplane::Decimal>& latest() const { return latest_; }
  std::uint64_t undecoded() const { return undecoded_; }

 private:
  std::string id_;
  std::map<std::string, std::uint64_t> received_;
  std::map<std::string, dataplane::Decimal> latest_;
  std::uint64_t undecoded_ = 0;
};

struct WildfireConfig {
  std::string app_id = "wildfire";
  std::string robot_id = "nxt-1";
  FirePolicy policy;
  SimDuration retry = from_ms(500);  // resend interval for dropped actuations
};

/// Watches temperatures, dispatches the robot when a fire starts and stops
/// it once every sensor is back under the threshold. Logs FIRE_DETECTED with
/// the emission instant of the reading that completed the detection.
class WildfireApp {
 public:
  WildfireApp(sim::EventLoop& loop, sim::EventLog& log, SensorActuatorAgent& agent, WildfireConfig config = {})
      : loop_(loop), log_(log), agent_(agent), config_(std::move(config)) {
    config_.policy.validate();
  }

  const std::string& id() const { return config_.app_id; }
  void set_ref(std::string ref) { ref_ = std::move(ref); }
  int episodes() const { return episode_; }
  bool fire_active() const { return active_; }

  void consume(const Uplink& up) {
    auto pack = senml_of(up);
    if (!pack) return;
    auto& detector = detectors_.try_emplace(up.sensor_id, config_.policy).first->second;
    for (const auto& e : pack->entries) {
      if (e.name != senml_name(Quantity::Temperature)) continue;
      const auto* d = std::get_if<dataplane::Decimal>(&e.value);
      if (!d) continue;
      const auto signal = detector.feed(d->to_double());
      if (signal == FireSignal::Detected && !active_) {
        active_ = true;
        ++episode_;
        log_.record(loop_.now(), config_.app_id, "FIRE_DETECTED", ref_, sim::Phase::None,
                    {{"episode", episode_}, {"sensor", up.sensor_id}, {"emittedUs", to_us(up.emitted)}});
        send("grab");
        send("deploy");
      } else if (signal == FireSignal::Cleared && active_ && !any_burning()) {
        active_ = false;
        log_.record(loop_.now(), config_.app_id, "FIRE_CLEARED", ref_, sim::Phase::None, {{"episode", episode_}});
        send("stop");
      }
    }
  }

  static dataplane::HttpMessage actuation(const std::string& robot, const std::string& command) {
    dataplane::SenmlPack p;
    p.base_name = robot + "/";
    p.actuation = dataplane::Actuation{command, "extinguisher"};
    dataplane::HttpMessage h;
    h.kind = dataplane::HttpKind::Request;
    h.method = dataplane::HttpMethod::Post;
    h.uri = "/actuators/" + robot;
    h.headers["Content-Type"] = dataplane::kSenmlJson;
    h.body = dataplane::encode_senml(p);
    return h;
  }

 private:
  bool any_burning() const {
    for (const auto& [s, d] : detectors_) {
      if (d.burning()) return true;
    }
    return false;
  }

  void send(const std::string& command) {
    const int episode = episode_;
    agent_.actuate(config_.app_id, config_.robot_id, actuation(config_.robot_id, command),
                   [this, command, episode](bool ok) {
                     if (ok || episode != episode_) return;
                     // Retry only while the reason for the command still holds.
                     if ((command == "stop") == active_) return;
                     loop_.post_after(config_.retry, [this, command, episode] {
                       if (episode == episode_ && (command == "stop") != active_) send(command);
                     });
                   });
  }

  sim::EventLoop& loop_;
  sim::EventLog& log_;
  SensorActuatorAgent& agent_;
  WildfireConfig config_;
  std::string ref_;
  std::map<std::string, FireDetector> detectors_;
  bool active_ = false;
  int episode_ = 0;
};

}  // namespace vgw::devices
