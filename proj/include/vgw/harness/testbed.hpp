#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vgw/control/application.hpp"
#include "vgw/control/gateway.hpp"
#include "vgw/control/provider.hpp"
#include "vgw/harness/scenario.hpp"

namespace vgw::harness {

enum class GatewayMode : std::uint8_t { Virtualized, Baseline };

inline constexpr EnumNames<GatewayMode, 2> kGatewayModeNames{{{
    {GatewayMode::Virtualized, "VIRTUALIZED"},
    {GatewayMode::Baseline, "BASELINE"},
}}};

/// One deployment of a scenario. Virtualized mode signals every application
/// through the three control domains and carries traffic over the chains it
/// gets back. Baseline mode binds the direct gateway at t=0 and never
/// touches MANO.
class Testbed {
 public:
  Testbed(const Scenario& s, GatewayMode mode, std::uint64_t seed, double compression = 0)
      : scenario_(s),
        mode_(mode),
        loop_(compression),
        rng_(seed),
        nfvi_(loop_, log_, store_, rng_, s.nfvi),
        mano_(nfvi_, s.migration),
        bus_(loop_, log_, s.bus_latency),
        oss_(s.vwsan()),
        provider_(loop_, log_, bus_, oss_),
        gateway_(loop_, log_, bus_, store_, mano_),
        pipeline_(nfvi_),
        agent_(loop_, log_, s.links) {
    s.validate();
    if (s.catalog) {
      store_.load_catalog(*s.catalog);
    } else {
      for (const auto& img : store::default_catalog(s.protocol_cost_ms, s.info_cost_ms)) store_.register_image(img);
    }
    for (const auto& r : s.robots) {
      robots_.push_back(std::make_unique<devices::RobotEmulator>(loop_, log_, devices::RobotConfig{r.id, r.command_latency}));
      agent_.add_robot(*robots_.back());
    }
    std::uint64_t k = 0;
    for (const auto& sp : s.sensors) {
      devices::SensorConfig c;
      c.sensor_id = sp.id;
      c.brand = sp.brand;
      c.period = sp.period;
      c.quantities = sp.quantities;
      std::shared_ptr<devices::ValueSource> src;
      if (sp.trace) {
        src = std::make_shared<devices::TraceSource>(devices::TraceSource::load(*sp.trace));
      } else {
        devices::SyntheticSource::Config sc;
        sc.spikes = s.fire;
        src = std::make_shared<devices::SyntheticSource>(sc);
      }
      sensors_.push_back(std::make_unique<devices::SensorEmulator>(loop_, c, src, seed * 7919 + ++k));
    }
    for (const auto& a : s.applications) add_application(a);
  }

  Testbed(const Testbed&) = delete;
  Testbed& operator=(const Testbed&) = delete;

  /// Runs until the horizon, then lets in-flight work settle.
  void run(SimDuration settle = from_ms(10000)) {
    for (auto& s : sensors_) s->start(scenario_.horizon + kEpoch, [this](const devices::Emission& e) { agent_.ingest(e); });
    for (auto& a : infra_) a->submit();
    for (const auto& a : scenario_.applications) {
      if (mode_ == GatewayMode::Baseline) bind_direct(a.id);
    }
    loop_.run_until(kEpoch + scenario_.horizon + settle);
  }

  GatewayMode mode() const { return mode_; }
  const Scenario& scenario() const { return scenario_; }
  sim::EventLoop& loop() { return loop_; }
  const sim::EventLog& log() const { return log_; }
  nfvi::Nfvi& nfvi() { return nfvi_; }
  control::ProviderDomain& provider() { return provider_; }
  control::GatewayDomain& gateway() { return gateway_; }
  devices::SensorActuatorAgent& agent() { return agent_; }
  const store::VnfStore& store() const { return store_; }

  const control::InfrastructureAgent* infrastructure(const std::string& app) const {
    for (const auto& a : infra_) {
      if (a->endpoint() == control::app_endpoint(app)) return a.get();
    }
    return nullptr;
  }

  const devices::WildfireApp* wildfire(const std::string& app) const {
    for (const auto& w : wildfire_) {
      if (w->id() == app) return w.get();
    }
    return nullptr;
  }

  const devices::ForestMonitoringApp* forest(const std::string& app) const {
    for (const auto& f : forest_) {
      if (f->id() == app) return f.get();
    }
    return nullptr;
  }

  const devices::SensorEmulator& sensor(std::size_t i) const { return *sensors_.at(i); }
  std::size_t sensor_count() const { return sensors_.size(); }
  const devices::RobotEmulator& robot(std::size_t i) const { return *robots_.at(i); }

 private:
  void add_application(const AppSpec& a) {
    if (a.kind == AppKind::Wildfire) {
      devices::WildfireConfig c;
      c.app_id = a.id;
      c.robot_id = a.robot;
      c.policy = a.fire;
      wildfire_.push_back(std::make_unique<devices::WildfireApp>(loop_, log_, agent_, c));
      auto* app = wildfire_.back().get();
      agent_.subscribe(a.id, [app](const devices::Uplink& u) { app->consume(u); });
    } else {
      forest_.push_back(std::make_unique<devices::ForestMonitoringApp>(a.id));
      auto* app = forest_.back().get();
      agent_.subscribe(a.id, [app](const devices::Uplink& u) { app->consume(u); });
    }
    if (mode_ == GatewayMode::Baseline) return;
    control::ApplicationConfig cfg;
    cfg.application_id = a.id;
    cfg.northbound = {Scenario::northbound()};
    cfg.qos = a.qos;
    infra_.push_back(std::make_unique<control::InfrastructureAgent>(loop_, log_, bus_, cfg));
    infra_.back()->on_start([this, id = a.id](const control::AvailabilityNotification& n) {
      bind_chains(id, n.chain_ids);
      agent_.set_ref(id, n.service_request_id);
      for (auto& w : wildfire_) {
        if (w->id() == id) w->set_ref(n.service_request_id);
      }
      agent_.start(id);
    });
  }

  void bind_chains(const std::string& app, const std::vector<std::string>& chain_ids) {
    const auto vwsan = scenario_.vwsan();
    std::set<DeviceBrand> bound;
    for (const auto& cid : chain_ids) {
      const auto& ch = nfvi_.chain_info(cid);
      const auto first = store_.find(ch.image_ids.front());
      if (ch.direction == Direction::Uplink) {
        for (auto b : vwsan.device_brands) {
          if (!is_actuator(b) && Scenario::southbound_of(b) == first->input) {
            agent_.bind_uplink(app, b, std::make_unique<devices::ChainPath>(pipeline_, cid));
            bound.insert(b);
          }
        }
      } else {
        for (const auto& r : robots_) agent_.bind_downlink(app, r->id(), std::make_unique<devices::ChainPath>(pipeline_, cid));
        bound.insert(DeviceBrand::LegoNxt);
      }
    }
    // Brands already speaking the northbound interface need no chain.
    for (auto b : vwsan.device_brands) {
      if (bound.contains(b) || Scenario::southbound_of(b) != Scenario::northbound()) continue;
      if (is_actuator(b)) {
        for (const auto& r : robots_) agent_.bind_downlink(app, r->id(), std::make_unique<devices::IdentityPath>());
      } else {
        agent_.bind_uplink(app, b, std::make_unique<devices::IdentityPath>());
      }
    }
  }

  void bind_direct(const std::string& app) {
    for (auto b : scenario_.vwsan().device_brands) {
      const auto dir = is_actuator(b) ? Direction::Downlink : Direction::Uplink;
      const auto chain = store_.resolve_chain(Scenario::southbound_of(b), Scenario::northbound(), dir);
      if (!chain) continue;
      auto path = [&]() -> std::unique_ptr<devices::GatewayPath> {
        if (chain->empty()) return std::make_unique<devices::IdentityPath>();
        return std::make_unique<devices::DirectPath>(*chain);
      };
      if (is_actuator(b)) {
        for (const auto& r : robots_) agent_.bind_downlink(app, r->id(), path());
      } else {
        agent_.bind_uplink(app, b, path());
      }
    }
    agent_.start(app);
  }

  Scenario scenario_;
  GatewayMode mode_;
  sim::EventLoop loop_;
  sim::EventLog log_;
  sim::Rng rng_;
  store::VnfStore store_;
  nfvi::Nfvi nfvi_;
  nfvi::Mano mano_;
  control::MessageBus bus_;
  control::OssBss oss_;
  control::ProviderDomain provider_;
  control::GatewayDomain gateway_;
  dataplane::Pipeline pipeline_;
  devices::SensorActuatorAgent agent_;
  std::vector<std::unique_ptr<devices::RobotEmulator>> robots_;
  std::vector<std::unique_ptr<devices::SensorEmulator>> sensors_;
  std::vector<std::unique_ptr<devices::WildfireApp>> wildfire_;
  std::vector<std::unique_ptr<devices::ForestMonitoringApp>> forest_;
  std::vector<std::unique_ptr<control::InfrastructureAgent>> infra_;
};

}  // namespace vgw::harness
