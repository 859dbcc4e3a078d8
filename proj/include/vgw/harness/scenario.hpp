#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "vgw/control/types.hpp"
#include "vgw/devices/apps.hpp"
#include "vgw/harness/load.hpp"
#include "vgw/nfvi/mano.hpp"

namespace vgw::harness {

struct SensorSpec {
  std::string id;
  DeviceBrand brand = DeviceBrand::Sunspot;
  SimDuration period = from_ms(100);
  std::vector<Quantity> quantities{Quantity::Temperature};
  std::optional<std::string> trace;  // CSV path; synthetic values otherwise
};

struct RobotSpec {
  std::string id = "nxt-1";
  SimDuration command_latency = from_ms(200);
};

enum class AppKind : std::uint8_t { Wildfire, ForestMonitoring };

inline constexpr EnumNames<AppKind, 2> kAppKindNames{{{
    {AppKind::Wildfire, "WILDFIRE"},
    {AppKind::ForestMonitoring, "FOREST_MONITORING"},
}}};

struct AppSpec {
  std::string id;
  AppKind kind = AppKind::Wildfire;
  std::string robot = "nxt-1";
  devices::FirePolicy fire;
  control::QosParams qos;
};

struct ProvisioningProfile {
  std::string name;
  sim::UniformDelay boot;
  sim::UniformDelay transfer;
  std::optional<std::pair<double, double>> accept_ms;  // [min, max] both must lie in
};

struct ProvisioningExperiment {
  int runs = 20;
  std::vector<ProvisioningProfile> profiles;
};

struct DowntimeExperiment {
  SimDuration probe_period = from_ms(1000);
  std::vector<std::vector<SimDuration>> rows;  // per chain position
  double tolerance_periods = 1.0;
};

struct E2eExperiment {
  int runs = 5;
  int episodes_per_sample = 10;
  double max_steady_diff_ms = 5;
  double first_episode_rel_tol = 0.01;
};

struct ScalingExperiment {
  RampConfig ramp;
  double max_scaling_slope_ms = 10;
  double min_noscaling_slope_ms = 300;
  double min_slope_ratio = 50;
  double slope_floor_ms = 1;  // denominator floor for the ratio
};

/// Everything a run needs; fully determined by its content plus the seed.
struct Scenario {
  std::string name = "testbed";
  std::uint64_t seed = 1;
  double protocol_cost_ms = 1;
  double info_cost_ms = 1;
  std::optional<Json> catalog;  // explicit images, replacing the defaults
  nfvi::NfviConfig nfvi;
  nfvi::MigrationSettings migration;
  std::string vwsan_id = "vwsan-1";
  std::vector<SensorSpec> sensors;
  std::vector<RobotSpec> robots;
  std::vector<AppSpec> applications;
  std::vector<devices::FireSpike> fire;
  devices::LinkLatency links;
  SimDuration bus_latency = from_ms(5);
  SimDuration horizon = from_ms(120000);
  std::optional<ProvisioningExperiment> provisioning;
  std::optional<DowntimeExperiment> downtime;
  std::optional<E2eExperiment> e2e;
  std::optional<ScalingExperiment> scaling;

  void validate() const {
    if (nfvi.vm_quota.empty()) fail(ErrorCode::MalformedRequest, "no VM quotas");
    if (!nfvi.boot_delay.valid()) fail(ErrorCode::MalformedRequest, "invalid boot delay");
    if (!migration.transfer.valid()) fail(ErrorCode::MalformedRequest, "invalid transfer delay");
    std::set<std::string> ids;
    for (const auto& s : sensors) {
      if (s.id.empty() || !ids.insert(s.id).second) fail(ErrorCode::MalformedRequest, "sensor ids must be unique");
      if (s.period <= SimDuration::zero()) fail(ErrorCode::MalformedRequest, "sensor period must be positive");
      if (s.quantities.empty()) fail(ErrorCode::MalformedRequest, "sensor " + s.id + " measures nothing");
      if (is_actuator(s.brand)) fail(ErrorCode::MalformedRequest, "sensor " + s.id + " has an actuator brand");
    }
    std::set<std::string> robot_ids;
    for (const auto& r : robots) {
      if (r.id.empty() || !robot_ids.insert(r.id).second) fail(ErrorCode::MalformedRequest, "robot ids must be unique");
    }
    std::set<std::string> app_ids;
    for (const auto& a : applications) {
      if (a.id.empty() || !app_ids.insert(a.id).second) fail(ErrorCode::MalformedRequest, "application ids must be unique");
      if (a.kind == AppKind::Wildfire && !robot_ids.contains(a.robot)) {
        fail(ErrorCode::MalformedRequest, "application " + a.id + " names unknown robot " + a.robot);
      }
      a.fire.validate();
      if (!a.qos.valid()) fail(ErrorCode::MalformedRequest, "application " + a.id + " has invalid qos");
    }
    if (horizon <= SimDuration::zero()) fail(ErrorCode::MalformedRequest, "horizonMs must be positive");
    if (provisioning && provisioning->runs < 1) fail(ErrorCode::MalformedRequest, "provisioning.runs < 1");
    if (downtime) {
      if (downtime->probe_period <= SimDuration::zero()) fail(ErrorCode::MalformedRequest, "probe period");
      for (const auto& row : downtime->rows) {
        if (row.size() != 2) fail(ErrorCode::MalformedRequest, "downtime rows hold two chain positions");
      }
    }
    if (e2e && (e2e->runs < 1 || e2e->episodes_per_sample < 1)) fail(ErrorCode::MalformedRequest, "e2e sizes");
    if (scaling) {
      scaling->ramp.policy.validate();
      scaling->ramp.schedule.validate();
    }
  }

  /// The device-brand view the OSS/BSS serves: one southbound interface per
  /// brand present.
  control::VwsanDescriptor vwsan() const {
    control::VwsanDescriptor d;
    d.provider_id = vwsan_id;
    auto add = [&](DeviceBrand b) {
      if (std::find(d.device_brands.begin(), d.device_brands.end(), b) != d.device_brands.end()) return;
      d.device_brands.push_back(b);
      d.southbound.push_back(southbound_of(b));
    };
    for (const auto& s : sensors) add(s.brand);
    if (!robots.empty()) add(DeviceBrand::LegoNxt);
    return d;
  }

  static InterfaceDescriptor southbound_of(DeviceBrand b) {
    switch (b) {
      case DeviceBrand::Sunspot: return {Protocol::Coap, InfoModel::RawSunspot};
      case DeviceBrand::Advanticsys: return {Protocol::Coap, InfoModel::RawAdvanticsys};
      case DeviceBrand::LegoNxt: return {Protocol::LcpTransport, InfoModel::LcpCmd};
    }
    fail(ErrorCode::MalformedRequest, "unknown brand");
  }

  static InterfaceDescriptor northbound() { return {Protocol::Http, InfoModel::SenmlJson}; }
};

// ---- JSON ------------------------------------------------------------------

namespace detail {

inline const Json* opt(const Json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

inline SimDuration ms_at(const Json& j, const char* key, SimDuration fallback) {
  const Json* v = opt(j, key);
  return v ? from_ms(v->get<double>()) : fallback;
}

inline sim::UniformDelay range_at(const Json& j, const char* key, sim::UniformDelay fallback) {
  const Json* v = opt(j, key);
  if (!v) return fallback;
  if (v->is_number()) return sim::UniformDelay::fixed(from_ms(v->get<double>()));
  if (!v->is_array() || v->size() != 2) fail(ErrorCode::MalformedRequest, std::string(key) + " must be [lo, hi]");
  return sim::UniformDelay::ms((*v)[0].get<double>(), (*v)[1].get<double>());
}

template <typename E, std::size_t N>
E enum_at(const Json& j, const char* key, const EnumNames<E, N>& names, E fallback) {
  const Json* v = opt(j, key);
  return v ? names.parse_or_throw(v->get<std::string>(), key) : fallback;
}

inline Json range_json(const sim::UniformDelay& d) { return Json::array({to_ms(d.min), to_ms(d.max)}); }

}  // namespace detail

inline Scenario scenario_from_json(const Json& j) {
  using namespace detail;
  if (!j.is_object()) fail(ErrorCode::MalformedRequest, "scenario must be a JSON object");
  Scenario s;
  try {
    if (auto* v = opt(j, "name")) s.name = v->get<std::string>();
    if (auto* v = opt(j, "seed")) s.seed = v->get<std::uint64_t>();
    if (auto* v = opt(j, "horizonMs")) s.horizon = from_ms(v->get<double>());
    if (auto* c = opt(j, "catalog")) {
      if (c->is_array() || c->contains("images")) {
        s.catalog = *c;
      } else {
        if (auto* v = opt(*c, "protocolCostMs")) s.protocol_cost_ms = v->get<double>();
        if (auto* v = opt(*c, "infoCostMs")) s.info_cost_ms = v->get<double>();
      }
    }
    if (auto* n = opt(j, "nfvi")) {
      s.nfvi.boot_delay = range_at(*n, "bootDelayMs", s.nfvi.boot_delay);
      s.nfvi.chain_delay = ms_at(*n, "chainDelayMs", s.nfvi.chain_delay);
      if (auto* v = opt(*n, "parallelInstantiation")) s.nfvi.parallel_instantiation = v->get<bool>();
      if (auto* q = opt(*n, "vmQuota")) {
        for (const auto& [k, v] : q->items()) s.nfvi.vm_quota[kDomainNames.parse_or_throw(k, "vmQuota")] = v.get<int>();
      }
    }
    if (auto* m = opt(j, "migration")) {
      s.migration.approach = enum_at(*m, "approach", nfvi::kApproachNames, s.migration.approach);
      s.migration.transfer = range_at(*m, "transferMs", s.migration.transfer);
      s.migration.protocol_converter_downtime =
          range_at(*m, "protocolConverterDowntimeMs", s.migration.protocol_converter_downtime);
      s.migration.info_model_converter_downtime =
          range_at(*m, "infoModelConverterDowntimeMs", s.migration.info_model_converter_downtime);
      if (auto* d = opt(*m, "downtimeMs")) {
        std::vector<SimDuration> list;
        for (const auto& x : *d) list.push_back(from_ms(x.get<double>()));
        s.migration.downtime = list;
      }
    }
    if (auto* v = opt(j, "vwsan")) {
      if (auto* id = opt(*v, "providerId")) s.vwsan_id = id->get<std::string>();
      if (auto* list = opt(*v, "sensors")) {
        for (const auto& e : *list) {
          SensorSpec sp;
          sp.id = e.at("id").get<std::string>();
          sp.brand = enum_at(e, "brand", kBrandNames, sp.brand);
          sp.period = ms_at(e, "periodMs", sp.period);
          if (auto* q = opt(e, "quantities")) {
            sp.quantities.clear();
            for (const auto& x : *q) sp.quantities.push_back(kQuantityNames.parse_or_throw(x.get<std::string>(), "quantity"));
          }
          if (auto* t = opt(e, "trace")) sp.trace = t->get<std::string>();
          s.sensors.push_back(std::move(sp));
        }
      }
      if (auto* list = opt(*v, "robots")) {
        for (const auto& e : *list) {
          RobotSpec r;
          r.id = e.at("id").get<std::string>();
          r.command_latency = ms_at(e, "commandLatencyMs", r.command_latency);
          s.robots.push_back(std::move(r));
        }
      }
    }
    if (auto* list = opt(j, "applications")) {
      for (const auto& e : *list) {
        AppSpec a;
        a.id = e.at("id").get<std::string>();
        a.kind = enum_at(e, "kind", kAppKindNames, a.kind);
        if (auto* r = opt(e, "robot")) a.robot = r->get<std::string>();
        if (auto* f = opt(e, "fire")) {
          if (auto* x = opt(*f, "thresholdCel")) a.fire.threshold_cel = x->get<double>();
          if (auto* x = opt(*f, "consecutiveSamples")) a.fire.consecutive_samples = x->get<int>();
        }
        if (auto* q = opt(e, "qos")) a.qos = q->get<control::QosParams>();
        s.applications.push_back(std::move(a));
      }
    }
    if (auto* list = opt(j, "fire")) {
      for (const auto& e : *list) {
        devices::FireSpike f;
        f.start = at_ms(e.at("startMs").get<double>());
        if (auto* x = opt(e, "endMs")) f.end = at_ms(x->get<double>());
        if (auto* x = opt(e, "peakCel")) f.peak_cel = x->get<double>();
        s.fire.push_back(f);
      }
    }
    if (auto* l = opt(j, "links")) {
      s.links.coap = ms_at(*l, "coapMs", s.links.coap);
      s.links.http = ms_at(*l, "httpMs", s.links.http);
      s.links.lcp = ms_at(*l, "lcpMs", s.links.lcp);
      s.bus_latency = ms_at(*l, "busMs", s.bus_latency);
    }
    if (auto* x = opt(j, "experiments")) {
      if (auto* p = opt(*x, "provisioning")) {
        ProvisioningExperiment e;
        if (auto* v = opt(*p, "runs")) e.runs = v->get<int>();
        for (const auto& pr : p->at("profiles")) {
          ProvisioningProfile prof;
          prof.name = pr.at("name").get<std::string>();
          prof.boot = range_at(pr, "bootDelayMs", s.nfvi.boot_delay);
          prof.transfer = range_at(pr, "transferMs", s.migration.transfer);
          if (auto* a = opt(pr, "acceptMs")) prof.accept_ms = std::pair{(*a)[0].get<double>(), (*a)[1].get<double>()};
          e.profiles.push_back(std::move(prof));
        }
        s.provisioning = std::move(e);
      }
      if (auto* d = opt(*x, "downtime")) {
        DowntimeExperiment e;
        e.probe_period = ms_at(*d, "probePeriodMs", e.probe_period);
        if (auto* v = opt(*d, "tolerancePeriods")) e.tolerance_periods = v->get<double>();
        for (const auto& row : d->at("rowsMs")) {
          std::vector<SimDuration> r;
          for (const auto& x2 : row) r.push_back(from_ms(x2.get<double>()));
          e.rows.push_back(std::move(r));
        }
        s.downtime = std::move(e);
      }
      if (auto* d = opt(*x, "e2e")) {
        E2eExperiment e;
        if (auto* v = opt(*d, "runs")) e.runs = v->get<int>();
        if (auto* v = opt(*d, "episodesPerSample")) e.episodes_per_sample = v->get<int>();
        if (auto* v = opt(*d, "maxSteadyDiffMs")) e.max_steady_diff_ms = v->get<double>();
        if (auto* v = opt(*d, "firstEpisodeRelTol")) e.first_episode_rel_tol = v->get<double>();
        s.e2e = e;
      }
      if (auto* d = opt(*x, "scaling")) {
        ScalingExperiment e;
        auto& r = e.ramp;
        r.policy.period = ms_at(*d, "periodTMs", r.policy.period);
        if (auto* v = opt(*d, "cpuThreshold")) r.policy.cpu_threshold = v->get<double>();
        if (auto* v = opt(*d, "cooldownPeriods")) r.policy.cooldown_periods = v->get<int>();
        if (auto* v = opt(*d, "costPerRequestMs")) r.cost_ms = v->get<double>();
        r.boot_delay = range_at(*d, "bootDelayMs", s.nfvi.boot_delay);
        if (auto* steps = opt(*d, "steps")) {
          r.schedule.steps.clear();
          for (const auto& st : *steps) {
            r.schedule.steps.push_back({st.at("requestsPerT").get<std::uint64_t>(),
                                        st.value("durationPeriods", std::uint64_t{1}), st.value("measured", false)});
          }
        } else if (auto* anchors = opt(*d, "anchors")) {
          r.schedule = ramp_schedule(anchors->get<std::vector<std::uint64_t>>(), d->value("growth", 1.07),
                                     d->value("holdPeriods", std::uint64_t{3}));
        }
        if (auto* v = opt(*d, "maxScalingSlopeMs")) e.max_scaling_slope_ms = v->get<double>();
        if (auto* v = opt(*d, "minNoScalingSlopeMs")) e.min_noscaling_slope_ms = v->get<double>();
        if (auto* v = opt(*d, "minSlopeRatio")) e.min_slope_ratio = v->get<double>();
        if (auto* v = opt(*d, "slopeFloorMs")) e.slope_floor_ms = v->get<double>();
        s.scaling = std::move(e);
      }
    }
  } catch (const Json::exception& e) {
    fail(ErrorCode::MalformedRequest, std::string("scenario: ") + e.what());
  }
  s.validate();
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::IoError, "cannot open scenario " + path);
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::ParseError, "scenario " + path + ": " + e.what());
  }
  return scenario_from_json(j);
}

/// Two sensors, one robot, a wildfire and a forest-monitoring application,
/// with one fire at start-up and a spike every 5 s once the service runs.
inline Scenario default_scenario() {
  Scenario s;
  s.sensors = {{"sunspot-1", DeviceBrand::Sunspot, from_ms(100), {Quantity::Temperature, Quantity::Humidity}, {}},
               {"adv-1", DeviceBrand::Advanticsys, from_ms(100), {Quantity::Temperature}, {}}};
  s.robots = {{"nxt-1", from_ms(200)}};
  s.applications = {{"wildfire", AppKind::Wildfire, "nxt-1", {}, {}},
                    {"forest", AppKind::ForestMonitoring, "nxt-1", {}, {}}};
  // The first spike is seen while the service is still being provisioned.
  s.fire.push_back({at_ms(0), at_ms(2000), 80});
  for (int k = 0; k < 12; ++k) s.fire.push_back({at_ms(50000 + 5000 * k), at_ms(52000 + 5000 * k), 80});
  s.horizon = from_ms(115000);
  // Sub-second downtimes so the chains are fully up at switchover.
  s.migration.protocol_converter_downtime = sim::UniformDelay::ms(300, 600);
  s.migration.info_model_converter_downtime = sim::UniformDelay::ms(400, 800);

  ProvisioningExperiment p;
  p.profiles = {{"uniform", sim::UniformDelay::ms(12000, 18000), sim::UniformDelay::ms(4000, 6000), std::pair{30000.0, 42000.0}},
                {"calibrated", sim::UniformDelay::ms(14000, 16000), sim::UniformDelay::ms(5000, 6400),
                 std::pair{34300.0 * 0.95, 38400.0 * 1.05}}};
  s.provisioning = p;

  DowntimeExperiment d;
  const double pc[] = {30000, 24000, 31000, 33000, 24000};
  const double im[] = {39000, 39000, 38000, 38000, 38000};
  for (int i = 0; i < 5; ++i) d.rows.push_back({from_ms(pc[i]), from_ms(im[i])});
  s.downtime = d;
  s.e2e = E2eExperiment{};
  s.scaling = ScalingExperiment{};
  return s;
}

inline Json scenario_to_json(const Scenario& s) {
  using detail::range_json;
  Json j;
  j["name"] = s.name;
  j["seed"] = s.seed;
  j["horizonMs"] = to_ms(s.horizon);
  if (s.catalog) {
    j["catalog"] = *s.catalog;
  } else {
    j["catalog"] = {{"protocolCostMs", s.protocol_cost_ms}, {"infoCostMs", s.info_cost_ms}};
  }
  Json quota = Json::object();
  for (const auto& [d, n] : s.nfvi.vm_quota) quota[std::string(to_string(d))] = n;
  j["nfvi"] = {{"bootDelayMs", range_json(s.nfvi.boot_delay)},
               {"chainDelayMs", to_ms(s.nfvi.chain_delay)},
               {"parallelInstantiation", s.nfvi.parallel_instantiation},
               {"vmQuota", quota}};
  j["migration"] = {{"approach", std::string(to_string(s.migration.approach))},
                    {"transferMs", range_json(s.migration.transfer)},
                    {"protocolConverterDowntimeMs", range_json(s.migration.protocol_converter_downtime)},
                    {"infoModelConverterDowntimeMs", range_json(s.migration.info_model_converter_downtime)}};
  if (s.migration.downtime) {
    Json list = Json::array();
    for (auto d : *s.migration.downtime) list.push_back(to_ms(d));
    j["migration"]["downtimeMs"] = list;
  }
  Json sensors = Json::array();
  for (const auto& x : s.sensors) {
    Json e = {{"id", x.id}, {"brand", x.brand}, {"periodMs", to_ms(x.period)}, {"quantities", x.quantities}};
    if (x.trace) e["trace"] = *x.trace;
    sensors.push_back(e);
  }
  Json robots = Json::array();
  for (const auto& r : s.robots) robots.push_back({{"id", r.id}, {"commandLatencyMs", to_ms(r.command_latency)}});
  j["vwsan"] = {{"providerId", s.vwsan_id}, {"sensors", sensors}, {"robots", robots}};
  Json apps = Json::array();
  for (const auto& a : s.applications) {
    apps.push_back({{"id", a.id},
                    {"kind", std::string(kAppKindNames.name(a.kind))},
                    {"robot", a.robot},
                    {"fire", {{"thresholdCel", a.fire.threshold_cel}, {"consecutiveSamples", a.fire.consecutive_samples}}},
                    {"qos", a.qos}});
  }
  j["applications"] = apps;
  Json fire = Json::array();
  for (const auto& f : s.fire) {
    Json e = {{"startMs", to_ms(f.start)}, {"peakCel", f.peak_cel}};
    if (f.end != SimTime::max()) e["endMs"] = to_ms(f.end);
    fire.push_back(e);
  }
  j["fire"] = fire;
  j["links"] = {{"coapMs", to_ms(s.links.coap)},
                {"httpMs", to_ms(s.links.http)},
                {"lcpMs", to_ms(s.links.lcp)},
                {"busMs", to_ms(s.bus_latency)}};
  Json x = Json::object();
  if (s.provisioning) {
    Json profiles = Json::array();
    for (const auto& p : s.provisioning->profiles) {
      Json e = {{"name", p.name}, {"bootDelayMs", range_json(p.boot)}, {"transferMs", range_json(p.transfer)}};
      if (p.accept_ms) e["acceptMs"] = {p.accept_ms->first, p.accept_ms->second};
      profiles.push_back(e);
    }
    x["provisioning"] = {{"runs", s.provisioning->runs}, {"profiles", profiles}};
  }
  if (s.downtime) {
    Json rows = Json::array();
    for (const auto& r : s.downtime->rows) {
      Json row = Json::array();
      for (auto d : r) row.push_back(to_ms(d));
      rows.push_back(row);
    }
    x["downtime"] = {{"probePeriodMs", to_ms(s.downtime->probe_period)},
                     {"tolerancePeriods", s.downtime->tolerance_periods},
                     {"rowsMs", rows}};
  }
  if (s.e2e) {
    x["e2e"] = {{"runs", s.e2e->runs},
                {"episodesPerSample", s.e2e->episodes_per_sample},
                {"maxSteadyDiffMs", s.e2e->max_steady_diff_ms},
                {"firstEpisodeRelTol", s.e2e->first_episode_rel_tol}};
  }
  if (s.scaling) {
    const auto& r = s.scaling->ramp;
    Json steps = Json::array();
    for (const auto& st : r.schedule.steps) {
      steps.push_back({{"requestsPerT", st.requests_per_period}, {"durationPeriods", st.periods}, {"measured", st.measured}});
    }
    x["scaling"] = {{"periodTMs", to_ms(r.policy.period)},
                    {"cpuThreshold", r.policy.cpu_threshold},
                    {"cooldownPeriods", r.policy.cooldown_periods},
                    {"costPerRequestMs", r.cost_ms},
                    {"bootDelayMs", range_json(r.boot_delay)},
                    {"steps", steps},
                    {"maxScalingSlopeMs", s.scaling->max_scaling_slope_ms},
                    {"minNoScalingSlopeMs", s.scaling->min_noscaling_slope_ms},
                    {"minSlopeRatio", s.scaling->min_slope_ratio},
                    {"slopeFloorMs", s.scaling->slope_floor_ms}};
  }
  j["experiments"] = x;
  return j;
}

}  // namespace vgw::harness
