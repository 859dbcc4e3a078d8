#pragma once

#include <cmath>
#include <vector>

#include "vgw/autoscaler/autoscaler.hpp"
#include "vgw/dataplane/raw.hpp"
#include "vgw/sim/random.hpp"

namespace vgw::harness {

struct LoadStep {
  std::uint64_t requests_per_period = 0;
  std::uint64_t periods = 1;
  bool measured = false;  // reported as a load point
};

struct LoadSchedule {
  std::vector<LoadStep> steps;

  void validate() const {
    if (steps.empty()) fail(ErrorCode::MalformedRequest, "load schedule has no steps");
    for (const auto& s : steps) {
      if (s.requests_per_period == 0) fail(ErrorCode::MalformedRequest, "requestsPerT must be positive");
      if (s.periods == 0) fail(ErrorCode::MalformedRequest, "durationPeriods must be positive");
    }
  }

  std::uint64_t total_periods() const {
    std::uint64_t n = 0;
    for (const auto& s : steps) n += s.periods;
    return n;
  }
};

/// Holds each anchor for `hold` periods and climbs between consecutive
/// anchors by at most `growth` per period.
inline LoadSchedule ramp_schedule(const std::vector<std::uint64_t>& anchors, double growth, std::uint64_t hold) {
  if (anchors.empty() || !(growth > 1.0)) fail(ErrorCode::MalformedRequest, "ramp needs anchors and growth > 1");
  LoadSchedule s;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (i > 0) {
      double load = static_cast<double>(anchors[i - 1]) * growth;
      while (load < static_cast<double>(anchors[i])) {
        s.steps.push_back({static_cast<std::uint64_t>(std::llround(load)), 1, false});
        load *= growth;
      }
    }
    s.steps.push_back({anchors[i], hold, true});
  }
  s.validate();
  return s;
}

/// Arrival k of a step starting at t0 with n requests per period T is at
/// t0 + floor(k T / n); the spacing is exactly T / n whenever that divides.
inline std::vector<SimTime> uniform_arrivals(SimTime t0, SimDuration period, std::uint64_t n, std::uint64_t periods) {
  std::vector<SimTime> out;
  out.reserve(n * periods);
  const auto span = static_cast<std::int64_t>(periods) * period.count();
  const auto total = static_cast<std::int64_t>(n * periods);
  for (std::int64_t k = 0; k < total; ++k) out.push_back(t0 + SimDuration(k * span / total));
  return out;
}

struct RampConfig {
  autoscaler::ScalingPolicy policy;
  LoadSchedule schedule = ramp_schedule({500, 1000, 2000, 4000}, 1.07, 3);
  double cost_ms = 10;  // per image, per request
  sim::UniformDelay boot_delay = sim::UniformDelay::ms(12000, 18000);
  std::uint64_t seed = 1;
};

struct StepResult {
  std::uint64_t load = 0;
  bool measured = false;
  SimTime start{};
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  double mean_response_ms = 0;
  double max_response_ms = 0;
};

struct RampResult {
  bool scaling = false;
  std::vector<StepResult> steps;
  std::vector<autoscaler::ReplicaCount> replica_trace;
  std::vector<autoscaler::UtilizationSample> samples;
  std::vector<sim::Event> events;

  /// (load, mean response) for the measured steps, in schedule order.
  std::vector<std::pair<std::uint64_t, double>> by_load() const {
    std::vector<std::pair<std::uint64_t, double>> out;
    for (const auto& s : steps) {
      if (s.measured) out.emplace_back(s.load, s.mean_response_ms);
    }
    return out;
  }
};

/// The measurement every generated request carries.
inline dataplane::CoapMessage load_message() {
  dataplane::RawMeasurement m{"load-gen", DeviceBrand::Sunspot, Quantity::Temperature,
                             dataplane::Decimal::of("21.5"), "Cel", 1700000000};
  dataplane::CoapMessage c;
  c.uri_path = "sensors/load-gen";
  c.payload = dataplane::encode_raw(DeviceBrand::Sunspot, {m});
  return c;
}

/// Drives the uplink sunspot chain, already running in the VWSAN provider
/// domain, with the schedule. Response time is traversal latency: sent by
/// the generator until the last VNF of the chain is done.
inline RampResult run_load_ramp(const RampConfig& cfg, bool scaling) {
  cfg.schedule.validate();
  RampResult result;
  result.scaling = scaling;
  sim::EventLoop loop;
  sim::EventLog log;
  sim::Rng rng(cfg.seed);
  store::VnfStore store;
  for (const auto& img : store::default_catalog(cfg.cost_ms, cfg.cost_ms)) store.register_image(img);
  nfvi::NfviConfig ncfg;
  ncfg.boot_delay = cfg.boot_delay;
  nfvi::Nfvi nfvi(loop, log, store, rng, ncfg);

  std::vector<nfvi::InstanceId> ids;
  for (const auto* img : {"pc-coap-http-sunspot", "im-sunspot-senml"}) {
    ids.push_back(nfvi.instantiate(img, Domain::VwsanProvider, "load-ramp"));
    loop.run();
  }
  const auto chain = nfvi.chain(ids, Direction::Uplink, "load-ramp");
  loop.run();

  const SimTime t0 = loop.now();
  const SimTime end = t0 + cfg.policy.period * static_cast<std::int64_t>(cfg.schedule.total_periods());
  autoscaler::Autoscaler scaler(loop, log, nfvi, cfg.policy, scaling);
  scaler.manage(chain);
  scaler.start(end);
  dataplane::Pipeline pipeline(nfvi);
  const auto select = scaler.selector(chain);
  const dataplane::Message msg = load_message();

  std::vector<double> sums;
  SimTime step_start = t0;
  for (std::size_t i = 0; i < cfg.schedule.steps.size(); ++i) {
    const auto& step = cfg.schedule.steps[i];
    result.steps.push_back({step.requests_per_period, step.measured, step_start});
    sums.push_back(0);
    for (const SimTime at : uniform_arrivals(step_start, cfg.policy.period, step.requests_per_period, step.periods)) {
      loop.post_at(at, [&, i, at] {
        auto& r = result.steps[i];
        ++r.sent;
        try {
          const auto ms = to_ms(pipeline.process(chain, msg, at, select).latency());
          ++r.delivered;
          sums[i] += ms;
          r.max_response_ms = std::max(r.max_response_ms, ms);
        } catch (const Error&) {
          ++r.dropped;
        }
      });
    }
    step_start += cfg.policy.period * static_cast<std::int64_t>(step.periods);
  }
  loop.run();
  for (std::size_t i = 0; i < result.steps.size(); ++i) {
    auto& r = result.steps[i];
    r.mean_response_ms = r.delivered ? sums[i] / static_cast<double>(r.delivered) : 0;
  }
  result.replica_trace = scaler.replica_trace();
  result.samples = scaler.samples();
  result.events = log.events();
  return result;
}

}  // namespace vgw::harness
