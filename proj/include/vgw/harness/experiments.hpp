#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "vgw/harness/reducers.hpp"
#include "vgw/harness/testbed.hpp"

namespace vgw::harness {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

inline double mean_of(const std::vector<double>& xs) {
  return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// ---- provisioning time -----------------------------------------------------

struct ProvisioningRun {
  std::string profile;
  int run = 0;
  std::uint64_t seed = 0;
  double reported_ms = 0;    // MANO's own ready - started
  double recomputed_ms = 0;  // from the event log
};

/// One two-VNF uplink chain per run, provisioned through MANO with the
/// profile's boot and transfer distributions.
inline ProvisioningRun provision_once(const Scenario& s, const ProvisioningProfile& p, int run, std::uint64_t seed) {
  sim::EventLoop loop;
  sim::EventLog log;
  sim::Rng rng(seed);
  store::VnfStore store;
  for (const auto& img : store::default_catalog(s.protocol_cost_ms, s.info_cost_ms)) store.register_image(img);
  auto ncfg = s.nfvi;
  ncfg.boot_delay = p.boot;
  nfvi::Nfvi nfvi(loop, log, store, rng, ncfg);
  auto ms = s.migration;
  ms.approach = nfvi::MigrationApproach::LiveAfterChain;
  ms.transfer = p.transfer;
  nfvi::Mano mano(nfvi, ms);
  ProvisioningRun r{p.name, run, seed, -1, -1};
  mano.provision({"pc-coap-http-sunspot", "im-sunspot-senml"}, Direction::Uplink, "prov-" + std::to_string(run),
                 [&](const nfvi::Provisioned& done) { r.reported_ms = to_ms(done.ready - done.started); });
  loop.run();
  const auto times = provisioning_times(log.events());
  if (times.size() == 1) r.recomputed_ms = to_ms(times.front().duration());
  return r;
}

inline std::vector<ProvisioningRun> run_provisioning(const Scenario& s) {
  std::vector<ProvisioningRun> out;
  if (!s.provisioning) return out;
  for (std::size_t p = 0; p < s.provisioning->profiles.size(); ++p) {
    for (int run = 0; run < s.provisioning->runs; ++run) {
      out.push_back(provision_once(s, s.provisioning->profiles[p], run, s.seed * 1000003 + p * 1000 + run));
    }
  }
  return out;
}

inline std::vector<Check> check_provisioning(const Scenario& s, const std::vector<ProvisioningRun>& runs) {
  std::vector<Check> out;
  if (!s.provisioning) return out;
  bool identical = !runs.empty();
  for (const auto& r : runs) identical = identical && r.reported_ms >= 0 && r.reported_ms == r.recomputed_ms;
  for (const auto& p : s.provisioning->profiles) {
    std::vector<double> xs;
    for (const auto& r : runs) {
      if (r.profile == p.name) xs.push_back(r.recomputed_ms);
    }
    if (!p.accept_ms || xs.empty()) continue;
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    const bool ok = *lo >= p.accept_ms->first && *hi <= p.accept_ms->second;
    out.push_back({"provisioning " + p.name, ok,
                   "min " + fmt(*lo) + " max " + fmt(*hi) + " ms, accepted [" + fmt(p.accept_ms->first) + ", " +
                       fmt(p.accept_ms->second) + "]"});
  }
  out.push_back({"provisioning identity", identical, std::to_string(runs.size()) + " runs, reported == recomputed"});
  return out;
}

// ---- downtime --------------------------------------------------------------

struct DowntimeRow {
  int sample = 0;
  std::size_t position = 0;
  std::string image_id;
  double configured_ms = 0;
  double probe_ms = -1;  // first failed probe to next successful one
  double log_ms = -1;    // DOWN to UP in the event log
};

inline std::vector<DowntimeRow> run_downtime(const Scenario& s) {
  std::vector<DowntimeRow> out;
  if (!s.downtime) return out;
  const std::vector<std::string> images{"pc-coap-http-sunspot", "im-sunspot-senml"};
  for (std::size_t row = 0; row < s.downtime->rows.size(); ++row) {
    sim::EventLoop loop;
    sim::EventLog log;
    sim::Rng rng(s.seed * 7 + row);
    store::VnfStore store;
    for (const auto& img : store::default_catalog(s.protocol_cost_ms, s.info_cost_ms)) store.register_image(img);
    nfvi::Nfvi nfvi(loop, log, store, rng, s.nfvi);
    auto ms = s.migration;
    ms.approach = nfvi::MigrationApproach::LiveAfterChain;
    ms.downtime = s.downtime->rows[row];
    nfvi::Mano mano(nfvi, ms);

    std::vector<nfvi::InstanceId> ids;
    nfvi.instantiate_all(images, Domain::GatewayProvider, "downtime", [&](std::vector<nfvi::InstanceId> v) { ids = v; });
    loop.run();
    const auto chain = nfvi.chain(ids, Direction::Uplink, "downtime");
    loop.run();
    const auto plan = mano.plan_for(images);
    SimDuration longest{};
    for (auto d : plan.per_instance_downtime) longest = std::max(longest, d);
    std::vector<nfvi::Nfvi::ProbeId> probes;
    const SimTime t0 = loop.now();
    for (const auto& id : ids) {
      probes.push_back(nfvi.probe(id, s.downtime->probe_period, t0, t0 + plan.transfer_delay + longest + from_ms(10000)));
    }
    nfvi.migrate(chain, plan);
    loop.run();
    const auto spans = vm_downtimes(log.events());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      DowntimeRow r{static_cast<int>(row + 1), i, images[i], to_ms(s.downtime->rows[row][i])};
      const auto outages = nfvi::measured_outages(nfvi.probe_samples(probes[i]));
      if (outages.size() == 1) r.probe_ms = to_ms(outages.front());
      auto it = spans.find(ids[i]);
      if (it != spans.end() && it->second.size() == 1) r.log_ms = to_ms(it->second.front());
      out.push_back(r);
    }
  }
  return out;
}

inline std::vector<Check> check_downtime(const Scenario& s, const std::vector<DowntimeRow>& rows) {
  if (!s.downtime) return {};
  const double tol = s.downtime->tolerance_periods * to_ms(s.downtime->probe_period);
  bool ok = !rows.empty();
  double worst = 0;
  for (const auto& r : rows) {
    const double err = std::abs(r.probe_ms - r.configured_ms);
    worst = std::max(worst, err);
    ok = ok && r.probe_ms >= 0 && err <= tol && r.log_ms == r.configured_ms;
  }
  return {{"downtime", ok, std::to_string(rows.size()) + " windows, worst probe error " + fmt(worst) + " ms, tolerance " + fmt(tol)}};
}

// ---- end-to-end delay ------------------------------------------------------

struct E2eRun {
  int run = 0;
  std::uint64_t seed = 0;
  std::string app;
  std::vector<double> virtualized_ms;  // per episode; the first includes provisioning
  std::vector<double> baseline_ms;
  double provisioning_ms = 0;  // slowest chain of the application's request
  bool baseline_touched_mano = false;
};

inline bool touches_mano(const std::vector<sim::Event>& events) {
  return std::any_of(events.begin(), events.end(), [](const sim::Event& e) { return e.phase == sim::Phase::Mano; });
}

inline std::vector<double> delays_ms(const std::vector<E2eEpisode>& eps) {
  std::vector<double> out;
  for (const auto& e : eps) out.push_back(to_ms(e.delay()));
  return out;
}

/// The virtualized and baseline runs of one seed, for every wildfire app.
/// Returns the virtualized event log through `events` when given.
inline std::vector<E2eRun> e2e_once(const Scenario& s, int run, std::uint64_t seed,
                                    std::vector<sim::Event>* events = nullptr, double compression = 0,
                                    std::vector<nfvi::MigrationRecord>* migrations = nullptr) {
  Testbed virt(s, GatewayMode::Virtualized, seed, compression);
  virt.run();
  Testbed base(s, GatewayMode::Baseline, seed);
  base.run();
  std::vector<E2eRun> out;
  const auto prov = provisioning_times(virt.log().events());
  for (const auto& a : s.applications) {
    if (a.kind != AppKind::Wildfire) continue;
    E2eRun r{run, seed, a.id, {}, {}};
    r.virtualized_ms = delays_ms(e2e_episodes(virt.log().events(), a.id, a.robot));
    r.baseline_ms = delays_ms(e2e_episodes(base.log().events(), a.id, a.robot));
    const auto sr = service_request_of(virt.log().events(), a.id);
    for (const auto& p : prov) {
      if (sr && p.ref == *sr) r.provisioning_ms = std::max(r.provisioning_ms, to_ms(p.duration()));
    }
    r.baseline_touched_mano = touches_mano(base.log().events());
    out.push_back(std::move(r));
  }
  if (events) *events = virt.log().events();
  if (migrations) *migrations = virt.nfvi().migrations();
  return out;
}

inline std::vector<E2eRun> run_e2e(const Scenario& s, std::vector<sim::Event>* first_log = nullptr) {
  std::vector<E2eRun> out;
  if (!s.e2e) return out;
  for (int run = 0; run < s.e2e->runs; ++run) {
    auto rs = e2e_once(s, run, s.seed + static_cast<std::uint64_t>(run), run == 0 ? first_log : nullptr);
    out.insert(out.end(), rs.begin(), rs.end());
  }
  return out;
}

/// One row per run: means over the first N episodes, with (cold) and
/// without (warm) the provisioning episode, and the baseline.
struct E2eSample {
  int sample = 0;
  std::string app;
  double cold_ms = 0;
  double warm_ms = 0;
  double baseline_ms = 0;
};

inline std::vector<E2eSample> e2e_samples(const Scenario& s, const std::vector<E2eRun>& runs) {
  std::vector<E2eSample> out;
  if (!s.e2e) return out;
  const auto n = static_cast<std::size_t>(s.e2e->episodes_per_sample);
  for (const auto& r : runs) {
    auto window = [](const std::vector<double>& xs, std::size_t from, std::size_t n) {
      std::vector<double> w;
      for (std::size_t i = from; i < xs.size() && i < from + n; ++i) w.push_back(xs[i]);
      return mean_of(w);
    };
    out.push_back({r.run + 1, r.app, window(r.virtualized_ms, 0, n), window(r.virtualized_ms, 1, n), window(r.baseline_ms, 0, n)});
  }
  return out;
}

inline std::vector<Check> check_e2e(const Scenario& s, const std::vector<E2eRun>& runs) {
  if (!s.e2e) return {};
  const auto n = static_cast<std::size_t>(s.e2e->episodes_per_sample);
  bool steady_ok = !runs.empty();
  bool first_ok = !runs.empty();
  bool bypass_ok = true;
  double worst_diff = 0;
  double worst_rel = 0;
  for (const auto& r : runs) {
    bypass_ok = bypass_ok && !r.baseline_touched_mano;
    if (r.virtualized_ms.size() < n + 1 || r.baseline_ms.size() < n) {
      steady_ok = first_ok = false;
      continue;
    }
    const std::vector<double> warm(r.virtualized_ms.begin() + 1, r.virtualized_ms.end());
    const double steady = mean_of(warm);
    const double diff = steady - mean_of(r.baseline_ms);
    worst_diff = std::max(worst_diff, std::abs(diff));
    steady_ok = steady_ok && std::abs(diff) <= s.e2e->max_steady_diff_ms;
    const double expected = r.provisioning_ms + steady;
    const double rel = std::abs(r.virtualized_ms.front() - expected) / expected;
    worst_rel = std::max(worst_rel, rel);
    first_ok = first_ok && rel <= s.e2e->first_episode_rel_tol;
  }
  return {{"e2e steady state", steady_ok,
           "worst |virtualized - baseline| " + fmt(worst_diff) + " ms, limit " + fmt(s.e2e->max_steady_diff_ms)},
          {"e2e first episode", first_ok,
           "worst relative gap to provisioning + steady " + fmt(worst_rel) + ", limit " + fmt(s.e2e->first_episode_rel_tol)},
          {"baseline bypasses MANO", bypass_ok && !runs.empty(), "no MANO events in baseline logs"}};
}

// ---- scaling ---------------------------------------------------------------

struct ScalingOutcome {
  RampResult with;
  RampResult without;
};

inline std::optional<ScalingOutcome> run_scaling(const Scenario& s) {
  if (!s.scaling) return std::nullopt;
  auto cfg = s.scaling->ramp;
  cfg.seed = s.seed;
  return ScalingOutcome{run_load_ramp(cfg, true), run_load_ramp(cfg, false)};
}

/// Differences between consecutive measured loads from `from_load` upward.
inline std::vector<double> slopes(const std::vector<std::pair<std::uint64_t, double>>& by_load, std::uint64_t from_load) {
  std::vector<double> out;
  for (std::size_t i = 1; i < by_load.size(); ++i) {
    if (by_load[i - 1].first >= from_load) out.push_back(by_load[i].second - by_load[i - 1].second);
  }
  return out;
}

inline std::vector<Check> check_scaling(const Scenario& s, const std::optional<ScalingOutcome>& o) {
  if (!s.scaling || !o) return {};
  const auto& x = *s.scaling;
  const auto loads = o->with.by_load();
  const std::uint64_t from = loads.size() > 1 ? loads[1].first : 0;
  const auto up = slopes(loads, from);
  const auto flat = slopes(o->without.by_load(), from);
  const bool up_ok = !up.empty() && std::all_of(up.begin(), up.end(), [&](double d) { return d <= x.max_scaling_slope_ms; });
  const bool flat_ok =
      !flat.empty() && std::all_of(flat.begin(), flat.end(), [&](double d) { return d >= x.min_noscaling_slope_ms; });
  const double ratio = mean_of(flat) / std::max(mean_of(up), x.slope_floor_ms);
  std::string up_s, flat_s;
  for (double d : up) up_s += fmt(d) + " ";
  for (double d : flat) flat_s += fmt(d) + " ";
  return {{"scaling slope", up_ok, "per doubling from " + std::to_string(from) + ": " + up_s + "ms"},
          {"no-scaling slope", flat_ok, "per doubling from " + std::to_string(from) + ": " + flat_s + "ms"},
          {"slope ratio", ratio >= x.min_slope_ratio, fmt(ratio) + "x, required " + fmt(x.min_slope_ratio)}};
}

// ---- whole report ----------------------------------------------------------

struct Report {
  Scenario scenario;
  std::vector<ProvisioningRun> provisioning;
  std::vector<DowntimeRow> downtime;
  std::vector<E2eRun> e2e;
  std::optional<ScalingOutcome> scaling;
  std::vector<sim::Event> events;  // virtualized run of the first E2E seed
  std::vector<nfvi::MigrationRecord> migrations;
  std::vector<Check> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }
};

inline Report run_all(const Scenario& s, double compression = 0) {
  Report r;
  r.scenario = s;
  r.provisioning = run_provisioning(s);
  r.downtime = run_downtime(s);
  if (s.e2e) {
    for (int run = 0; run < s.e2e->runs; ++run) {
      const std::uint64_t seed = s.seed + static_cast<std::uint64_t>(run);
      const bool first = run == 0;
      auto rs = e2e_once(s, run, seed, first ? &r.events : nullptr, first ? compression : 0,
                         first ? &r.migrations : nullptr);
      r.e2e.insert(r.e2e.end(), rs.begin(), rs.end());
    }
  } else {
    Testbed t(s, GatewayMode::Virtualized, s.seed, compression);
    t.run();
    r.events = t.log().events();
    r.migrations = t.nfvi().migrations();
  }
  r.scaling = run_scaling(s);
  for (const auto& set : {check_provisioning(s, r.provisioning), check_downtime(s, r.downtime), check_e2e(s, r.e2e),
                          check_scaling(s, r.scaling)}) {
    r.checks.insert(r.checks.end(), set.begin(), set.end());
  }
  return r;
}

}  // namespace vgw::harness
