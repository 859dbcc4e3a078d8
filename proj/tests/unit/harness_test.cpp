#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "vgw/harness/export.hpp"

using namespace vgw;
using namespace vgw::harness;

namespace {

Scenario small_scenario() {
  auto s = default_scenario();
  s.provisioning->runs = 2;
  s.downtime->rows.resize(1);
  s.e2e->runs = 1;
  s.scaling.reset();
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string jsonl(const std::vector<sim::Event>& events) {
  std::string out;
  for (const auto& e : events) out += sim::to_json_line(e).dump() + "\n";
  return out;
}

}  // namespace

// ---- reducers on hand-built logs --------------------------------------------

TEST(Reducers, ProvisioningSpansFirstInstantiatingToLastLanding) {
  sim::EventLog log;
  log.record(at_ms(10), "vnf-1", "INSTANTIATING", "sr-1", sim::Phase::Mano, {{"domain", "GATEWAY_PROVIDER"}});
  log.record(at_ms(20), "vnf-2", "INSTANTIATING", "sr-1", sim::Phase::Mano, {{"domain", "GATEWAY_PROVIDER"}});
  log.record(at_ms(30), "vnf-1", "RUNNING", "sr-1", sim::Phase::Mano, {{"domain", "GATEWAY_PROVIDER"}});
  log.record(at_ms(40), "chain-1", "CHAINING", "sr-1", sim::Phase::Mano, {{"instances", {"vnf-1", "vnf-2"}}});
  log.record(at_ms(50), "vnf-2", "RUNNING", "sr-1", sim::Phase::Mano, {{"domain", "VWSAN_PROVIDER"}});
  auto partial = provisioning_times(log.events());
  EXPECT_TRUE(partial.empty()) << "vnf-1 has not landed";
  log.record(at_ms(70), "vnf-1", "RUNNING", "sr-1", sim::Phase::Mano, {{"domain", "VWSAN_PROVIDER"}});
  auto done = provisioning_times(log.events());
  ASSERT_EQ(done.size(), 1u);
  EXPECT_EQ(done[0].chain_id, "chain-1");
  EXPECT_EQ(done[0].ref, "sr-1");
  EXPECT_EQ(done[0].duration(), from_ms(60));
}

TEST(Reducers, DowntimePairsDownWithTheNextUp) {
  sim::EventLog log;
  log.record(at_ms(0), "vm-1", "UP", "", sim::Phase::None, {{"instanceId", "vnf-1"}});
  log.record(at_ms(100), "vm-1", "DOWN", "", sim::Phase::None, {{"instanceId", "vnf-1"}});
  log.record(at_ms(400), "vm-1", "UP", "", sim::Phase::None, {{"instanceId", "vnf-1"}});
  log.record(at_ms(500), "vm-2", "DOWN", "", sim::Phase::None, {{"instanceId", "vnf-2"}});
  const auto d = vm_downtimes(log.events());
  ASSERT_EQ(d.size(), 1u);
  ASSERT_EQ(d.at("vnf-1").size(), 1u);
  EXPECT_EQ(d.at("vnf-1")[0], from_ms(300));
}

TEST(Reducers, EpisodesPairDetectionWithTheNextDeployment) {
  sim::EventLog log;
  auto detect = [&](double t, int ep, double emitted_ms) {
    log.record(at_ms(t), "wf", "FIRE_DETECTED", "", sim::Phase::None,
               {{"episode", ep}, {"sensor", "s"}, {"emittedUs", static_cast<std::int64_t>(emitted_ms * 1000)}});
  };
  detect(100, 1, 50);
  log.record(at_ms(300), "nxt", "DEPLOYED");
  detect(400, 2, 380);
  log.record(at_ms(500), "other", "DEPLOYED");
  const auto eps = e2e_episodes(log.events(), "wf", "nxt");
  ASSERT_EQ(eps.size(), 1u);
  EXPECT_EQ(eps[0].episode, 1);
  EXPECT_EQ(eps[0].delay(), from_ms(250));
}

// ---- provisioning ------------------------------------------------------------

TEST(Provisioning, FixedDelaysSumAlongTheSequentialPath) {
  // Generator: fixed boot and transfer delays; the oracle is two boots in
  // series, one chaining delay and one transfer.
  sim::Rng gen(17);
  auto s = default_scenario();
  for (int i = 0; i < 20; ++i) {
    const double boot = gen.uniform_int(1000, 20000);
    const double transfer = gen.uniform_int(100, 8000);
    const double chain = gen.uniform_int(0, 3000);
    s.nfvi.chain_delay = from_ms(chain);
    ProvisioningProfile p{"fixed", sim::UniformDelay::fixed(from_ms(boot)), sim::UniformDelay::fixed(from_ms(transfer)), {}};
    const auto r = provision_once(s, p, i, 99 + i);
    EXPECT_DOUBLE_EQ(r.recomputed_ms, 2 * boot + chain + transfer) << "case " << i;
    EXPECT_EQ(r.reported_ms, r.recomputed_ms);
  }
}

TEST(Provisioning, RandomProfilesStayWithinTheirEnvelope) {
  sim::Rng gen(5);
  auto s = default_scenario();
  for (int i = 0; i < 30; ++i) {
    const double b0 = gen.uniform_int(1000, 15000);
    const double b1 = b0 + gen.uniform_int(0, 5000);
    const double t0 = gen.uniform_int(100, 5000);
    const double t1 = t0 + gen.uniform_int(0, 3000);
    ProvisioningProfile p{"r", sim::UniformDelay::ms(b0, b1), sim::UniformDelay::ms(t0, t1), {}};
    const auto r = provision_once(s, p, i, 1000 + i);
    const double chain = to_ms(s.nfvi.chain_delay);
    EXPECT_GE(r.recomputed_ms, 2 * b0 + chain + t0);
    EXPECT_LE(r.recomputed_ms, 2 * b1 + chain + t1);
  }
}

// ---- downtime ------------------------------------------------------------------

TEST(Downtime, LogMatchesConfigurationAndProbesStayWithinOnePeriod) {
  auto s = default_scenario();
  sim::Rng gen(3);
  s.downtime->rows.clear();
  for (int i = 0; i < 6; ++i) {
    s.downtime->rows.push_back({from_ms(gen.uniform_int(500, 40000)), from_ms(gen.uniform_int(500, 40000))});
  }
  const auto rows = run_downtime(s);
  ASSERT_EQ(rows.size(), 12u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.log_ms, r.configured_ms) << r.image_id << " sample " << r.sample;
    EXPECT_LE(std::abs(r.probe_ms - r.configured_ms), 1000.0) << r.image_id << " sample " << r.sample;
  }
  EXPECT_TRUE(check_downtime(s, rows).front().passed);
}

// ---- testbed ---------------------------------------------------------------------

TEST(Testbed, VirtualizedFirstEpisodeCarriesProvisioning) {
  const auto s = small_scenario();
  const auto runs = e2e_once(s, 0, 11);
  ASSERT_EQ(runs.size(), 1u);
  const auto& r = runs[0];
  ASSERT_GE(r.virtualized_ms.size(), 11u);
  EXPECT_GT(r.provisioning_ms, 30000);
  for (std::size_t i = 1; i < r.virtualized_ms.size(); ++i) EXPECT_DOUBLE_EQ(r.virtualized_ms[i], r.virtualized_ms[1]);
  EXPECT_NEAR(r.virtualized_ms[0], r.provisioning_ms + r.virtualized_ms[1], 0.01 * r.virtualized_ms[0]);
  EXPECT_FALSE(r.baseline_touched_mano);
}

TEST(Testbed, BaselineDelayIsTheSumOfConfiguredSpans) {
  const auto s = small_scenario();
  Testbed t(s, GatewayMode::Baseline, 4);
  t.run();
  const auto eps = e2e_episodes(t.log().events(), "wildfire", "nxt-1");
  ASSERT_FALSE(eps.empty());
  // Link latencies, per-VNF costs and the robot's command latency only.
  for (const auto& e : eps) EXPECT_DOUBLE_EQ(to_ms(e.delay()), 434.0);
  EXPECT_FALSE(touches_mano(t.log().events()));
}

TEST(Testbed, SameSeedReplaysTheSameLog) {
  const auto s = small_scenario();
  Testbed a(s, GatewayMode::Virtualized, 21);
  a.run();
  Testbed b(s, GatewayMode::Virtualized, 21);
  b.run();
  EXPECT_EQ(jsonl(a.log().events()), jsonl(b.log().events()));
  Testbed c(s, GatewayMode::Virtualized, 22);
  c.run();
  EXPECT_NE(jsonl(a.log().events()), jsonl(c.log().events()));
}

TEST(Testbed, EveryPhaseAppearsInOrderForTheServiceRequest) {
  const auto s = small_scenario();
  Testbed t(s, GatewayMode::Virtualized, 8);
  t.run();
  const auto sr = service_request_of(t.log().events(), "wildfire");
  ASSERT_TRUE(sr);
  std::vector<sim::Phase> seen;
  for (const auto& e : t.log().for_ref(*sr)) {
    if (e.phase != sim::Phase::None && (seen.empty() || seen.back() != e.phase)) seen.push_back(e.phase);
  }
  auto first = [&](sim::Phase p) { return std::find(seen.begin(), seen.end(), p) - seen.begin(); };
  for (auto p : {sim::Phase::ServiceRequest, sim::Phase::OssQuery, sim::Phase::VnfRequest, sim::Phase::StoreLookup,
                 sim::Phase::Mano, sim::Phase::Availability, sim::Phase::ServiceStart}) {
    EXPECT_LT(first(p), static_cast<long>(seen.size())) << to_string(p);
  }
  EXPECT_LT(first(sim::Phase::ServiceRequest), first(sim::Phase::OssQuery));
  EXPECT_LT(first(sim::Phase::OssQuery), first(sim::Phase::VnfRequest));
  EXPECT_LT(first(sim::Phase::VnfRequest), first(sim::Phase::Mano));
  EXPECT_LT(first(sim::Phase::Mano), first(sim::Phase::Availability));
  EXPECT_LT(first(sim::Phase::Availability), first(sim::Phase::ServiceStart));
}

TEST(Testbed, ForestAppReceivesBothBrandsAsSenml) {
  const auto s = small_scenario();
  Testbed t(s, GatewayMode::Virtualized, 2);
  t.run();
  const auto* f = t.forest("forest");
  ASSERT_NE(f, nullptr);
  EXPECT_GT(f->received("sunspot-1"), 0u);
  EXPECT_GT(f->received("adv-1"), 0u);
  EXPECT_EQ(f->undecoded(), 0u);
  EXPECT_NE(t.infrastructure("forest"), nullptr);
  EXPECT_EQ(t.infrastructure("nope"), nullptr);
}

// ---- scenario json ---------------------------------------------------------------

TEST(ScenarioJson, RoundTripIsAFixedPoint) {
  const auto j = scenario_to_json(default_scenario());
  const auto back = scenario_to_json(scenario_from_json(j));
  EXPECT_EQ(j, back);
}

TEST(ScenarioJson, RejectsBadInput) {
  auto base = scenario_to_json(default_scenario());
  auto expect_bad = [&](auto mutate, const char* what) {
    Json j = base;
    mutate(j);
    try {
      scenario_from_json(j);
      ADD_FAILURE() << what << " accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::MalformedRequest) << what;
    }
  };
  expect_bad([](Json& j) { j["horizonMs"] = -1; }, "negative horizon");
  expect_bad([](Json& j) { j["nfvi"]["bootDelayMs"] = Json::array({5}); }, "one-element range");
  expect_bad([](Json& j) { j["nfvi"]["bootDelayMs"] = Json::array({9, 3}); }, "inverted range");
  expect_bad([](Json& j) { j["vwsan"]["sensors"][1]["id"] = j["vwsan"]["sensors"][0]["id"]; }, "duplicate sensor");
  expect_bad([](Json& j) { j["vwsan"]["sensors"][0]["brand"] = "LEGO_NXT"; }, "actuator as sensor");
  expect_bad([](Json& j) { j["applications"][0]["robot"] = "ghost"; }, "unknown robot");
  expect_bad([](Json& j) { j["migration"]["approach"] = "TELEPORT"; }, "unknown approach");
  expect_bad([](Json& j) { j["experiments"]["downtime"]["rowsMs"] = Json::array({Json::array({1})}); }, "short row");
  expect_bad([](Json& j) { j["experiments"]["scaling"]["cpuThreshold"] = 1.5; }, "threshold above one");
}

TEST(ScenarioJson, LoadReportsIoAndParseErrors) {
  try {
    load_scenario("/nonexistent/scenario.json");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
  const auto p = std::filesystem::temp_directory_path() / "vgw_bad_scenario.json";
  std::ofstream(p) << "{ not json";
  try {
    load_scenario(p.string());
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
}

// ---- export ----------------------------------------------------------------------

TEST(Export, EmptyReportStillWritesHeaders) {
  Report r;
  r.scenario.name = "empty";
  const auto dir = std::filesystem::temp_directory_path() / "vgw_export_empty";
  std::filesystem::remove_all(dir);
  export_report(r, dir);
  EXPECT_EQ(slurp(dir / "fig4a.csv"), "profile,run,seed,provisioningMs,recomputedMs\n");
  EXPECT_EQ(slurp(dir / "fig4c.csv"), "sample,position,imageId,configuredMs,probeMeasuredMs,logMeasuredMs\n");
  EXPECT_EQ(slurp(dir / "fig5a.csv"), "sample,applicationId,virtualizedColdMs,virtualizedWarmMs,baselineMs\n");
  EXPECT_EQ(slurp(dir / "fig5b.csv"), "load,meanResponseMs_scaling,meanResponseMs_noscaling\n");
  EXPECT_EQ(slurp(dir / "replicas.csv"), "timestampMs,chainId,position,replicas\n");
  EXPECT_EQ(slurp(dir / "events.jsonl"), "");
  EXPECT_FALSE(slurp(dir / "migration.csv").empty());
  const auto summary = Json::parse(slurp(dir / "summary.json"));
  EXPECT_TRUE(summary.at("passed").get<bool>());
  EXPECT_TRUE(summary.at("checks").empty());
}

TEST(Export, SameScenarioExportsByteIdentically) {
  const auto s = small_scenario();
  const auto a = std::filesystem::temp_directory_path() / "vgw_export_a";
  const auto b = std::filesystem::temp_directory_path() / "vgw_export_b";
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
  const auto ra = run_all(s);
  export_report(ra, a);
  export_report(run_all(s), b);
  EXPECT_TRUE(ra.passed());
  for (const auto& f : std::filesystem::directory_iterator(a)) {
    EXPECT_EQ(slurp(f.path()), slurp(b / f.path().filename())) << f.path().filename();
  }
  EXPECT_GT(slurp(a / "events.jsonl").size(), 0u);
  const auto migrations = slurp(a / "migration.csv");
  EXPECT_GT(std::count(migrations.begin(), migrations.end(), '\n'), 1);
}
