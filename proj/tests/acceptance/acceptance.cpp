// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "support/golden_vectors.hpp"
#include "support/graph_oracle.hpp"
#include "support/http_matrix.hpp"
#include "support/reading_gen.hpp"
#include "support/scaling_oracle.hpp"
#include "vgw/harness/export.hpp"

using namespace vgw;
using namespace vgw::harness;

namespace {

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) passed = false;
    notes.push_back(std::string(ok ? "ok    " : "fail  ") + what);
  }

  void add(const std::vector<Check>& checks) {
    for (const auto& c : checks) require(c.passed, c.name + ": " + c.detail);
  }
};

Outcome provisioning_time() {
  Outcome o;
  const auto s = default_scenario();
  const auto runs = run_provisioning(s);
  o.add(check_provisioning(s, runs));
  o.require(runs.size() == 40, std::to_string(runs.size()) + " runs over two profiles");
  return o;
}

Outcome downtime_accuracy() {
  Outcome o;
  const auto s = default_scenario();
  const auto rows = run_downtime(s);
  o.add(check_downtime(s, rows));
  o.require(rows.size() == 10, std::to_string(rows.size()) + " windows");
  return o;
}

Outcome e2e_structure() {
  Outcome o;
  const auto s = default_scenario();
  const auto runs = run_e2e(s);
  o.add(check_e2e(s, runs));
  o.require(runs.size() == 5, std::to_string(runs.size()) + " runs");
  return o;
}

Outcome scaling_separation() {
  Outcome o;
  const auto s = default_scenario();
  const auto r = run_scaling(s);
  o.add(check_scaling(s, r));
  if (!r) return o;
  o.require(testing::replicas_non_decreasing(r->with.replica_trace), "replica trace non-decreasing");
  const auto logged = testing::logged_scale_outs(r->with.events);
  o.require(logged == testing::expected_scale_outs(r->with.events, s.scaling->ramp.policy),
            std::to_string(logged.size()) + " scale-outs, exactly where the predicate fires");
  o.require(testing::logged_scale_outs(r->without.events).empty(), "no scale-out with scaling off");
  return o;
}

Outcome chain_resolution() {
  Outcome o;
  std::mt19937_64 rng(20240);
  const auto nodes = vgw::all_descriptors();
  std::size_t pairs = 0, agree = 0;
  for (int g = 0; g < 200; ++g) {
    const auto images = testing::random_catalog(rng, 14);
    store::VnfStore st;
    for (const auto& img : images) st.register_image(img);
    for (const auto& from : nodes) {
      for (const auto& to : nodes) {
        ++pairs;
        const auto got = st.resolve_chain(from, to);
        const auto want = testing::brute_force_chain(images, from, to);
        bool same = got.has_value() == want.has_value();
        if (same && got) {
          std::vector<std::string> ids;
          for (const auto& img : *got) ids.push_back(img.image_id);
          same = ids == *want;
        }
        agree += same;
      }
    }
  }
  o.require(agree == pairs, std::to_string(agree) + "/" + std::to_string(pairs) + " pairs over 200 graphs, " +
                                std::to_string(nodes.size()) + " descriptors");
  return o;
}

Outcome golden_vectors() {
  using namespace dataplane;
  Outcome o;
  const auto vectors = testing::run_golden_vectors();
  std::size_t ok = 0;
  for (const auto& v : vectors) {
    ok += v.pass;
    if (!v.pass) o.require(false, v.name + ": " + v.detail);
  }
  o.require(vectors.size() == 12 && ok == 12, std::to_string(ok) + "/" + std::to_string(vectors.size()) + " vectors");
  std::mt19937_64 rng(2024);
  int equivalent = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto ms = testing::random_readings(rng);
    equivalent += info_model_convert_up(encode_sunspot(ms), DeviceBrand::Sunspot) ==
                  info_model_convert_up(encode_advanticsys(ms), DeviceBrand::Advanticsys);
  }
  o.require(equivalent == 1000, std::to_string(equivalent) + "/1000 readings brand-equivalent");
  return o;
}

Outcome control_conformance() {
  using sim::Phase;
  Outcome o;
  {
    testing::HttpHarness h;
    std::size_t ok = 0;
    const auto cases = testing::status_matrix();
    for (const auto& c : cases) {
      auto r = h.send(c.verb, c.path, c.body);
      const bool hit = r && r->status == c.status;
      ok += hit;
      if (!hit) o.require(false, c.verb + " " + c.path + " -> " + (r ? std::to_string(r->status) : "no reply"));
    }
    o.require(ok == cases.size(), std::to_string(ok) + "/" + std::to_string(cases.size()) + " listed operations");
    const auto before = h.snapshot();
    std::size_t rejected = 0;
    const auto unlisted = testing::unlisted_mutations();
    for (const auto& [verb, path] : unlisted) {
      auto r = h.send(verb, path, testing::kSrJson);
      rejected += r && (r->status == 404 || r->status == 405);
    }
    o.require(rejected == unlisted.size() && h.snapshot() == before,
              std::to_string(rejected) + "/" + std::to_string(unlisted.size()) + " unlisted mutations rejected");
    std::set<std::pair<std::string, std::string>> mutating;
    for (const auto* router : {&h.f.provider.router(), &h.f.gateway.router()}) {
      for (const auto& [verb, path] : router->routes()) {
        if (verb != "GET") mutating.insert({verb, path});
      }
    }
    o.require(mutating.size() == 7, std::to_string(mutating.size()) + " mutating routes registered");
  }
  {
    testing::ControlFixture f;
    auto app = f.app("wildfire");
    app->submit();
    f.loop.run();
    const std::vector<Phase> expected{Phase::ServiceRequest, Phase::OssQuery,     Phase::VnfRequest, Phase::StoreLookup,
                                      Phase::Mano,           Phase::Availability, Phase::ServiceStart};
    const bool ordered = app->request_id() && testing::phase_sequence(f.log.for_ref(*app->request_id())) == expected;
    o.require(ordered, "happy path follows the signaling order");
  }
  {
    testing::ControlFixture f(testing::ControlFixture::fixed_migration(), false);
    auto app = f.app("wildfire", 0);
    app->submit();
    f.loop.run();
    bool negative = false;
    for (const auto& e : f.log.for_ref("sr-1")) {
      negative |= e.phase == Phase::Availability && e.detail.is_object() && e.detail.value("available", true) == false;
    }
    o.require(negative, "unavailable path sends the negative notification");
    o.require(!touches_mano(f.log.events()), "unavailable path has no MANO events");
  }
  return o;
}

Outcome determinism() {
  Outcome o;
  auto s = default_scenario();
  auto log_of = [&](GatewayMode m) {
    Testbed t(s, m, s.seed);
    t.run();
    std::ostringstream os;
    t.log().write_jsonl(os);
    return os.str();
  };
  const auto a = log_of(GatewayMode::Virtualized);
  const auto b = log_of(GatewayMode::Virtualized);
  o.require(!a.empty() && a == b, "virtualized event logs identical (" + std::to_string(a.size()) + " bytes)");
  o.require(log_of(GatewayMode::Baseline) == log_of(GatewayMode::Baseline), "baseline event logs identical");
  s.provisioning->runs = 3;
  s.e2e->runs = 1;
  const auto ra = summary_json(run_all(s)).dump();
  const auto rb = summary_json(run_all(s)).dump();
  o.require(ra == rb, "reports identical");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"provisioning time", provisioning_time},      {"downtime measurement", downtime_accuracy},
      {"e2e delay structure", e2e_structure},        {"scaling separation", scaling_separation},
      {"chain resolution oracle", chain_resolution}, {"conversion golden vectors", golden_vectors},
      {"control-plane conformance", control_conformance}, {"determinism", determinism},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("threw: ") + e.what());
    }
    all = all && o.passed;
    std::printf("%s criterion %zu (%s)\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str());
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
  }
  return all ? 0 : 1;
}
