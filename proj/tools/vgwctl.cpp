// vgwctl: run a scenario, validate one, print the built-in one, or trace the
// signaling of a single service request.

#include <CLI11.hpp>
#include <httplib.h>

#include <iostream>

#include "vgw/control/http_server.hpp"
#include "vgw/harness/export.hpp"

using namespace vgw;
using namespace vgw::harness;

namespace {

Scenario scenario_or_default(const std::string& path) { return path.empty() ? default_scenario() : load_scenario(path); }

void print_event(const sim::Event& e) {
  std::printf("%10.1f ms  %-15s %-40s %s\n", to_ms(e.time), std::string(sim::to_string(e.phase)).c_str(), e.entity.c_str(),
              e.transition.c_str());
}

int cmd_run(const std::string& path, const std::string& out, std::optional<std::uint64_t> seed, double realtime) {
  auto s = load_scenario(path);
  if (seed) s.seed = *seed;
  const auto report = run_all(s, realtime);
  export_report(report, out);
  for (const auto& c : report.checks) {
    std::printf("%s  %-24s %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
  }
  std::printf("artifacts written to %s\n", out.c_str());
  return report.passed() ? 0 : 1;
}

int cmd_validate(const std::string& path) {
  const auto s = load_scenario(path);
  std::printf("%s: ok (%zu sensors, %zu robots, %zu applications)\n", s.name.c_str(), s.sensors.size(), s.robots.size(),
              s.applications.size());
  return 0;
}

/// Signals one application's request and prints every phase event of it.
/// With `over_http` the service request enters through the REST frontend.
int cmd_demo(const std::string& path, const std::string& app, bool over_http) {
  auto s = scenario_or_default(path);
  Testbed t(s, GatewayMode::Virtualized, s.seed);
  if (over_http) {
    control::HttpFrontend http(t.loop());
    http.mount("/VNFsRequest", t.gateway().router());
    http.mount("/", t.provider().router());
    httplib::Client client("127.0.0.1", http.start());
    const AppSpec* app_spec = nullptr;
    for (const auto& a : s.applications) {
      if (a.id == app) app_spec = &a;
    }
    if (!app_spec) throw Error(ErrorCode::NotFound, "no application " + app);
    const Json body{{"applicationId", app},
                    {"northbound", Json::array({Json(Scenario::northbound())})},
                    {"qos", Json(app_spec->qos)}};
    auto res = client.Post("/ApplicationsServiceRequests", body.dump(), "application/json");
    if (!res) throw Error(ErrorCode::IoError, "HTTP request failed");
    const auto location = res->get_header_value("Location");
    std::printf("POST /ApplicationsServiceRequests -> %d %s\n", res->status, location.c_str());
    auto status = client.Get(location);
    if (!status) throw Error(ErrorCode::IoError, "HTTP request failed");
    std::printf("GET %s -> %d %s\n", location.c_str(), status->status, status->body.c_str());
    http.stop();
  } else {
    t.run();
  }
  const auto sr = service_request_of(t.log().events(), app);
  if (!sr) throw Error(ErrorCode::NotFound, "application " + app + " sent no service request");
  for (const auto& e : t.log().for_ref(*sr)) {
    if (e.phase != sim::Phase::None && !e.entity.starts_with("vm-")) print_event(e);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"virtual gateway testbed"};
  cli.require_subcommand(1);

  std::string path;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  double realtime = 0;
  auto* run = cli.add_subcommand("run", "run every experiment of a scenario and export the artifacts");
  run->add_option("scenario", path, "scenario JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "output directory");
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--realtime", realtime, "pace the first virtualized run at FACTOR x wall clock")->check(CLI::PositiveNumber);

  auto* validate = cli.add_subcommand("validate", "parse and validate a scenario");
  validate->add_option("scenario", path, "scenario JSON")->required()->check(CLI::ExistingFile);

  std::string app = "wildfire";
  bool over_http = false;
  auto* demo = cli.add_subcommand("signaling-demo", "print the signaling phases of one service request");
  demo->add_option("--scenario", path, "scenario JSON (built-in testbed when omitted)");
  demo->add_option("--app", app, "application id");
  demo->add_flag("--http", over_http, "submit the request through the REST frontend");

  auto* dump = cli.add_subcommand("default-scenario", "print the built-in testbed scenario as JSON");

  CLI11_PARSE(cli, argc, argv);
  try {
    if (*run) return cmd_run(path, out, seed, realtime);
    if (*validate) return cmd_validate(path);
    if (*demo) return cmd_demo(path, app, over_http);
    if (*dump) std::cout << scenario_to_json(default_scenario()).dump(2) << '\n';
  } catch (const Error& e) {
    std::fprintf(stderr, "vgwctl: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "vgwctl: %s\n", e.what());
    return 2;
  }
  return 0;
}
