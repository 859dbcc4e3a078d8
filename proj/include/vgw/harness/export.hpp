#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include "vgw/harness/experiments.hpp"

namespace vgw::harness {

// Every writer emits its header even when there are no rows, and output is a
// pure function of the report.

inline void write_provisioning_csv(std::ostream& os, const std::vector<ProvisioningRun>& runs) {
  os << "profile,run,seed,provisioningMs,recomputedMs\n";
  for (const auto& r : runs) {
    os << r.profile << ',' << r.run + 1 << ',' << r.seed << ',' << fmt(r.reported_ms) << ',' << fmt(r.recomputed_ms) << '\n';
  }
}

inline void write_downtime_csv(std::ostream& os, const std::vector<DowntimeRow>& rows) {
  os << "sample,position,imageId,configuredMs,probeMeasuredMs,logMeasuredMs\n";
  for (const auto& r : rows) {
    os << r.sample << ',' << r.position << ',' << r.image_id << ',' << fmt(r.configured_ms) << ',' << fmt(r.probe_ms)
       << ',' << fmt(r.log_ms) << '\n';
  }
}

inline void write_e2e_csv(std::ostream& os, const std::vector<E2eSample>& samples) {
  os << "sample,applicationId,virtualizedColdMs,virtualizedWarmMs,baselineMs\n";
  for (const auto& s : samples) {
    os << s.sample << ',' << s.app << ',' << fmt(s.cold_ms) << ',' << fmt(s.warm_ms) << ',' << fmt(s.baseline_ms) << '\n';
  }
}

inline void write_scaling_csv(std::ostream& os, const std::optional<ScalingOutcome>& o) {
  os << "load,meanResponseMs_scaling,meanResponseMs_noscaling\n";
  if (!o) return;
  const auto with = o->with.by_load();
  const auto without = o->without.by_load();
  for (std::size_t i = 0; i < with.size() && i < without.size(); ++i) {
    os << with[i].first << ',' << fmt(with[i].second) << ',' << fmt(without[i].second) << '\n';
  }
}

inline void write_replicas_csv(std::ostream& os, const std::optional<ScalingOutcome>& o) {
  os << "timestampMs,chainId,position,replicas\n";
  if (!o) return;
  for (const auto& r : o->with.replica_trace) {
    os << fmt(to_ms(r.at)) << ',' << r.chain_id << ',' << r.position << ',' << r.replicas << '\n';
  }
}

inline Json summary_json(const Report& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  Json j{{"scenario", r.scenario.name}, {"seed", r.scenario.seed}, {"passed", r.passed()}, {"checks", checks}};
  Json prov = Json::object();
  if (r.scenario.provisioning) {
    for (const auto& p : r.scenario.provisioning->profiles) {
      std::vector<double> xs;
      for (const auto& run : r.provisioning) {
        if (run.profile == p.name) xs.push_back(run.recomputed_ms);
      }
      if (xs.empty()) continue;
      prov[p.name] = {{"runs", xs.size()},
                      {"meanMs", mean_of(xs)},
                      {"minMs", *std::min_element(xs.begin(), xs.end())},
                      {"maxMs", *std::max_element(xs.begin(), xs.end())}};
    }
  }
  j["provisioning"] = prov;
  Json e2e = Json::array();
  for (const auto& s : e2e_samples(r.scenario, r.e2e)) {
    e2e.push_back({{"sample", s.sample}, {"applicationId", s.app}, {"coldMs", s.cold_ms}, {"warmMs", s.warm_ms},
                   {"baselineMs", s.baseline_ms}});
  }
  j["e2e"] = e2e;
  return j;
}

/// Writes every artifact of a report into `dir`; throws IoError.
inline void export_report(const Report& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  auto open = [&](const char* name) {
    std::ofstream os(dir / name, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorCode::IoError, "cannot write " + (dir / name).string());
    return os;
  };
  { auto os = open("fig4a.csv"); write_provisioning_csv(os, r.provisioning); }
  { auto os = open("fig4c.csv"); write_downtime_csv(os, r.downtime); }
  { auto os = open("fig5a.csv"); write_e2e_csv(os, e2e_samples(r.scenario, r.e2e)); }
  { auto os = open("fig5b.csv"); write_scaling_csv(os, r.scaling); }
  { auto os = open("replicas.csv"); write_replicas_csv(os, r.scaling); }
  { auto os = open("migration.csv"); nfvi::write_migration_csv(os, r.migrations); }
  { auto os = open("summary.json"); os << summary_json(r).dump(2) << '\n'; }
  {
    auto os = open("events.jsonl");
    for (const auto& e : r.events) os << sim::to_json_line(e).dump() << '\n';
  }
}

}  // namespace vgw::harness
