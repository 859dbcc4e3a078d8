#pragma once

#include <algorithm>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vgw/core/error.hpp"
#include "vgw/core/json.hpp"
#include "vgw/core/time.hpp"

namespace vgw::sim {

/// Signaling phase a control-plane event belongs to, in procedure order.
enum class Phase : std::uint8_t {
  None,
  ServiceRequest,
  OssQuery,
  VnfRequest,
  StoreLookup,
  Mano,
  Availability,
  ServiceStart,
};

inline constexpr EnumNames<Phase, 8> kPhaseNames{{{
    {Phase::None, ""},
    {Phase::ServiceRequest, "SERVICE_REQUEST"},
    {Phase::OssQuery, "OSS_QUERY"},
    {Phase::VnfRequest, "VNF_REQUEST"},
    {Phase::StoreLookup, "STORE_LOOKUP"},
    {Phase::Mano, "MANO"},
    {Phase::Availability, "AVAILABILITY"},
    {Phase::ServiceStart, "SERVICE_START"},
}}};

constexpr std::string_view to_string(Phase p) { return kPhaseNames.name(p); }

struct Event {
  std::uint64_t seq = 0;
  SimTime time{};
  std::string entity;      // e.g. "LocalController/vwsan-1", "vnf-3"
  std::string transition;  // e.g. "POST /VNFsRequest", "RUNNING"
  std::string ref;         // correlated service request, empty if none
  Phase phase = Phase::None;
  Json detail = Json::object();
};

inline Json to_json_line(const Event& e) {
  Json j = {{"seq", e.seq},
            {"timestampMs", to_ms(e.time)},
            {"entity", e.entity},
            {"transition", e.transition}};
  if (!e.ref.empty()) j["ref"] = e.ref;
  if (e.phase != Phase::None) j["phase"] = std::string(to_string(e.phase));
  if (!e.detail.empty()) j["detail"] = e.detail;
  return j;
}

/// Append-only, totally ordered log of every state transition in a run.
class EventLog {
 public:
  using Listener = std::function<void(const Event&)>;

  const Event& record(SimTime t, std::string entity, std::string transition,
                      std::string ref = {}, Phase phase = Phase::None,
                      Json detail = Json::object()) {
    std::vector<Listener> listeners;
    {
      std::lock_guard lock(mutex_);
      if (!events_.empty() && t < events_.back().time) {
        throw std::logic_error("event log timestamp went backwards");
      }
      Event e;
      e.seq = events_.size();
      e.time = t;
      e.entity = std::move(entity);
      e.transition = std::move(transition);
      e.ref = std::move(ref);
      e.phase = phase;
      e.detail = std::move(detail);
      events_.push_back(std::move(e));
      listeners = listeners_;
    }
    const Event& stored = events_.back();
    for (const auto& l : listeners) l(stored);
    return stored;
  }

  void subscribe(Listener l) {
    std::lock_guard lock(mutex_);
    listeners_.push_back(std::move(l));
  }

  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }

  std::vector<Event> for_ref(const std::string& ref) const {
    std::vector<Event> out;
    std::copy_if(events_.begin(), events_.end(), std::back_inserter(out),
                 [&](const Event& e) { return e.ref == ref; });
    return out;
  }

  void write_jsonl(std::ostream& os) const {
    for (const auto& e : events_) os << to_json_line(e).dump() << '\n';
  }

  std::string to_jsonl() const {
    std::string out;
    for (const auto& e : events_) {
      out += to_json_line(e).dump();
      out += '\n';
    }
    return out;
  }

  void save_jsonl(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::IoError, "cannot open " + path);
    write_jsonl(f);
    if (!f) fail(ErrorCode::IoError, "write failed for " + path);
  }

 private:
  mutable std::mutex mutex_;
  std::vector<Event> events_;
  std::vector<Listener> listeners_;
};

}  // namespace vgw::sim
