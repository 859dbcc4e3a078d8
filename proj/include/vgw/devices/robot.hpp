#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vgw/dataplane/lcp.hpp"
#include "vgw/sim/event_log.hpp"
#include "vgw/sim/event_loop.hpp"

namespace vgw::devices {

enum class RobotState : std::uint8_t { Idle, Moving, Grabbed, Deployed };

inline constexpr EnumNames<RobotState, 4> kRobotStateNames{{{
    {RobotState::Idle, "IDLE"},
    {RobotState::Moving, "MOVING"},
    {RobotState::Grabbed, "GRABBED"},
    {RobotState::Deployed, "DEPLOYED"},
}}};

constexpr std::string_view to_string(RobotState s) { return kRobotStateNames.name(s); }

struct RobotConfig {
  std::string robot_id = "nxt-1";
  SimDuration command_latency = from_ms(200);
};

/// One line of the robot log. State changes carry the sequence number of
/// the accepted command that caused them.
struct RobotEvent {
  SimTime time{};
  std::string kind;  // ACCEPTED, REJECTED, STATE, REPLY
  std::uint64_t command_seq = 0;
  std::string command;
  std::string detail;  // rejection reason, or the new state
};

inline Json to_json_line(const std::string& robot, const RobotEvent& e) {
  return {{"t", to_us(e.time)}, {"robot", robot}, {"kind", e.kind}, {"cmd", e.command_seq},
          {"command", e.command}, {"detail", e.detail}};
}

/// Lego-class robot driven by framed LCP commands. Commands execute one at a
/// time; each is judged on arrival against the state the queue will leave.
///
/// grab:   IDLE -> MOVING at start, GRABBED after the command latency
/// deploy: GRABBED -> DEPLOYED after the command latency
/// stop:   any -> IDLE after the command latency
/// status: replies with the state at start
class RobotEmulator {
 public:
  using StateFn = std::function<void(RobotState, SimTime, std::uint64_t command_seq)>;
  using ReplyFn = std::function<void(RobotState, SimTime)>;

  RobotEmulator(sim::EventLoop& loop, sim::EventLog& log, RobotConfig config = {})
      : loop_(loop), log_(log), config_(std::move(config)) {}

  const RobotConfig& config() const { return config_; }
  const std::string& id() const { return config_.robot_id; }
  RobotState state() const { return state_; }
  const std::vector<RobotEvent>& events() const { return events_; }

  void on_state(StateFn fn) { on_state_ = std::move(fn); }
  void on_reply(ReplyFn fn) { on_reply_ = std::move(fn); }

  /// Handles a frame arriving now. Returns the error code when rejected.
  std::optional<ErrorCode> receive(const dataplane::Bytes& frame) {
    const auto now = loop_.now();
    const auto seq = ++seq_;
    dataplane::LcpCommand cmd;
    std::string name;
    try {
      cmd = dataplane::decode_lcp(dataplane::unframe_lcp(frame));
      name = std::string(dataplane::lcp_by_opcode(cmd.opcode)->command);
    } catch (const Error& e) {
      return reject(seq, "?", e.code());
    }

    const SimTime start = std::max(now, busy_until_);
    const SimTime done = start + config_.command_latency;
    if (name == "grab") {
      if (projected_ != RobotState::Idle) return reject(seq, name, ErrorCode::RobotBusy);
      accept(seq, name);
      change_at(start, RobotState::Moving, seq, name);
      change_at(done, RobotState::Grabbed, seq, name);
      projected_ = RobotState::Grabbed;
    } else if (name == "deploy") {
      if (projected_ != RobotState::Grabbed) return reject(seq, name, ErrorCode::RobotBusy);
      accept(seq, name);
      change_at(done, RobotState::Deployed, seq, name);
      projected_ = RobotState::Deployed;
    } else if (name == "stop") {
      accept(seq, name);
      if (projected_ != RobotState::Idle) change_at(done, RobotState::Idle, seq, name);
      projected_ = RobotState::Idle;
    } else {
      accept(seq, name);
      loop_.post_at(done, [this, seq, start_state = projected_] {
        record({loop_.now(), "REPLY", seq, "status", std::string(to_string(start_state))});
        if (on_reply_) on_reply_(start_state, loop_.now());
      });
    }
    busy_until_ = done;
    return std::nullopt;
  }

  void write_jsonl(std::ostream& os) const {
    for (const auto& e : events_) os << to_json_line(config_.robot_id, e).dump() << '\n';
  }

 private:
  std::optional<ErrorCode> reject(std::uint64_t seq, const std::string& name, ErrorCode code) {
    record({loop_.now(), "REJECTED", seq, name, std::string(to_string(code))});
    return code;
  }

  void accept(std::uint64_t seq, const std::string& name) { record({loop_.now(), "ACCEPTED", seq, name, {}}); }

  void change_at(SimTime at, RobotState to, std::uint64_t seq, const std::string& name) {
    loop_.post_at(at, [this, to, seq, name] {
      state_ = to;
      record({loop_.now(), "STATE", seq, name, std::string(to_string(to))});
      if (on_state_) on_state_(to, loop_.now(), seq);
    });
  }

  void record(RobotEvent e) {
    log_.record(e.time, config_.robot_id, e.kind == "STATE" ? e.detail : e.kind, {}, sim::Phase::None,
                {{"cmd", e.command_seq}, {"command", e.command}, {"detail", e.detail}});
    events_.push_back(std::move(e));
  }

  sim::EventLoop& loop_;
  sim::EventLog& log_;
  RobotConfig config_;
  RobotState state_ = RobotState::Idle;
  RobotState projected_ = RobotState::Idle;
  SimTime busy_until_{};
  std::uint64_t seq_ = 0;
  std::vector<RobotEvent> events_;
  StateFn on_state_;
  ReplyFn on_reply_;
};

}  // namespace vgw::devices
