#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "vgw/core/error.hpp"
#include "vgw/dataplane/raw.hpp"

namespace vgw::dataplane {

struct LcpCommandSpec {
  std::string_view command;
  std::uint8_t opcode;
  bool expects_reply;
};

inline constexpr std::array<LcpCommandSpec, 4> kLcpCommands{{
    {"grab", 0x01, false},
    {"deploy", 0x02, false},
    {"stop", 0x03, false},
    {"status", 0x04, true},
}};

struct LcpCommand {
  std::uint8_t opcode = 0;
  Bytes args;
  bool expects_reply = false;

  friend bool operator==(const LcpCommand&, const LcpCommand&) = default;
};

inline const LcpCommandSpec* lcp_by_command(std::string_view command) {
  for (const auto& s : kLcpCommands) {
    if (s.command == command) return &s;
  }
  return nullptr;
}

inline const LcpCommandSpec* lcp_by_opcode(std::uint8_t opcode) {
  for (const auto& s : kLcpCommands) {
    if (s.opcode == opcode) return &s;
  }
  return nullptr;
}

/// Args carry the target name as ASCII.
inline LcpCommand make_lcp(std::string_view command, std::string_view target) {
  const auto* entry = lcp_by_command(command);
  if (!entry) fail(ErrorCode::UnknownCommand, "no LCP mapping for '" + std::string(command) + "'");
  return {entry->opcode, Bytes(target), entry->expects_reply};
}

/// Command body: opcode byte followed by args.
inline Bytes encode_lcp(const LcpCommand& c) { return static_cast<char>(c.opcode) + c.args; }

inline LcpCommand decode_lcp(const Bytes& body) {
  if (body.empty()) fail(ErrorCode::MissingBody, "empty LCP command");
  const auto opcode = static_cast<std::uint8_t>(body[0]);
  const auto* entry = lcp_by_opcode(opcode);
  if (!entry) fail(ErrorCode::UnknownCommand, "unknown LCP opcode " + std::to_string(opcode));
  return {opcode, body.substr(1), entry->expects_reply};
}

/// Frame: 2-byte little-endian length of the body, then the body.
inline Bytes frame_lcp(const Bytes& body) {
  if (body.empty()) fail(ErrorCode::MissingBody, "nothing to frame");
  if (body.size() > 0xFFFF) fail(ErrorCode::MalformedRequest, "LCP body exceeds 65535 bytes");
  Bytes out;
  out += static_cast<char>(body.size() & 0xFF);
  out += static_cast<char>((body.size() >> 8) & 0xFF);
  out += body;
  return out;
}

inline Bytes unframe_lcp(const Bytes& frame) {
  if (frame.size() < 2) fail(ErrorCode::ParseError, "LCP frame shorter than its prefix");
  const std::size_t len =
      static_cast<std::uint8_t>(frame[0]) | (static_cast<std::size_t>(static_cast<std::uint8_t>(frame[1])) << 8);
  if (frame.size() != len + 2) fail(ErrorCode::ParseError, "LCP frame length mismatch");
  return frame.substr(2);
}

}  // namespace vgw::dataplane
