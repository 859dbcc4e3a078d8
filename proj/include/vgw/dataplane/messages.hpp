#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>

#include "vgw/dataplane/raw.hpp"

namespace vgw::dataplane {

enum class CoapType : std::uint8_t { Con, Non };
enum class CoapCode : std::uint8_t { Get, Post, Content205 };

struct CoapMessage {
  CoapType type = CoapType::Non;
  CoapCode code = CoapCode::Content205;
  std::uint16_t message_id = 0;
  std::string uri_path;
  Bytes payload;

  friend bool operator==(const CoapMessage&, const CoapMessage&) = default;
};

enum class HttpKind : std::uint8_t { Request, Response };
enum class HttpMethod : std::uint8_t { Get, Post };

struct HttpMessage {
  HttpKind kind = HttpKind::Request;
  HttpMethod method = HttpMethod::Post;
  int status = 0;
  std::string uri;
  std::map<std::string, std::string> headers;
  Bytes body;

  std::string content_type() const {
    auto it = headers.find("Content-Type");
    return it == headers.end() ? std::string() : it->second;
  }

  friend bool operator==(const HttpMessage&, const HttpMessage&) = default;
};

/// Bytes queued to the robot transport, length prefix included.
struct LcpFrame {
  Bytes bytes;

  friend bool operator==(const LcpFrame&, const LcpFrame&) = default;
};

using Message = std::variant<CoapMessage, HttpMessage, LcpFrame>;

inline constexpr const char* kTextPlain = "text/plain";
inline constexpr const char* kSenmlJson = "application/senml+json";
inline constexpr const char* kOctetStream = "application/octet-stream";

constexpr const char* media_type(InfoModel m) {
  switch (m) {
    case InfoModel::RawSunspot:
    case InfoModel::RawAdvanticsys: return kTextPlain;
    case InfoModel::SenmlJson: return kSenmlJson;
    case InfoModel::LcpCmd: return kOctetStream;
  }
  return kOctetStream;
}

}  // namespace vgw::dataplane
