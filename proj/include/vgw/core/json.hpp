#pragma once

#include <json.hpp>
#include <string>

#include "vgw/core/error.hpp"
#include "vgw/core/types.hpp"

namespace vgw {

using Json = nlohmann::json;

namespace json_detail {

inline const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    fail(ErrorCode::MalformedRequest, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

inline std::string require_string(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_string()) fail(ErrorCode::MalformedRequest, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

inline std::int64_t require_int(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number_integer()) {
    fail(ErrorCode::MalformedRequest, std::string("field '") + key + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

inline const Json& require_array(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_array()) fail(ErrorCode::MalformedRequest, std::string("field '") + key + "' must be an array");
  return v;
}

}  // namespace json_detail

inline void to_json(Json& j, Protocol p) { j = std::string(to_string(p)); }
inline void to_json(Json& j, InfoModel m) { j = std::string(to_string(m)); }
inline void to_json(Json& j, DeviceBrand b) { j = std::string(to_string(b)); }
inline void to_json(Json& j, Quantity q) { j = std::string(to_string(q)); }
inline void to_json(Json& j, Domain d) { j = std::string(to_string(d)); }
inline void to_json(Json& j, Direction d) { j = std::string(to_string(d)); }

inline void from_json(const Json& j, Protocol& p) {
  if (!j.is_string()) fail(ErrorCode::MalformedRequest, "protocol must be a string");
  p = kProtocolNames.parse_or_throw(j.get<std::string>(), "protocol");
}
inline void from_json(const Json& j, InfoModel& m) {
  if (!j.is_string()) fail(ErrorCode::MalformedRequest, "infoModel must be a string");
  m = kInfoModelNames.parse_or_throw(j.get<std::string>(), "infoModel");
}
inline void from_json(const Json& j, DeviceBrand& b) {
  if (!j.is_string()) fail(ErrorCode::MalformedRequest, "brand must be a string");
  b = kBrandNames.parse_or_throw(j.get<std::string>(), "brand");
}
inline void from_json(const Json& j, Quantity& q) {
  if (!j.is_string()) fail(ErrorCode::MalformedRequest, "quantity must be a string");
  q = kQuantityNames.parse_or_throw(j.get<std::string>(), "quantity");
}
inline void from_json(const Json& j, Domain& d) {
  if (!j.is_string()) fail(ErrorCode::MalformedRequest, "domain must be a string");
  d = kDomainNames.parse_or_throw(j.get<std::string>(), "domain");
}

inline void from_json(const Json& j, Direction& d) {
  if (!j.is_string()) fail(ErrorCode::MalformedRequest, "direction must be a string");
  d = kDirectionNames.parse_or_throw(j.get<std::string>(), "direction");
}

inline void to_json(Json& j, const InterfaceDescriptor& d) {
  j = Json{{"protocol", d.protocol}, {"infoModel", d.info_model}};
}

inline void from_json(const Json& j, InterfaceDescriptor& d) {
  json_detail::require(j, "protocol").get_to(d.protocol);
  json_detail::require(j, "infoModel").get_to(d.info_model);
  if (!d.valid()) {
    fail(ErrorCode::MalformedRequest, "incompatible interface descriptor " + to_string(d));
  }
}

}  // namespace vgw
