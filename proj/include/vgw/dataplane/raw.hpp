#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "vgw/core/error.hpp"
#include "vgw/core/types.hpp"
#include "vgw/dataplane/decimal.hpp"

namespace vgw::dataplane {

using Bytes = std::string;

struct RawMeasurement {
  std::string sensor_id;
  DeviceBrand brand = DeviceBrand::Sunspot;
  Quantity quantity = Quantity::Temperature;
  Decimal value;
  std::string unit;
  std::uint32_t timestamp_s = 0;

  friend bool operator==(const RawMeasurement&, const RawMeasurement&) = default;
};

namespace raw_detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

inline std::uint32_t parse_epoch(const std::string& s) {
  if (s.empty() || s.size() > 10 || s.find_first_not_of("0123456789") != std::string::npos) {
    fail(ErrorCode::ParseError, "bad epoch seconds '" + s + "'");
  }
  const auto v = std::stoull(s);
  if (v > std::numeric_limits<std::uint32_t>::max()) fail(ErrorCode::ParseError, "epoch out of range");
  return static_cast<std::uint32_t>(v);
}

inline void check_unit(const RawMeasurement& m) {
  if (m.unit != unit_for(m.quantity)) {
    fail(ErrorCode::ParseError,
         "unit '" + m.unit + "' does not match " + std::string(to_string(m.quantity)));
  }
}

}  // namespace raw_detail

// ---- SUNSPOT: one "sensorId|QUANTITY|value|unit|epochSeconds" per line ----

inline Bytes encode_sunspot(const std::vector<RawMeasurement>& ms) {
  Bytes out;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (i) out += '\n';
    const auto& m = ms[i];
    out += m.sensor_id + '|' + std::string(to_string(m.quantity)) + '|' + m.value.text() + '|' + m.unit + '|' +
           std::to_string(m.timestamp_s);
  }
  return out;
}

inline std::vector<RawMeasurement> decode_sunspot(const Bytes& raw) {
  if (raw.empty()) fail(ErrorCode::ParseError, "empty SUNSPOT payload");
  std::vector<RawMeasurement> out;
  for (const auto& line : raw_detail::split(raw, '\n')) {
    auto f = raw_detail::split(line, '|');
    if (f.size() != 5) fail(ErrorCode::ParseError, "SUNSPOT line needs 5 fields: '" + line + "'");
    RawMeasurement m;
    m.brand = DeviceBrand::Sunspot;
    m.sensor_id = f[0];
    if (m.sensor_id.empty()) fail(ErrorCode::ParseError, "empty sensor id");
    auto q = kQuantityNames.parse(f[1]);
    if (!q) fail(ErrorCode::ParseError, "unknown quantity '" + f[1] + "'");
    m.quantity = *q;
    auto v = Decimal::parse(f[2]);
    if (!v) fail(ErrorCode::ParseError, "bad value '" + f[2] + "'");
    m.value = *v;
    m.unit = f[3];
    m.timestamp_s = raw_detail::parse_epoch(f[4]);
    raw_detail::check_unit(m);
    out.push_back(std::move(m));
  }
  return out;
}

// ---- ADVANTICSYS: TLV records, five per measurement ----

enum class TlvType : std::uint8_t { SensorId = 0x01, Quantity = 0x02, Value = 0x03, Unit = 0x04, Epoch = 0x05 };

constexpr std::uint8_t quantity_code(Quantity q) { return static_cast<std::uint8_t>(q) + 1; }

inline Bytes encode_advanticsys(const std::vector<RawMeasurement>& ms) {
  Bytes out;
  auto put = [&](TlvType t, const std::string& v) {
    if (v.size() > 255) fail(ErrorCode::ParseError, "TLV value longer than 255 bytes");
    out += static_cast<char>(t);
    out += static_cast<char>(v.size());
    out += v;
  };
  for (const auto& m : ms) {
    put(TlvType::SensorId, m.sensor_id);
    put(TlvType::Quantity, std::string(1, static_cast<char>(quantity_code(m.quantity))));
    put(TlvType::Value, m.value.text());
    put(TlvType::Unit, m.unit);
    std::string be(4, '\0');
    for (int i = 0; i < 4; ++i) be[i] = static_cast<char>((m.timestamp_s >> (24 - 8 * i)) & 0xFF);
    put(TlvType::Epoch, be);
  }
  return out;
}

inline std::vector<RawMeasurement> decode_advanticsys(const Bytes& raw) {
  if (raw.empty()) fail(ErrorCode::ParseError, "empty ADVANTICSYS payload");
  std::vector<RawMeasurement> out;
  std::size_t pos = 0;
  while (pos < raw.size()) {
    RawMeasurement m;
    m.brand = DeviceBrand::Advanticsys;
    for (std::uint8_t expect = 0x01; expect <= 0x05; ++expect) {
      if (pos + 2 > raw.size()) fail(ErrorCode::ParseError, "truncated TLV header");
      const auto type = static_cast<std::uint8_t>(raw[pos]);
      const auto len = static_cast<std::uint8_t>(raw[pos + 1]);
      if (type != expect) fail(ErrorCode::ParseError, "TLV type " + std::to_string(type) + " out of order");
      if (pos + 2 + len > raw.size()) fail(ErrorCode::ParseError, "truncated TLV value");
      const std::string v = raw.substr(pos + 2, len);
      pos += 2 + len;
      switch (static_cast<TlvType>(type)) {
        case TlvType::SensorId:
          if (v.empty()) fail(ErrorCode::ParseError, "empty sensor id");
          m.sensor_id = v;
          break;
        case TlvType::Quantity: {
          const auto code = len == 1 ? static_cast<std::uint8_t>(v[0]) : 0;
          if (code < 1 || code > 5) fail(ErrorCode::ParseError, "bad quantity code");
          m.quantity = static_cast<Quantity>(code - 1);
          break;
        }
        case TlvType::Value: {
          auto d = Decimal::parse(v);
          if (!d) fail(ErrorCode::ParseError, "bad value '" + v + "'");
          m.value = *d;
          break;
        }
        case TlvType::Unit:
          m.unit = v;
          break;
        case TlvType::Epoch:
          if (len != 4) fail(ErrorCode::ParseError, "epoch must be 4 bytes");
          m.timestamp_s = 0;
          for (int i = 0; i < 4; ++i) m.timestamp_s = (m.timestamp_s << 8) | static_cast<std::uint8_t>(v[i]);
          break;
      }
    }
    raw_detail::check_unit(m);
    out.push_back(std::move(m));
  }
  return out;
}

inline Bytes encode_raw(DeviceBrand brand, const std::vector<RawMeasurement>& ms) {
  switch (brand) {
    case DeviceBrand::Sunspot: return encode_sunspot(ms);
    case DeviceBrand::Advanticsys: return encode_advanticsys(ms);
    case DeviceBrand::LegoNxt: break;
  }
  fail(ErrorCode::UnsupportedConversion, "robots emit no measurements");
}

inline std::vector<RawMeasurement> decode_raw(DeviceBrand brand, const Bytes& raw) {
  switch (brand) {
    case DeviceBrand::Sunspot: return decode_sunspot(raw);
    case DeviceBrand::Advanticsys: return decode_advanticsys(raw);
    case DeviceBrand::LegoNxt: break;
  }
  fail(ErrorCode::UnsupportedConversion, "robots emit no measurements");
}

}  // namespace vgw::dataplane
