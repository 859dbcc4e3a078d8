#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "vgw/core/enum_names.hpp"

namespace vgw {

enum class Protocol : std::uint8_t { Coap, Http, LcpTransport };

enum class InfoModel : std::uint8_t { RawSunspot, RawAdvanticsys, SenmlJson, LcpCmd };

enum class DeviceBrand : std::uint8_t { Sunspot, Advanticsys, LegoNxt };

enum class Quantity : std::uint8_t { Temperature, Humidity, Co2, WindSpeed, Rain };

enum class Domain : std::uint8_t { GatewayProvider, VwsanProvider };

enum class Direction : std::uint8_t { Uplink, Downlink };

inline constexpr EnumNames<Protocol, 3> kProtocolNames{{{
    {Protocol::Coap, "COAP"},
    {Protocol::Http, "HTTP"},
    {Protocol::LcpTransport, "LCP_TRANSPORT"},
}}};

inline constexpr EnumNames<InfoModel, 4> kInfoModelNames{{{
    {InfoModel::RawSunspot, "RAW_SUNSPOT"},
    {InfoModel::RawAdvanticsys, "RAW_ADVANTICSYS"},
    {InfoModel::SenmlJson, "SENML_JSON"},
    {InfoModel::LcpCmd, "LCP_CMD"},
}}};

inline constexpr EnumNames<DeviceBrand, 3> kBrandNames{{{
    {DeviceBrand::Sunspot, "SUNSPOT"},
    {DeviceBrand::Advanticsys, "ADVANTICSYS"},
    {DeviceBrand::LegoNxt, "LEGO_NXT"},
}}};

inline constexpr EnumNames<Quantity, 5> kQuantityNames{{{
    {Quantity::Temperature, "TEMPERATURE"},
    {Quantity::Humidity, "HUMIDITY"},
    {Quantity::Co2, "CO2"},
    {Quantity::WindSpeed, "WIND_SPEED"},
    {Quantity::Rain, "RAIN"},
}}};

inline constexpr EnumNames<Domain, 2> kDomainNames{{{
    {Domain::GatewayProvider, "GATEWAY_PROVIDER"},
    {Domain::VwsanProvider, "VWSAN_PROVIDER"},
}}};

inline constexpr EnumNames<Direction, 2> kDirectionNames{{{
    {Direction::Uplink, "UPLINK"},
    {Direction::Downlink, "DOWNLINK"},
}}};

constexpr std::string_view to_string(Direction d) { return kDirectionNames.name(d); }
constexpr std::string_view to_string(Protocol p) { return kProtocolNames.name(p); }
constexpr std::string_view to_string(InfoModel m) { return kInfoModelNames.name(m); }
constexpr std::string_view to_string(DeviceBrand b) { return kBrandNames.name(b); }
constexpr std::string_view to_string(Quantity q) { return kQuantityNames.name(q); }
constexpr std::string_view to_string(Domain d) { return kDomainNames.name(d); }

// Sensors feed the uplink, actuators are driven over the downlink.
constexpr bool is_actuator(DeviceBrand b) { return b == DeviceBrand::LegoNxt; }

/// UCUM unit each quantity is reported in.
constexpr std::string_view unit_for(Quantity q) {
  switch (q) {
    case Quantity::Temperature: return "Cel";
    case Quantity::Humidity: return "%RH";
    case Quantity::Co2: return "ppm";
    case Quantity::WindSpeed: return "m/s";
    case Quantity::Rain: return "mm";
  }
  return "";
}

/// SenML measurement name for a quantity.
constexpr std::string_view senml_name(Quantity q) {
  switch (q) {
    case Quantity::Temperature: return "temperature";
    case Quantity::Humidity: return "humidity";
    case Quantity::Co2: return "co2";
    case Quantity::WindSpeed: return "wind_speed";
    case Quantity::Rain: return "rain";
  }
  return "";
}

/// Which information models a protocol can carry.
constexpr bool is_compatible(Protocol p, InfoModel m) {
  switch (p) {
    case Protocol::Coap: return m != InfoModel::LcpCmd;
    case Protocol::Http: return true;
    case Protocol::LcpTransport: return m == InfoModel::LcpCmd;
  }
  return false;
}

/// A (protocol, information model) pair describing one side of a gateway.
struct InterfaceDescriptor {
  Protocol protocol = Protocol::Http;
  InfoModel info_model = InfoModel::SenmlJson;

  constexpr bool valid() const { return is_compatible(protocol, info_model); }

  friend constexpr auto operator<=>(const InterfaceDescriptor&, const InterfaceDescriptor&) = default;
};

inline std::string to_string(const InterfaceDescriptor& d) {
  return "{" + std::string(to_string(d.protocol)) + "," + std::string(to_string(d.info_model)) + "}";
}

inline std::ostream& operator<<(std::ostream& os, const InterfaceDescriptor& d) {
  return os << to_string(d);
}

/// Every descriptor admitted by the compatibility table, in enum order.
inline std::vector<InterfaceDescriptor> all_descriptors() {
  std::vector<InterfaceDescriptor> out;
  for (auto p : {Protocol::Coap, Protocol::Http, Protocol::LcpTransport}) {
    for (auto m : {InfoModel::RawSunspot, InfoModel::RawAdvanticsys, InfoModel::SenmlJson,
                   InfoModel::LcpCmd}) {
      if (is_compatible(p, m)) out.push_back({p, m});
    }
  }
  return out;
}

/// Southbound interface a device brand natively speaks.
constexpr InterfaceDescriptor native_interface(DeviceBrand b) {
  switch (b) {
    case DeviceBrand::Sunspot: return {Protocol::Coap, InfoModel::RawSunspot};
    case DeviceBrand::Advanticsys: return {Protocol::Coap, InfoModel::RawAdvanticsys};
    case DeviceBrand::LegoNxt: return {Protocol::LcpTransport, InfoModel::LcpCmd};
  }
  return {};
}

}  // namespace vgw

template <>
struct std::hash<vgw::InterfaceDescriptor> {
  std::size_t operator()(const vgw::InterfaceDescriptor& d) const noexcept {
    return (static_cast<std::size_t>(d.protocol) << 8) | static_cast<std::size_t>(d.info_model);
  }
};
