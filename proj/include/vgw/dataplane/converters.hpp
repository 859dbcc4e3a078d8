#pragma once

#include <string>
#include <vector>

#include "vgw/core/error.hpp"
#include "vgw/dataplane/lcp.hpp"
#include "vgw/dataplane/messages.hpp"
#include "vgw/dataplane/raw.hpp"
#include "vgw/dataplane/senml.hpp"
#include "vgw/store/vnf_image.hpp"

namespace vgw::dataplane {

// ---- protocol conversion -----------------------------------------------

/// CoAP content or POST to HTTP. Payload bytes pass through untouched.
inline HttpMessage protocol_convert_up(const CoapMessage& c, InfoModel payload_model = InfoModel::RawSunspot) {
  HttpMessage h;
  switch (c.code) {
    case CoapCode::Content205:
      h.kind = HttpKind::Response;
      h.status = 200;
      break;
    case CoapCode::Post:
      h.kind = HttpKind::Request;
      h.method = HttpMethod::Post;
      break;
    case CoapCode::Get:
      fail(ErrorCode::UnsupportedCode, "CoAP GET carries no content on the uplink");
  }
  h.uri = c.uri_path.starts_with('/') ? c.uri_path : "/" + c.uri_path;
  h.body = c.payload;
  if (!h.body.empty()) h.headers["Content-Type"] = media_type(payload_model);
  return h;
}

/// HTTP request carrying an LCP command body to a robot transport frame.
inline LcpFrame protocol_convert_down(const HttpMessage& h) {
  if (h.kind != HttpKind::Request) fail(ErrorCode::UnsupportedCode, "only requests travel downlink");
  if (h.body.empty()) fail(ErrorCode::MissingBody, "downlink request has no body");
  return {frame_lcp(h.body)};
}

// ---- information-model conversion --------------------------------------

/// Raw brand payload to canonical SenML JSON, one entry per measurement.
inline std::string info_model_convert_up(const Bytes& raw, DeviceBrand brand) {
  const auto ms = decode_raw(brand, raw);
  SenmlPack p;
  p.base_name = ms.front().sensor_id + "/";
  p.base_time = Decimal::of(static_cast<std::int64_t>(ms.front().timestamp_s));
  for (const auto& m : ms) {
    if (m.sensor_id != ms.front().sensor_id) fail(ErrorCode::ParseError, "one payload, one sensor");
    SenmlEntry e;
    e.name = std::string(senml_name(m.quantity));
    e.unit = m.unit;
    e.value = m.value;
    const auto rel = static_cast<std::int64_t>(m.timestamp_s) - static_cast<std::int64_t>(ms.front().timestamp_s);
    if (rel != 0) e.time = Decimal::of(rel);
    p.entries.push_back(std::move(e));
  }
  return encode_senml(p);
}

inline LcpCommand info_model_convert_down(const SenmlPack& p) {
  if (!p.actuation) fail(ErrorCode::UnknownCommand, "pack carries no actuation");
  return make_lcp(p.actuation->command, p.actuation->target);
}

/// Inverse of the command table: recovers (command, target).
inline Actuation lcp_to_actuation(const LcpCommand& c) {
  const auto* entry = lcp_by_opcode(c.opcode);
  if (!entry) fail(ErrorCode::UnknownCommand, "unknown LCP opcode");
  return {std::string(entry->command), c.args};
}

constexpr DeviceBrand brand_of(InfoModel raw) {
  return raw == InfoModel::RawAdvanticsys ? DeviceBrand::Advanticsys : DeviceBrand::Sunspot;
}

// ---- one image applied to one message ----------------------------------

namespace convert_detail {

inline Bytes& body_of(Message& m) {
  if (auto* c = std::get_if<CoapMessage>(&m)) return c->payload;
  if (auto* h = std::get_if<HttpMessage>(&m)) return h->body;
  fail(ErrorCode::UnsupportedConversion, "a transport frame has no information model");
}

inline void set_media(Message& m, InfoModel model) {
  if (auto* h = std::get_if<HttpMessage>(&m)) h->headers["Content-Type"] = media_type(model);
}

}  // namespace convert_detail

/// The conversion an image performs, selected by its descriptors.
inline Message apply_image(const store::VnfImage& img, const Message& in) {
  using store::ImageKind;
  if (img.kind == ImageKind::ProtocolConverter) {
    if (img.input.protocol == Protocol::Coap && img.output.protocol == Protocol::Http) {
      const auto* c = std::get_if<CoapMessage>(&in);
      if (!c) fail(ErrorCode::UnsupportedConversion, img.image_id + " expects a CoAP message");
      return protocol_convert_up(*c, img.input.info_model);
    }
    if (img.input.protocol == Protocol::Http && img.output.protocol == Protocol::LcpTransport) {
      const auto* h = std::get_if<HttpMessage>(&in);
      if (!h) fail(ErrorCode::UnsupportedConversion, img.image_id + " expects an HTTP message");
      return protocol_convert_down(*h);
    }
    fail(ErrorCode::UnsupportedConversion, "no protocol mapping for " + img.image_id);
  }

  Message out = in;
  auto& body = convert_detail::body_of(out);
  const auto from = img.input.info_model;
  const auto to = img.output.info_model;
  if ((from == InfoModel::RawSunspot || from == InfoModel::RawAdvanticsys) && to == InfoModel::SenmlJson) {
    body = info_model_convert_up(body, brand_of(from));
  } else if (from == InfoModel::SenmlJson && to == InfoModel::LcpCmd) {
    body = encode_lcp(info_model_convert_down(decode_senml(body)));
  } else {
    fail(ErrorCode::UnsupportedConversion, "no information-model mapping for " + img.image_id);
  }
  convert_detail::set_media(out, to);
  return out;
}

/// Folds a message through images in order, with no timing.
inline Message convert_through(const std::vector<store::VnfImage>& images, Message m) {
  for (const auto& img : images) m = apply_image(img, m);
  return m;
}

}  // namespace vgw::dataplane
