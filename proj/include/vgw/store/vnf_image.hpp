#pragma once

#include <string>

#include "vgw/core/json.hpp"
#include "vgw/core/time.hpp"
#include "vgw/core/types.hpp"

namespace vgw::store {

enum class ImageKind : std::uint8_t { ProtocolConverter, InfoModelConverter };

inline constexpr EnumNames<ImageKind, 2> kImageKindNames{{{
    {ImageKind::ProtocolConverter, "PROTOCOL_CONVERTER"},
    {ImageKind::InfoModelConverter, "INFO_MODEL_CONVERTER"},
}}};

constexpr std::string_view to_string(ImageKind k) { return kImageKindNames.name(k); }

struct ResourceProfile {
  int vcpu = 1;
  int ram_mb = 2048;

  friend bool operator==(const ResourceProfile&, const ResourceProfile&) = default;
};

/// A stored conversion function: one edge of the conversion graph.
struct VnfImage {
  std::string image_id;
  ImageKind kind = ImageKind::ProtocolConverter;
  InterfaceDescriptor input;
  InterfaceDescriptor output;
  ResourceProfile resources;
  double cost_per_request_ms = 1.0;

  SimDuration cost() const { return from_ms(cost_per_request_ms); }

  /// A protocol converter changes only the protocol; an information-model
  /// converter changes only the information model.
  bool kind_consistent() const {
    switch (kind) {
      case ImageKind::ProtocolConverter:
        return input.protocol != output.protocol && input.info_model == output.info_model;
      case ImageKind::InfoModelConverter:
        return input.info_model != output.info_model && input.protocol == output.protocol;
    }
    return false;
  }

  friend bool operator==(const VnfImage&, const VnfImage&) = default;
};

inline void to_json(Json& j, const VnfImage& img) {
  j = Json{{"imageId", img.image_id},
           {"kind", std::string(to_string(img.kind))},
           {"input", img.input},
           {"output", img.output},
           {"resourceProfile", {{"vcpu", img.resources.vcpu}, {"ramMb", img.resources.ram_mb}}},
           {"costPerRequestMs", img.cost_per_request_ms}};
}

inline void from_json(const Json& j, VnfImage& img) {
  using namespace json_detail;
  img.image_id = require_string(j, "imageId");
  if (img.image_id.empty()) fail(ErrorCode::MalformedRequest, "empty imageId");
  img.kind = kImageKindNames.parse_or_throw(require_string(j, "kind"), "image kind");
  require(j, "input").get_to(img.input);
  require(j, "output").get_to(img.output);
  if (j.contains("resourceProfile")) {
    const Json& rp = j.at("resourceProfile");
    img.resources.vcpu = static_cast<int>(require_int(rp, "vcpu"));
    img.resources.ram_mb = static_cast<int>(require_int(rp, "ramMb"));
  }
  if (j.contains("costPerRequestMs")) {
    const Json& c = j.at("costPerRequestMs");
    if (!c.is_number()) fail(ErrorCode::MalformedRequest, "costPerRequestMs must be a number");
    img.cost_per_request_ms = c.get<double>();
  }
  if (img.cost_per_request_ms <= 0.0) {
    fail(ErrorCode::MalformedRequest, "costPerRequestMs must be positive");
  }
}

}  // namespace vgw::store
