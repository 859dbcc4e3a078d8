#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vgw/core/error.hpp"
#include "vgw/core/json.hpp"
#include "vgw/store/conversion_graph.hpp"
#include "vgw/store/vnf_image.hpp"

namespace vgw::store {

using Chain = std::vector<VnfImage>;

/// Central repository of gateway VNF images and the chain resolver.
///
/// Registrations are serialized and publish a fresh immutable snapshot;
/// resolutions read whichever snapshot was current when they started.
class VnfStore {
 public:
  struct Snapshot {
    std::map<std::string, VnfImage> images;
    ConversionGraph<InterfaceDescriptor, std::string> graph;
  };

  VnfStore() : snapshot_(std::make_shared<const Snapshot>()) {}

  void register_image(const VnfImage& img) {
    if (img.image_id.empty()) fail(ErrorCode::MalformedRequest, "image without id");
    if (!img.input.valid() || !img.output.valid()) {
      fail(ErrorCode::MalformedRequest, "image " + img.image_id + " has an invalid descriptor");
    }
    if (!img.kind_consistent()) {
      fail(ErrorCode::InconsistentKind, std::string(to_string(img.kind)) + " " + img.image_id +
                                            " cannot map " + to_string(img.input) + " to " +
                                            to_string(img.output));
    }
    std::lock_guard lock(write_mutex_);
    auto current = snapshot();
    if (current->images.contains(img.image_id)) {
      fail(ErrorCode::DuplicateImage, "image id " + img.image_id + " already registered");
    }
    if (current->graph.has_edge(img.input, img.output)) {
      fail(ErrorCode::DuplicateEdge,
           "edge " + to_string(img.input) + "->" + to_string(img.output) + " already registered");
    }
    auto next = std::make_shared<Snapshot>(*current);
    next->images.emplace(img.image_id, img);
    next->graph.add_edge(img.input, img.output, img.image_id);
    std::lock_guard read_lock(read_mutex_);
    snapshot_ = std::move(next);
  }

  std::shared_ptr<const Snapshot> snapshot() const {
    std::lock_guard lock(read_mutex_);
    return snapshot_;
  }

  std::optional<VnfImage> find(const std::string& image_id) const {
    auto snap = snapshot();
    auto it = snap->images.find(image_id);
    if (it == snap->images.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const std::string& image_id) const { return find(image_id).has_value(); }

  std::vector<VnfImage> images() const {
    auto snap = snapshot();
    std::vector<VnfImage> out;
    for (const auto& [id, img] : snap->images) out.push_back(img);
    return out;
  }

  std::size_t size() const { return snapshot()->images.size(); }

  /// Shortest conversion chain between the two sides of a gateway. Uplink
  /// chains run south to north, downlink chains north to south. Ties are
  /// broken by the lexicographically smallest image-id sequence. An empty
  /// chain means both sides already match; nullopt means infeasible.
  std::optional<Chain> resolve_chain(const InterfaceDescriptor& south,
                                     const InterfaceDescriptor& north,
                                     Direction direction = Direction::Uplink) const {
    auto snap = snapshot();
    const auto& from = direction == Direction::Uplink ? south : north;
    const auto& to = direction == Direction::Uplink ? north : south;
    auto path = snap->graph.shortest_path(from, to);
    if (!path) return std::nullopt;
    Chain chain;
    chain.reserve(path->size());
    for (const auto& edge : *path) chain.push_back(snap->images.at(edge.label));
    return chain;
  }

  void load_catalog(const Json& catalog) {
    const Json& list = catalog.is_object() && catalog.contains("images") ? catalog.at("images") : catalog;
    if (!list.is_array()) fail(ErrorCode::MalformedRequest, "catalog must be a JSON list of images");
    for (const auto& entry : list) register_image(entry.get<VnfImage>());
  }

  void load_catalog_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(ErrorCode::IoError, "cannot open catalog " + path);
    Json j;
    try {
      j = Json::parse(f);
    } catch (const Json::parse_error& e) {
      fail(ErrorCode::MalformedRequest, "catalog " + path + ": " + e.what());
    }
    load_catalog(j);
  }

  Json to_catalog() const {
    Json list = Json::array();
    for (const auto& img : images()) list.push_back(img);
    return list;
  }

 private:
  mutable std::mutex read_mutex_;
  std::mutex write_mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
};

/// Composition soundness: consecutive images connect, and the chain spans
/// exactly `from` to `to`.
inline bool composes(const Chain& chain, const InterfaceDescriptor& from, const InterfaceDescriptor& to) {
  if (chain.empty()) return from == to;
  if (chain.front().input != from || chain.back().output != to) return false;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    if (chain[i - 1].output != chain[i].input) return false;
  }
  return true;
}

/// The two images forming the sensor uplink and the two forming the robot
/// downlink, plus the ADVANTICSYS uplink converters.
inline std::vector<VnfImage> default_catalog(double protocol_cost_ms = 1.0, double info_cost_ms = 1.0) {
  const InterfaceDescriptor coap_sunspot{Protocol::Coap, InfoModel::RawSunspot};
  const InterfaceDescriptor http_sunspot{Protocol::Http, InfoModel::RawSunspot};
  const InterfaceDescriptor coap_adv{Protocol::Coap, InfoModel::RawAdvanticsys};
  const InterfaceDescriptor http_adv{Protocol::Http, InfoModel::RawAdvanticsys};
  const InterfaceDescriptor http_senml{Protocol::Http, InfoModel::SenmlJson};
  const InterfaceDescriptor http_lcp{Protocol::Http, InfoModel::LcpCmd};
  const InterfaceDescriptor lcp{Protocol::LcpTransport, InfoModel::LcpCmd};
  using K = ImageKind;
  return {
      {"pc-coap-http-sunspot", K::ProtocolConverter, coap_sunspot, http_sunspot, {}, protocol_cost_ms},
      {"im-sunspot-senml", K::InfoModelConverter, http_sunspot, http_senml, {}, info_cost_ms},
      {"pc-coap-http-advanticsys", K::ProtocolConverter, coap_adv, http_adv, {}, protocol_cost_ms},
      {"im-advanticsys-senml", K::InfoModelConverter, http_adv, http_senml, {}, info_cost_ms},
      {"im-senml-lcp", K::InfoModelConverter, http_senml, http_lcp, {}, info_cost_ms},
      {"pc-http-lcp", K::ProtocolConverter, http_lcp, lcp, {}, protocol_cost_ms},
  };
}

}  // namespace vgw::store
