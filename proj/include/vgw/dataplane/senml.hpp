#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vgw/core/error.hpp"
#include "vgw/core/json.hpp"
#include "vgw/dataplane/decimal.hpp"

namespace vgw::dataplane {

struct SenmlEntry {
  std::string name;
  std::string unit;
  std::variant<Decimal, std::string, bool> value;
  std::optional<Decimal> time;  // relative to the pack's base time

  friend bool operator==(const SenmlEntry&, const SenmlEntry&) = default;
};

/// Pack-level actuation object: {"command", "target"}.
struct Actuation {
  std::string command;
  std::string target;

  friend bool operator==(const Actuation&, const Actuation&) = default;
};

struct SenmlPack {
  std::string base_name;
  std::optional<Decimal> base_time;
  std::vector<SenmlEntry> entries;
  std::optional<Actuation> actuation;

  friend bool operator==(const SenmlPack&, const SenmlPack&) = default;
};

namespace senml_detail {

inline std::string quote(const std::string& s) { return Json(s).dump(); }

// Number text is smuggled through the DOM as a binary value with this
// subtype; JSON text can never produce a binary value.
inline constexpr std::uint8_t kNumberSubtype = 42;

class NumberPreservingSax {
 public:
  explicit NumberPreservingSax(Json& root) : dom_(root, true) {}

  bool null() { return dom_.null(); }
  bool boolean(bool v) { return dom_.boolean(v); }
  bool number_integer(Json::number_integer_t v) { return text(std::to_string(v)); }
  bool number_unsigned(Json::number_unsigned_t v) { return text(std::to_string(v)); }
  bool number_float(Json::number_float_t, const Json::string_t& s) { return text(s); }
  bool string(Json::string_t& v) { return dom_.string(v); }
  bool binary(Json::binary_t& v) { return dom_.binary(v); }
  bool start_object(std::size_t n) { return dom_.start_object(n); }
  bool key(Json::string_t& k) { return dom_.key(k); }
  bool end_object() { return dom_.end_object(); }
  bool start_array(std::size_t n) { return dom_.start_array(n); }
  bool end_array() { return dom_.end_array(); }
  bool parse_error(std::size_t pos, const std::string& tok, const nlohmann::detail::exception& ex) {
    return dom_.parse_error(pos, tok, ex);
  }

 private:
  bool text(const std::string& s) {
    Json::binary_t b(std::vector<std::uint8_t>(s.begin(), s.end()), kNumberSubtype);
    return dom_.binary(b);
  }
  nlohmann::detail::json_sax_dom_parser<Json> dom_;
};

inline std::optional<Decimal> number(const Json& j) {
  if (!j.is_binary() || !j.get_binary().has_subtype() || j.get_binary().subtype() != kNumberSubtype) {
    return std::nullopt;
  }
  const auto& b = j.get_binary();
  return Decimal::parse(std::string(b.begin(), b.end()));
}

inline Decimal require_number(const Json& obj, const char* key) {
  auto d = number(obj.at(key));
  if (!d) fail(ErrorCode::ParseError, std::string("SenML field '") + key + "' must be a number");
  return *d;
}

inline std::string require_text(const Json& obj, const char* key) {
  if (!obj.at(key).is_string()) fail(ErrorCode::ParseError, std::string("SenML field '") + key + "' must be a string");
  return obj.at(key).get<std::string>();
}

}  // namespace senml_detail

/// Canonical SenML JSON: keys in sorted order, no whitespace, numbers
/// written verbatim. Zero relative times are omitted.
inline std::string encode_senml(const SenmlPack& p) {
  using senml_detail::quote;
  std::string out = "{";
  bool first = true;
  auto field = [&](const char* key, const std::string& raw) {
    if (!first) out += ',';
    first = false;
    out += '"';
    out += key;
    out += "\":";
    out += raw;
  };
  if (p.actuation) {
    std::string act = "{\"command\":" + quote(p.actuation->command);
    if (!p.actuation->target.empty()) act += ",\"target\":" + quote(p.actuation->target);
    act += '}';
    field("act", act);
  }
  if (!p.base_name.empty()) field("bn", quote(p.base_name));
  if (p.base_time) field("bt", p.base_time->text());
  std::string entries = "[";
  for (std::size_t i = 0; i < p.entries.size(); ++i) {
    const auto& e = p.entries[i];
    if (i) entries += ',';
    std::string obj = "{";
    bool f = true;
    auto add = [&](const char* key, const std::string& raw) {
      if (!f) obj += ',';
      f = false;
      obj += '"';
      obj += key;
      obj += "\":";
      obj += raw;
    };
    if (auto* b = std::get_if<bool>(&e.value)) add("bv", *b ? "true" : "false");
    if (!e.name.empty()) add("n", quote(e.name));
    if (auto* s = std::get_if<std::string>(&e.value)) add("sv", quote(*s));
    if (e.time && !e.time->is_zero()) add("t", e.time->text());
    if (!e.unit.empty()) add("u", quote(e.unit));
    if (auto* d = std::get_if<Decimal>(&e.value)) add("v", d->text());
    obj += '}';
    entries += obj;
  }
  entries += ']';
  field("e", entries);
  out += '}';
  return out;
}

inline SenmlPack decode_senml(std::string_view text) {
  using namespace senml_detail;
  Json root;
  NumberPreservingSax sax(root);
  try {
    if (!Json::sax_parse(text.begin(), text.end(), &sax)) fail(ErrorCode::ParseError, "invalid SenML JSON");
  } catch (const Json::exception& e) {
    fail(ErrorCode::ParseError, std::string("invalid SenML JSON: ") + e.what());
  }
  if (!root.is_object()) fail(ErrorCode::ParseError, "SenML pack must be an object");

  SenmlPack p;
  if (root.contains("bn")) p.base_name = require_text(root, "bn");
  if (root.contains("bt")) p.base_time = require_number(root, "bt");
  if (root.contains("act")) {
    const auto& act = root.at("act");
    if (!act.is_object() || !act.contains("command")) fail(ErrorCode::ParseError, "act needs a command");
    Actuation a;
    a.command = require_text(act, "command");
    if (act.contains("target")) a.target = require_text(act, "target");
    p.actuation = a;
  }
  if (root.contains("e")) {
    const auto& list = root.at("e");
    if (!list.is_array()) fail(ErrorCode::ParseError, "SenML 'e' must be an array");
    for (const auto& obj : list) {
      if (!obj.is_object()) fail(ErrorCode::ParseError, "SenML entry must be an object");
      SenmlEntry e;
      if (obj.contains("n")) e.name = require_text(obj, "n");
      if (obj.contains("u")) e.unit = require_text(obj, "u");
      if (obj.contains("t")) e.time = require_number(obj, "t");
      const int kinds = obj.contains("v") + obj.contains("sv") + obj.contains("bv");
      if (kinds != 1) fail(ErrorCode::ParseError, "SenML entry needs exactly one of v, sv, bv");
      if (obj.contains("v")) e.value = require_number(obj, "v");
      if (obj.contains("sv")) e.value = require_text(obj, "sv");
      if (obj.contains("bv")) {
        if (!obj.at("bv").is_boolean()) fail(ErrorCode::ParseError, "SenML 'bv' must be a boolean");
        e.value = obj.at("bv").get<bool>();
      }
      if (p.base_name.empty() && e.name.empty()) fail(ErrorCode::ParseError, "SenML entry has an empty name");
      p.entries.push_back(std::move(e));
    }
  }
  return p;
}

}  // namespace vgw::dataplane
