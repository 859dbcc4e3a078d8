#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <regex>
#include <string>

#include "vgw/core/error.hpp"

namespace vgw::dataplane {

/// A decimal number carried as its exact source text. Never round-trips
/// through binary floating point.
class Decimal {
 public:
  Decimal() : text_("0") {}

  static std::optional<Decimal> parse(std::string_view text) {
    static const std::regex grammar(R"(-?(0|[1-9][0-9]*)(\.[0-9]+)?([eE][+-]?[0-9]+)?)");
    std::string s(text);
    // "-0" alone reads back as an integer 0 and would lose its sign.
    if (!std::regex_match(s, grammar) || s == "-0") return std::nullopt;
    return Decimal(std::move(s));
  }

  static Decimal of(std::string_view text) {
    auto d = parse(text);
    if (!d) fail(ErrorCode::ParseError, "not a decimal: '" + std::string(text) + "'");
    return *d;
  }

  static Decimal of(std::int64_t v) { return Decimal(std::to_string(v)); }

  const std::string& text() const { return text_; }
  double to_double() const { return std::stod(text_); }
  bool is_zero() const { return to_double() == 0.0; }

  friend bool operator==(const Decimal&, const Decimal&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Decimal& d) { return os << d.text_; }

 private:
  explicit Decimal(std::string text) : text_(std::move(text)) {}
  std::string text_;
};

}  // namespace vgw::dataplane
