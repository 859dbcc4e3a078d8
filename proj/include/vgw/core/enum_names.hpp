#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "vgw/core/error.hpp"

namespace vgw {

// Bidirectional enum <-> wire-name table.
template <typename E, std::size_t N>
struct EnumNames {
  std::array<std::pair<E, std::string_view>, N> entries;

  constexpr std::string_view name(E value) const {
    for (const auto& [e, n] : entries) {
      if (e == value) return n;
    }
    return "?";
  }

  constexpr std::optional<E> parse(std::string_view text) const {
    for (const auto& [e, n] : entries) {
      if (n == text) return e;
    }
    return std::nullopt;
  }

  E parse_or_throw(std::string_view text, std::string_view what) const {
    if (auto v = parse(text)) return *v;
    fail(ErrorCode::MalformedRequest,
         "unknown " + std::string(what) + " '" + std::string(text) + "'");
  }
};

}  // namespace vgw
