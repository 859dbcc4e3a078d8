#pragma once

#include <optional>

#include "vgw/core/error.hpp"

namespace vgw::devices {

struct FirePolicy {
  double threshold_cel = 60.0;
  int consecutive_samples = 2;

  void validate() const {
    if (!(threshold_cel > 0)) fail(ErrorCode::MalformedRequest, "fire threshold must be positive");
    if (consecutive_samples < 1) fail(ErrorCode::MalformedRequest, "consecutiveSamples must be at least 1");
  }
};

enum class FireSignal : std::uint8_t { Detected, Cleared };

/// Fires once `consecutive_samples` successive values reach the threshold
/// (>=), then stays quiet until a value drops below it.
class FireDetector {
 public:
  explicit FireDetector(FirePolicy p = {}) : policy_(p) { policy_.validate(); }

  std::optional<FireSignal> feed(double value) {
    if (value >= policy_.threshold_cel) {
      ++run_;
      if (!burning_ && run_ >= policy_.consecutive_samples) {
        burning_ = true;
        return FireSignal::Detected;
      }
      return std::nullopt;
    }
    run_ = 0;
    if (burning_) {
      burning_ = false;
      return FireSignal::Cleared;
    }
    return std::nullopt;
  }

  bool burning() const { return burning_; }
  const FirePolicy& policy() const { return policy_; }

 private:
  FirePolicy policy_;
  int run_ = 0;
  bool burning_ = false;
};

}  // namespace vgw::devices
