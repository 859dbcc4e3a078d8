#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vgw {

enum class ErrorCode {
  MalformedRequest,
  NotFound,
  Conflict,
  OssUnavailable,
  DuplicateEdge,
  DuplicateImage,
  InconsistentKind,
  UnknownImage,
  CapacityExceeded,
  NotRunning,
  CompositionMismatch,
  SourceMismatch,
  InvalidPlan,
  UnsupportedCode,
  UnsupportedConversion,
  MissingBody,
  ParseError,
  UnknownCommand,
  ChainDown,
  RobotBusy,
  AllDown,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRequest: return "MALFORMED_REQUEST";
    case ErrorCode::NotFound: return "NOT_FOUND";
    case ErrorCode::Conflict: return "CONFLICT";
    case ErrorCode::OssUnavailable: return "OSS_UNAVAILABLE";
    case ErrorCode::DuplicateEdge: return "DUPLICATE_EDGE";
    case ErrorCode::DuplicateImage: return "DUPLICATE_IMAGE";
    case ErrorCode::InconsistentKind: return "INCONSISTENT_KIND";
    case ErrorCode::UnknownImage: return "UNKNOWN_IMAGE";
    case ErrorCode::CapacityExceeded: return "CAPACITY_EXCEEDED";
    case ErrorCode::NotRunning: return "NOT_RUNNING";
    case ErrorCode::CompositionMismatch: return "COMPOSITION_MISMATCH";
    case ErrorCode::SourceMismatch: return "SOURCE_MISMATCH";
    case ErrorCode::InvalidPlan: return "INVALID_PLAN";
    case ErrorCode::UnsupportedCode: return "UNSUPPORTED_CODE";
    case ErrorCode::UnsupportedConversion: return "UNSUPPORTED_CONVERSION";
    case ErrorCode::MissingBody: return "MISSING_BODY";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::UnknownCommand: return "UNKNOWN_COMMAND";
    case ErrorCode::ChainDown: return "CHAIN_DOWN";
    case ErrorCode::RobotBusy: return "ROBOT_BUSY";
    case ErrorCode::AllDown: return "ALL_DOWN";
    case ErrorCode::IoError: return "IO_ERROR";
  }
  return "UNKNOWN";
}

/// Exception carrying one of the domain error codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace vgw
