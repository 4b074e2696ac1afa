#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wlayout {

enum class ErrorCode {
  InvariantViolation,
  DegenerateSpace,
  OffsetOutOfRange,
  StripNotContainedInBlockStore,
  UnknownBlockStore,
  NoPickFaces,
  NodeLimitExceeded,
  UnknownRefinerId,
  ParseError,
  DimensionMismatch,
  MaskConflict,
  Cancelled,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::DegenerateSpace: return "DegenerateSpace";
    case ErrorCode::OffsetOutOfRange: return "OffsetOutOfRange";
    case ErrorCode::StripNotContainedInBlockStore: return "StripNotContainedInBlockStore";
    case ErrorCode::UnknownBlockStore: return "UnknownBlockStore";
    case ErrorCode::NoPickFaces: return "NoPickFaces";
    case ErrorCode::NodeLimitExceeded: return "NodeLimitExceeded";
    case ErrorCode::UnknownRefinerId: return "UnknownRefinerId";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MaskConflict: return "MaskConflict";
    case ErrorCode::Cancelled: return "Cancelled";
  }
  return "Unknown";
}

// All engine failures are reported through this one exception type; callers
// branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wlayout
