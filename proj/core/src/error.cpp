#include "flexagg/error.hpp"

namespace flexagg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInfeasibleRequest: return "InfeasibleRequest";
    case ErrorCode::kBadWindow: return "BadWindow";
    case ErrorCode::kNonpositivePower: return "NonpositivePower";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kWindowMismatch: return "WindowMismatch";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kBadSubset: return "BadSubset";
    case ErrorCode::kHorizonTooLarge: return "HorizonTooLarge";
    case ErrorCode::kSolverFailure: return "SolverFailure";
    case ErrorCode::kFleetMismatch: return "FleetMismatch";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kEmptyCloud: return "EmptyCloud";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace flexagg
