#include "mteval/error.h"

namespace mteval {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kLineCountMismatch: return "LineCountMismatch";
    case ErrorCode::kEmptySource: return "EmptySource";
    case ErrorCode::kManifestGap: return "ManifestGap";
    case ErrorCode::kManifestOverlap: return "ManifestOverlap";
    case ErrorCode::kDuplicateSegment: return "DuplicateSegment";
    case ErrorCode::kDuplicateSystemId: return "DuplicateSystemId";
    case ErrorCode::kUnknownSystem: return "UnknownSystem";
    case ErrorCode::kEmptyHypothesis: return "EmptyHypothesis";
    case ErrorCode::kOutOfRangeRating: return "OutOfRangeRating";
    case ErrorCode::kMissingCriterion: return "MissingCriterion";
    case ErrorCode::kUnknownSegment: return "UnknownSegment";
    case ErrorCode::kNoRatings: return "NoRatings";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kInsufficientReferences: return "InsufficientReferences";
    case ErrorCode::kMissingRatings: return "MissingRatings";
    case ErrorCode::kUnknownConfig: return "UnknownConfig";
  }
  return "Unknown";
}

EvalError::EvalError(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace mteval
