#ifndef MTEVAL_ERROR_H_
#define MTEVAL_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace mteval {

enum class ErrorCode {
  kIo,
  kParseError,
  kInvalidArgument,
  kLineCountMismatch,
  kEmptySource,
  kManifestGap,
  kManifestOverlap,
  kDuplicateSegment,
  kDuplicateSystemId,
  kUnknownSystem,
  kEmptyHypothesis,
  kOutOfRangeRating,
  kMissingCriterion,
  kUnknownSegment,
  kNoRatings,
  kLengthMismatch,
  kInsufficientReferences,
  kMissingRatings,
  kUnknownConfig,
};

std::string_view ErrorCodeName(ErrorCode code);

// All recoverable failures in the toolkit are reported with this type; the
// code lets callers (CLI, HTTP service) map failures to exit codes/statuses.
class EvalError : public std::runtime_error {
 public:
  EvalError(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mteval

#endif  // MTEVAL_ERROR_H_
