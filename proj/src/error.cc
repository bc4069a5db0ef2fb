#include "subgram/error.h"

namespace subgram {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kMalformedToken: return "MalformedToken";
    case ErrorCode::kZeroLowResourceCorpus: return "ZeroLowResourceCorpus";
    case ErrorCode::kEmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::kReservedCharacter: return "ReservedCharacter";
    case ErrorCode::kMissingAnnotation: return "MissingAnnotation";
    case ErrorCode::kEmptyUnitList: return "EmptyUnitList";
    case ErrorCode::kNonFiniteParameter: return "NonFiniteParameter";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kIncompatibleFormatVersion: return "IncompatibleFormatVersion";
    case ErrorCode::kChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::kMalformedCheckpoint: return "MalformedCheckpoint";
    case ErrorCode::kOovEmpty: return "OovEmpty";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kEmptyKind: return "EmptyKind";
    case ErrorCode::kDegenerateVariance: return "DegenerateVariance";
    case ErrorCode::kMalformedVectorFile: return "MalformedVectorFile";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
      return ErrorCategory::kUsage;
    case ErrorCode::kNonFiniteParameter:
    case ErrorCode::kDegenerateVariance:
      return ErrorCategory::kNumerical;
    default:
      return ErrorCategory::kData;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

}  // namespace subgram
