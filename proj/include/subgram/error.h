#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace subgram {

enum class ErrorCode {
  kInvalidConfig,
  kIoFailure,
  kMalformedToken,
  kZeroLowResourceCorpus,
  kEmptyVocabulary,
  kReservedCharacter,
  kMissingAnnotation,
  kEmptyUnitList,
  kNonFiniteParameter,
  kDimensionMismatch,
  kIncompatibleFormatVersion,
  kChecksumMismatch,
  kMalformedCheckpoint,
  kOovEmpty,
  kEmptyCorpus,
  kEmptyKind,
  kDegenerateVariance,
  kMalformedVectorFile,
  kUnknownLabel,
};

// Coarse grouping used by the command line to pick an exit status.
enum class ErrorCategory { kUsage, kData, kNumerical };

std::string_view error_code_name(ErrorCode code);
ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return error_category(code_); }

 private:
  ErrorCode code_;
};

}  // namespace subgram
