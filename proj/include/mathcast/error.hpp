#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mathcast {

enum class ErrorCode {
  kUnbalancedDelimiter,
  kIllegalCharacter,
  kUnknownMacro,
  kArityMismatch,
  kMalformedSubSup,
  kParse,
  kDuplicateMacro,
  kBadPlaceholder,
  kMissingTranslation,
  kNotFound,
  kRegistryFormat,
  kNoBlueprintMatch,
  kMissingDifferential,
  kMultipleDifferentials,
  kMeomExtractionFailed,
  kPrimeWithoutSlot,
  kAmbiguousWronskianVariable,
  kNoWronskianVariable,
  kUnsupportedNotation,
  kNoRelation,
  kCyclicDefinition,
  kUnsupportedFunction,
  kDomainError,
  kTimeout,
  kNoFreeVariables,
  kBackendUnavailable,
  kBackendError,
  kIoFailure,
  kConfig,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::size_t position = kNoPosition);

  ErrorCode code() const { return code_; }
  // Byte offset into the source, or kNoPosition.
  std::size_t position() const { return position_; }
  // Message without the code prefix.
  const std::string& detail() const { return detail_; }

  static constexpr std::size_t kNoPosition = static_cast<std::size_t>(-1);

 private:
  ErrorCode code_;
  std::string detail_;
  std::size_t position_;
};

}  // namespace mathcast
