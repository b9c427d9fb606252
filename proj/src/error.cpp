#include "mathcast/error.hpp"

namespace mathcast {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnbalancedDelimiter: return "UnbalancedDelimiter";
    case ErrorCode::kIllegalCharacter: return "IllegalCharacter";
    case ErrorCode::kUnknownMacro: return "UnknownMacro";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kMalformedSubSup: return "MalformedSubSup";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kDuplicateMacro: return "DuplicateMacro";
    case ErrorCode::kBadPlaceholder: return "BadPlaceholder";
    case ErrorCode::kMissingTranslation: return "MissingTranslation";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kRegistryFormat: return "RegistryFormat";
    case ErrorCode::kNoBlueprintMatch: return "NoBlueprintMatch";
    case ErrorCode::kMissingDifferential: return "MissingDifferential";
    case ErrorCode::kMultipleDifferentials: return "MultipleDifferentials";
    case ErrorCode::kMeomExtractionFailed: return "MeomExtractionFailed";
    case ErrorCode::kPrimeWithoutSlot: return "PrimeWithoutSlot";
    case ErrorCode::kAmbiguousWronskianVariable: return "AmbiguousWronskianVariable";
    case ErrorCode::kNoWronskianVariable: return "NoWronskianVariable";
    case ErrorCode::kUnsupportedNotation: return "UnsupportedNotation";
    case ErrorCode::kNoRelation: return "NoRelation";
    case ErrorCode::kCyclicDefinition: return "CyclicDefinition";
    case ErrorCode::kUnsupportedFunction: return "UnsupportedFunction";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kNoFreeVariables: return "NoFreeVariables";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kBackendError: return "BackendError";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kConfig: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::size_t position)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code),
      detail_(message),
      position_(position) {}

}  // namespace mathcast
