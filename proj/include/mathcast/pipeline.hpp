#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mathcast/case_analyzer.hpp"
#include "mathcast/translator.hpp"
#include "mathcast/verifier.hpp"

namespace mathcast {

enum class CaseStatus {
  kSkipped,
  kTranslationError,
  kSymbolicVerified,
  kVerified,
  kPartialFail,
  kTotalFail,
  kTimeout,
  kError,
  kNumericSkipped,
  // Analysis only (no verification requested).
  kTranslated,
};
std::string_view case_status_name(CaseStatus s);

enum class ErrorBucket { kNone, kMeomFailure, kPrimeMisuse, kParseFailure, kMacroArgFailure, kMissingMacro };
std::string_view error_bucket_name(ErrorBucket b);
ErrorBucket bucket_for(ErrorCode code);

struct TargetTranslation {
  std::optional<TranslationOutput> output;
  std::optional<ErrorCode> error;
  std::string message;
};

struct CaseResult {
  std::string id;
  std::string line_id;
  std::string url;
  std::string latex;
  int split_index = 0;
  std::string lhs;
  std::string rhs;
  std::string relation;
  std::vector<std::string> constraints;
  std::vector<std::pair<std::string, std::string>> substitutions;
  FilterVerdict verdict;
  std::map<std::string, TargetTranslation> translations;
  std::vector<std::string> free_variables;
  std::optional<SymbolicOutcome> symbolic;
  std::optional<NumericOutcome> numeric;
  CaseStatus status = CaseStatus::kSkipped;
  ErrorBucket bucket = ErrorBucket::kNone;
  std::string message;
};

using BackendFactory = std::function<std::unique_ptr<Backend>()>;

struct PipelineOptions {
  const CasTarget* target = &CasTarget::mathematica();
  TestValueConfig values = TestValueConfig::defaults();
  int parallelism = 1;
  bool verify = true;
  bool symbolic = true;
};

// Analyzes, translates and (optionally) verifies every line. Results are
// in corpus order, then split order. Backends are created before any work
// starts, so kBackendUnavailable surfaces from here.
std::vector<CaseResult> run_pipeline(const std::vector<CorpusLine>& lines,
                                     const MacroRegistry& registry, const PipelineOptions& options,
                                     const BackendFactory& backends);

struct CoverageReport {
  std::vector<std::string> macros_used;
  // Unknown commands, one per line that failed on one.
  std::map<std::string, std::vector<std::string>> unknown;
  // Used macros with neither a translation nor an alternative, per target.
  std::map<std::string, std::vector<std::string>> untranslated;
  double percent = 100.0;
};

CoverageReport check_coverage(const std::vector<CorpusLine>& lines, const MacroRegistry& registry,
                              const std::vector<std::string>& targets);

}  // namespace mathcast
