#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mathcast/pipeline.hpp"

namespace mathcast {

struct RunSummary {
  std::size_t lines_in = 0;
  std::size_t lines_kept = 0;
  std::size_t lines_skipped = 0;
  std::size_t cases_after_split = 0;
  std::size_t filtered = 0;
  std::map<std::string, std::size_t> filtered_by_reason;
  std::size_t translated = 0;
  std::size_t translation_errors = 0;
  std::map<std::string, std::size_t> translation_error_buckets;
  std::size_t symbolic_verified = 0;
  std::size_t numeric_verified = 0;
  std::size_t partial = 0;
  std::size_t total_fail = 0;
  std::size_t timeout = 0;
  std::size_t error = 0;
  // Cases that never reached numeric testing (filtered, translation
  // errors, symbolically verified, no usable test values).
  std::size_t skipped_numeric = 0;

  // Invariants between the counters; empty when all hold.
  std::vector<std::string> violations() const;
};

RunSummary summarize(std::size_t lines_in, const std::vector<CaseResult>& results);

nlohmann::json case_to_json(const CaseResult& r);
nlohmann::json summary_to_json(const RunSummary& s);
std::string summary_text(const RunSummary& s);

// Writes cases.jsonl, summary.json and summary.txt into `dir` (created if
// missing). Throws kIoFailure.
void write_reports(const std::string& dir, const std::vector<CaseResult>& results,
                   const RunSummary& summary);

}  // namespace mathcast
