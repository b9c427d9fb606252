#include "mathcast/reporting.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace mathcast {
namespace {

constexpr const char* kSchema = "1";

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

nlohmann::json translation_json(const TargetTranslation& t) {
  nlohmann::json j;
  if (t.output) {
    j["text"] = t.output->text;
    j["free_variables"] = std::vector<std::string>(t.output->free_variables.begin(),
                                                   t.output->free_variables.end());
    j["packages"] = std::vector<std::string>(t.output->packages.begin(), t.output->packages.end());
    j["notes"] = t.output->notes;
  } else {
    j["error"] = t.error ? std::string(error_code_name(*t.error)) : "";
    j["message"] = t.message;
  }
  return j;
}

}  // namespace

std::vector<std::string> RunSummary::violations() const {
  std::vector<std::string> v;
  if (lines_kept + lines_skipped != lines_in) v.push_back("lines_kept + lines_skipped != lines_in");
  if (cases_after_split < lines_in) v.push_back("cases_after_split < lines_in");
  if (filtered + translated + translation_errors != cases_after_split) {
    v.push_back("filtered + translated + translation_errors != cases_after_split");
  }
  std::size_t buckets = 0;
  for (const auto& [k, n] : translation_error_buckets) buckets += n;
  if (buckets != translation_errors) v.push_back("bucket sum != translation_errors");
  std::size_t outcomes = symbolic_verified + numeric_verified + partial + total_fail + timeout +
                         error + (skipped_numeric - filtered - translation_errors -
                                  symbolic_verified);
  if (skipped_numeric < filtered + translation_errors + symbolic_verified || outcomes != translated) {
    v.push_back("verification outcomes do not account for every translated case");
  }
  if (numeric_verified + partial + total_fail + timeout + error + skipped_numeric !=
      cases_after_split) {
    v.push_back("cases != verified + partial + total_fail + timeout + error + skipped_numeric");
  }
  return v;
}

RunSummary summarize(std::size_t lines_in, const std::vector<CaseResult>& results) {
  RunSummary s;
  s.lines_in = lines_in;
  s.cases_after_split = results.size();
  std::vector<std::string> order;
  std::map<std::string, bool> line_kept;
  for (const CaseResult& r : results) {
    if (!line_kept.count(r.line_id)) {
      order.push_back(r.line_id);
      line_kept[r.line_id] = false;
    }
    if (r.status != CaseStatus::kSkipped) line_kept[r.line_id] = true;
    switch (r.status) {
      case CaseStatus::kSkipped:
        ++s.filtered;
        ++s.filtered_by_reason[std::string(skip_reason_name(r.verdict.reason))];
        ++s.skipped_numeric;
        break;
      case CaseStatus::kTranslationError:
        ++s.translation_errors;
        ++s.translation_error_buckets[std::string(error_bucket_name(r.bucket))];
        ++s.skipped_numeric;
        break;
      case CaseStatus::kSymbolicVerified:
        ++s.translated;
        ++s.symbolic_verified;
        ++s.skipped_numeric;
        break;
      case CaseStatus::kNumericSkipped:
      case CaseStatus::kTranslated:
        ++s.translated;
        ++s.skipped_numeric;
        break;
      case CaseStatus::kVerified: ++s.translated; ++s.numeric_verified; break;
      case CaseStatus::kPartialFail: ++s.translated; ++s.partial; break;
      case CaseStatus::kTotalFail: ++s.translated; ++s.total_fail; break;
      case CaseStatus::kTimeout: ++s.translated; ++s.timeout; break;
      case CaseStatus::kError: ++s.translated; ++s.error; break;
    }
  }
  for (const auto& [id, kept] : line_kept) {
    if (kept) ++s.lines_kept;
    else ++s.lines_skipped;
  }
  return s;
}

nlohmann::json case_to_json(const CaseResult& r) {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["id"] = r.id;
  j["line_id"] = r.line_id;
  j["url"] = r.url;
  j["latex"] = r.latex;
  j["split_index"] = r.split_index;
  j["lhs"] = r.lhs;
  j["relation"] = r.relation;
  j["rhs"] = r.rhs;
  j["constraints"] = r.constraints;
  nlohmann::json subs = nlohmann::json::array();
  for (const auto& [sym, def] : r.substitutions) subs.push_back({{"symbol", sym}, {"definition", def}});
  j["substitutions"] = subs;
  j["kept"] = r.verdict.kept;
  j["skip_reason"] = std::string(skip_reason_name(r.verdict.reason));
  nlohmann::json tr = nlohmann::json::object();
  for (const auto& [target, t] : r.translations) tr[target] = translation_json(t);
  j["translations"] = tr;
  j["free_variables"] = r.free_variables;
  j["status"] = std::string(case_status_name(r.status));
  j["error_bucket"] = std::string(error_bucket_name(r.bucket));
  j["message"] = r.message;
  if (r.symbolic) {
    nlohmann::json sj{{"status", std::string(symbolic_status_name(r.symbolic->status))},
                      {"message", r.symbolic->message}};
    if (r.symbolic->condition) sj["condition"] = *r.symbolic->condition;
    j["symbolic"] = sj;
  } else {
    j["symbolic"] = nullptr;
  }
  if (r.numeric) {
    const NumericOutcome& n = *r.numeric;
    nlohmann::json fails = nlohmann::json::array();
    for (const NumericFailure& f : n.failures) {
      nlohmann::json fj{{"assignment", f.assignment}, {"tag", f.tag}};
      fj["difference"] = f.difference ? nlohmann::json(*f.difference) : nlohmann::json(nullptr);
      fails.push_back(fj);
    }
    j["numeric"] = {{"status", std::string(numeric_status_name(n.status))},
                    {"tested", n.tested},
                    {"passed", n.passed},
                    {"raw_combos", n.raw_combos},
                    {"filtered_combos", n.filtered_combos},
                    {"failures", fails},
                    {"message", n.message}};
  } else {
    j["numeric"] = nullptr;
  }
  return j;
}

nlohmann::json summary_to_json(const RunSummary& s) {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["lines_in"] = s.lines_in;
  j["lines_kept"] = s.lines_kept;
  j["lines_skipped"] = s.lines_skipped;
  j["cases_after_split"] = s.cases_after_split;
  j["filtered"] = s.filtered;
  j["filtered_by_reason"] = s.filtered_by_reason;
  j["translated"] = s.translated;
  j["translation_errors"] = s.translation_errors;
  j["translation_error_buckets"] = s.translation_error_buckets;
  j["symbolic_verified"] = s.symbolic_verified;
  j["numeric_verified"] = s.numeric_verified;
  j["partial"] = s.partial;
  j["total_fail"] = s.total_fail;
  j["timeout"] = s.timeout;
  j["error"] = s.error;
  j["skipped_numeric"] = s.skipped_numeric;
  return j;
}

std::string summary_text(const RunSummary& s) {
  std::vector<std::pair<std::string, std::size_t>> rows = {
      {"lines_in", s.lines_in},
      {"lines_kept", s.lines_kept},
      {"lines_skipped", s.lines_skipped},
      {"cases_after_split", s.cases_after_split},
      {"filtered", s.filtered},
  };
  for (const auto& [k, n] : s.filtered_by_reason) rows.push_back({"  " + k, n});
  rows.push_back({"translated", s.translated});
  rows.push_back({"translation_errors", s.translation_errors});
  for (const auto& [k, n] : s.translation_error_buckets) rows.push_back({"  " + k, n});
  rows.push_back({"symbolic_verified", s.symbolic_verified});
  rows.push_back({"numeric_verified", s.numeric_verified});
  rows.push_back({"partial", s.partial});
  rows.push_back({"total_fail", s.total_fail});
  rows.push_back({"timeout", s.timeout});
  rows.push_back({"error", s.error});
  rows.push_back({"skipped_numeric", s.skipped_numeric});
  std::size_t width = 0;
  for (const auto& [k, n] : rows) width = std::max(width, k.size());
  std::ostringstream out;
  for (const auto& [k, n] : rows) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << k << std::right
        << std::setw(6) << n << "\n";
  }
  return out.str();
}

void write_reports(const std::string& dir, const std::vector<CaseResult>& results,
                   const RunSummary& summary) {
  std::filesystem::path root(dir);
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + dir + ": " + ec.message());
  std::string cases;
  for (const CaseResult& r : results) cases += case_to_json(r).dump() + "\n";
  write_file(root / "cases.jsonl", cases);
  write_file(root / "summary.json", summary_to_json(summary).dump(2) + "\n");
  write_file(root / "summary.txt", summary_text(summary));
}

}  // namespace mathcast
