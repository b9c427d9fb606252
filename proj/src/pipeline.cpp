#include "mathcast/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "mathcast/parser.hpp"
#include "mathcast/registry.hpp"

namespace mathcast {
namespace {

const std::vector<const CasTarget*>& all_targets() {
  static const std::vector<const CasTarget*> t = {&CasTarget::maple(), &CasTarget::mathematica()};
  return t;
}

TranslateOptions options_for(const CorpusLine& line) {
  TranslateOptions o;
  if (!line.generate_conditions.empty()) o.generate_conditions = line.generate_conditions;
  return o;
}

CaseResult seed_result(const TestCase& c, const CorpusLine& line) {
  CaseResult r;
  r.id = c.id;
  r.line_id = line.id;
  r.url = line.url;
  r.latex = line.latex;
  r.split_index = c.split_index;
  r.lhs = render(c.lhs);
  r.rhs = render(c.rhs);
  r.relation = c.relation;
  for (const MathNode& k : c.constraints) r.constraints.push_back(render(k));
  r.substitutions = c.substitutions;
  r.verdict = c.verdict;
  return r;
}

void translate_all(CaseResult& r, const TestCase& c, const CorpusLine& line,
                   const MacroRegistry& registry, const std::string& primary) {
  MathNode tree = c.relation_tree();
  for (const CasTarget* t : all_targets()) {
    TargetTranslation tt;
    try {
      tt.output = translate(tree, *t, registry, options_for(line));
    } catch (const Error& e) {
      tt.error = e.code();
      tt.message = e.what();
    }
    if (t->id == primary && tt.output) {
      r.free_variables.assign(tt.output->free_variables.begin(), tt.output->free_variables.end());
    }
    r.translations[t->id] = std::move(tt);
  }
}

CaseStatus from_numeric(NumericStatus s) {
  switch (s) {
    case NumericStatus::kVerified: return CaseStatus::kVerified;
    case NumericStatus::kPartialFail: return CaseStatus::kPartialFail;
    case NumericStatus::kTotalFail: return CaseStatus::kTotalFail;
    case NumericStatus::kSkipped: return CaseStatus::kNumericSkipped;
    case NumericStatus::kError: return CaseStatus::kError;
    case NumericStatus::kTimeout: return CaseStatus::kTimeout;
  }
  return CaseStatus::kError;
}

struct Job {
  const CorpusLine* line = nullptr;
  TestCase test;
  // Analysis error that applies to this case (cyclic definitions and such).
  std::optional<ErrorCode> error;
  std::string error_message;
};

CaseResult run_job(const Job& job, const MacroRegistry& registry, const PipelineOptions& options,
                   Backend* backend) {
  const CorpusLine& line = *job.line;
  CaseResult r = seed_result(job.test, line);
  translate_all(r, job.test, line, registry, options.target->id);

  if (!r.verdict.kept) {
    r.status = CaseStatus::kSkipped;
    return r;
  }
  if (job.error) {
    r.status = CaseStatus::kTranslationError;
    r.bucket = bucket_for(*job.error);
    r.message = job.error_message;
    return r;
  }
  const TargetTranslation& primary = r.translations.at(options.target->id);
  if (primary.error) {
    r.status = CaseStatus::kTranslationError;
    r.bucket = bucket_for(*primary.error);
    r.message = primary.message;
    return r;
  }
  if (!options.verify || backend == nullptr) {
    r.status = CaseStatus::kTranslated;
    return r;
  }

  CaseForm form;
  try {
    form = make_case_form(job.test, *options.target, registry, options_for(line));
  } catch (const Error& e) {
    r.status = CaseStatus::kTranslationError;
    r.bucket = bucket_for(e.code());
    r.message = e.what();
    return r;
  }
  if (options.symbolic && backend->can_simplify()) {
    r.symbolic = symbolic_verify(form, *backend, options.values);
    if (r.symbolic->status == SymbolicStatus::kSimplifiedZero ||
        r.symbolic->status == SymbolicStatus::kConditionalZero) {
      r.status = CaseStatus::kSymbolicVerified;
      return r;
    }
  }
  if (!backend->can_evaluate()) {
    r.status = CaseStatus::kNumericSkipped;
    r.message = "backend cannot evaluate numerically";
    return r;
  }
  r.numeric = numeric_verify(form, *backend, options.values, registry);
  r.status = from_numeric(r.numeric->status);
  r.message = r.numeric->message;
  return r;
}

}  // namespace

std::string_view case_status_name(CaseStatus s) {
  switch (s) {
    case CaseStatus::kSkipped: return "skipped";
    case CaseStatus::kTranslationError: return "translation-error";
    case CaseStatus::kSymbolicVerified: return "symbolic-verified";
    case CaseStatus::kVerified: return "verified";
    case CaseStatus::kPartialFail: return "partial-fail";
    case CaseStatus::kTotalFail: return "total-fail";
    case CaseStatus::kTimeout: return "timeout";
    case CaseStatus::kError: return "error";
    case CaseStatus::kNumericSkipped: return "numeric-skipped";
    case CaseStatus::kTranslated: return "translated";
  }
  return "";
}

std::string_view error_bucket_name(ErrorBucket b) {
  switch (b) {
    case ErrorBucket::kNone: return "";
    case ErrorBucket::kMeomFailure: return "meom-failure";
    case ErrorBucket::kPrimeMisuse: return "prime-misuse";
    case ErrorBucket::kParseFailure: return "parse-failure";
    case ErrorBucket::kMacroArgFailure: return "macro-arg-failure";
    case ErrorBucket::kMissingMacro: return "missing-macro";
  }
  return "";
}

ErrorBucket bucket_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMeomExtractionFailed:
    case ErrorCode::kNoBlueprintMatch:
    case ErrorCode::kMissingDifferential:
    case ErrorCode::kMultipleDifferentials:
      return ErrorBucket::kMeomFailure;
    case ErrorCode::kPrimeWithoutSlot:
      return ErrorBucket::kPrimeMisuse;
    case ErrorCode::kArityMismatch:
    case ErrorCode::kAmbiguousWronskianVariable:
    case ErrorCode::kNoWronskianVariable:
      return ErrorBucket::kMacroArgFailure;
    case ErrorCode::kUnknownMacro:
    case ErrorCode::kMissingTranslation:
      return ErrorBucket::kMissingMacro;
    default:
      return ErrorBucket::kParseFailure;
  }
}

std::vector<CaseResult> run_pipeline(const std::vector<CorpusLine>& lines,
                                     const MacroRegistry& registry, const PipelineOptions& options,
                                     const BackendFactory& backends) {
  std::vector<Job> jobs;
  // Lines that fail to parse get a synthetic result at their slot.
  std::vector<std::optional<CaseResult>> fixed;
  for (const CorpusLine& line : lines) {
    LineAnalysis a = analyze_line(line, registry);
    if (a.cases.empty()) {
      CaseResult r;
      r.id = line.id + "#0";
      r.line_id = line.id;
      r.url = line.url;
      r.latex = line.latex;
      r.verdict = {true, SkipReason::kNone};
      r.status = CaseStatus::kTranslationError;
      ErrorCode code = a.error.value_or(ErrorCode::kParse);
      r.bucket = bucket_for(code);
      r.message = a.error_message;
      for (const CasTarget* t : all_targets()) {
        TargetTranslation tt;
        tt.error = code;
        tt.message = a.error_message;
        r.translations[t->id] = tt;
      }
      jobs.push_back(Job{});
      fixed.push_back(std::move(r));
      continue;
    }
    for (TestCase& c : a.cases) {
      Job j;
      j.line = &line;
      j.test = std::move(c);
      j.error = a.error;
      j.error_message = a.error_message;
      jobs.push_back(std::move(j));
      fixed.emplace_back();
    }
  }

  int workers = std::max(1, options.parallelism);
  if (static_cast<std::size_t>(workers) > jobs.size()) workers = std::max<int>(1, jobs.size());
  std::vector<std::unique_ptr<Backend>> pool;
  if (options.verify && backends) {
    for (int i = 0; i < workers; ++i) pool.push_back(backends());
  }

  std::vector<CaseResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&](int w) {
    Backend* backend = pool.empty() ? nullptr : pool[w].get();
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      if (fixed[i]) {
        results[i] = *fixed[i];
        continue;
      }
      try {
        results[i] = run_job(jobs[i], registry, options, backend);
      } catch (const Error& e) {
        results[i] = seed_result(jobs[i].test, *jobs[i].line);
        results[i].status = CaseStatus::kError;
        results[i].message = e.what();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (std::thread& t : threads) t.join();
  }
  return results;
}

CoverageReport check_coverage(const std::vector<CorpusLine>& lines, const MacroRegistry& registry,
                              const std::vector<std::string>& targets) {
  std::set<std::string> used;
  std::set<std::string> unknown_names;
  CoverageReport report;
  auto collect = [&](const std::string& latex, const std::string& line_id) {
    try {
      MathNode tree = parse_latex(latex, registry);
      std::vector<const MathNode*> stack = {&tree};
      while (!stack.empty()) {
        const MathNode* n = stack.back();
        stack.pop_back();
        if (n->kind == NodeKind::kMacroCall && !n->builtin) used.insert(n->text);
        for (const MathNode& c : n->children) stack.push_back(&c);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnknownMacro) return;
      std::string name = e.detail();
      std::size_t space = name.rfind(' ');
      if (space != std::string::npos) name = name.substr(space + 1);
      unknown_names.insert(name);
      report.unknown[name].push_back(line_id);
    }
  };
  for (const CorpusLine& line : lines) {
    collect(line.latex, line.id);
    for (const std::string& k : line.constraints) collect(k, line.id);
    for (const SymbolUse& use : line.symbols_used) {
      if (use.definition) collect(*use.definition, line.id);
      if (use.constraint) collect(*use.constraint, line.id);
    }
  }
  report.macros_used.assign(used.begin(), used.end());
  std::set<std::string> missing = unknown_names;
  for (const std::string& t : targets) {
    std::vector<std::string>& list = report.untranslated[t];
    for (const std::string& name : used) {
      const MacroEntry& e = registry.lookup(name);
      // Derivative, wronskian and constant macros are printed structurally.
      if (e.has_translation(t) || e.alternative || !e.kind.empty()) continue;
      list.push_back(name);
      missing.insert(name);
    }
  }
  std::size_t total = used.size() + unknown_names.size();
  if (total > 0) {
    report.percent = 100.0 * static_cast<double>(total - missing.size()) / static_cast<double>(total);
  }
  return report;
}

}  // namespace mathcast
