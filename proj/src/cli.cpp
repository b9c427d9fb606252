#include "mathcast/cli.hpp"

#include <fstream>
#include <iomanip>
#include <memory>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mathcast/bridge.hpp"
#include "mathcast/case_analyzer.hpp"
#include "mathcast/parser.hpp"
#include "mathcast/pipeline.hpp"
#include "mathcast/registry.hpp"
#include "mathcast/reporting.hpp"
#include "mathcast/translator.hpp"

namespace mathcast {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBackend = 3;

struct CommonFlags {
  std::string registry;
  std::string corpus;
  std::string cas = "mathematica";
};

MacroRegistry open_registry(const std::string& flag) {
  return load_registry(resolve_registry_path(flag));
}

nlohmann::json output_json(const TranslationOutput& o) {
  return {{"text", o.text},
          {"free_variables", std::vector<std::string>(o.free_variables.begin(), o.free_variables.end())},
          {"packages", std::vector<std::string>(o.packages.begin(), o.packages.end())},
          {"notes", o.notes}};
}

nlohmann::json test_case_json(const TestCase& c) {
  nlohmann::json subs = nlohmann::json::array();
  for (const auto& [sym, def] : c.substitutions) subs.push_back({{"symbol", sym}, {"definition", def}});
  std::vector<std::string> constraints;
  for (const MathNode& k : c.constraints) constraints.push_back(render(k));
  return {{"id", c.id},
          {"line_id", c.line_id},
          {"split_index", c.split_index},
          {"lhs", render(c.lhs)},
          {"relation", c.relation},
          {"rhs", render(c.rhs)},
          {"constraints", constraints},
          {"substitutions", subs},
          {"kept", c.verdict.kept},
          {"skip_reason", std::string(skip_reason_name(c.verdict.reason))}};
}

BackendFactory backend_factory(const std::string& spec, const MacroRegistry& registry) {
  if (spec == "builtin") {
    return [&registry] { return std::make_unique<BuiltinBackend>(registry); };
  }
  const std::string prefix = "bridge:";
  if (spec.rfind(prefix, 0) == 0 && spec.size() > prefix.size()) {
    std::string command = spec.substr(prefix.size());
    return [command] { return std::make_unique<BridgeBackend>(command); };
  }
  throw Error(ErrorCode::kConfig, "unknown backend '" + spec + "' (builtin or bridge:<cmd>)");
}

int default_parallelism() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Translate and verify semantic LaTeX formulae against CAS targets", "mathcast"};
  app.require_subcommand(1);

  CommonFlags tr;
  std::string expr;
  std::string tr_conditions;
  CLI::App* translate_cmd = app.add_subcommand("translate", "Translate one expression");
  translate_cmd->add_option("--expr", expr, "Dialect expression")->required();
  translate_cmd->add_option("--cas", tr.cas, "maple or mathematica");
  translate_cmd->add_option("--registry", tr.registry, "Registry file");
  translate_cmd->add_option("--generate-conditions", tr_conditions, "GenerateConditions value");

  CommonFlags an;
  std::string an_out;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Emit test cases as JSON lines");
  analyze_cmd->add_option("--corpus", an.corpus, "Corpus JSONL")->required();
  analyze_cmd->add_option("--registry", an.registry, "Registry file");
  analyze_cmd->add_option("--out", an_out, "Output file (default: stdout)");

  CommonFlags ve;
  std::string backend = "builtin";
  std::string out_dir = "mathcast-out";
  double timeout = 30;
  long long cap = 300;
  double threshold = 0.001;
  int parallelism = default_parallelism();
  bool no_symbolic = false;
  bool ve_coverage = false;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Translate and verify a corpus");
  verify_cmd->add_option("--corpus", ve.corpus, "Corpus JSONL")->required();
  verify_cmd->add_option("--cas", ve.cas, "maple or mathematica");
  verify_cmd->add_option("--backend", backend, "builtin or bridge:<cmd>");
  verify_cmd->add_option("--timeout", timeout, "Seconds per case");
  verify_cmd->add_option("--cap", cap, "Max test combinations per case");
  verify_cmd->add_option("--threshold", threshold, "Numeric pass threshold");
  verify_cmd->add_option("--parallelism", parallelism, "Worker count");
  verify_cmd->add_option("--out", out_dir, "Report directory");
  verify_cmd->add_option("--registry", ve.registry, "Registry file");
  verify_cmd->add_flag("--no-symbolic", no_symbolic, "Skip symbolic simplification");
  verify_cmd->add_flag("--check-coverage", ve_coverage, "Only report registry coverage");

  CommonFlags co;
  std::string co_cas;
  CLI::App* coverage_cmd = app.add_subcommand("check-coverage", "Registry coverage of a corpus");
  coverage_cmd->add_option("--corpus", co.corpus, "Corpus JSONL")->required();
  coverage_cmd->add_option("--registry", co.registry, "Registry file");
  coverage_cmd->add_option("--cas", co_cas, "Target (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "mathcast: " << e.what() << "\n";
    return kExitConfig;
  }

  auto coverage = [&](const CommonFlags& flags, const std::string& cas) {
    MacroRegistry registry = open_registry(flags.registry);
    std::vector<CorpusLine> lines = load_corpus(flags.corpus);
    std::vector<std::string> targets;
    if (cas.empty()) {
      targets = {"maple", "mathematica"};
    } else {
      targets = {CasTarget::by_id(cas).id};
    }
    CoverageReport r = check_coverage(lines, registry, targets);
    out << "macros used: " << r.macros_used.size() << "\n";
    for (const auto& [name, ids] : r.unknown) {
      out << "unknown: " << name << " (" << ids.front() << ")\n";
    }
    for (const auto& [t, names] : r.untranslated) {
      for (const std::string& n : names) out << "untranslated for " << t << ": " << n << "\n";
    }
    out << "coverage: " << std::fixed << std::setprecision(1) << r.percent << "%\n";
    return r.percent >= 100.0 ? kExitOk : kExitRejected;
  };

  try {
    if (*translate_cmd) {
      MacroRegistry registry = open_registry(tr.registry);
      const CasTarget& target = CasTarget::by_id(tr.cas);
      TranslateOptions options;
      if (!tr_conditions.empty()) options.generate_conditions = tr_conditions;
      try {
        MathNode tree = parse_latex(expr, registry);
        out << output_json(translate(tree, target, registry, options)).dump(2) << "\n";
      } catch (const Error& e) {
        out << nlohmann::json{{"error", std::string(error_code_name(e.code()))},
                              {"message", e.detail()}}
                   .dump(2)
            << "\n";
        return kExitRejected;
      }
      return kExitOk;
    }

    if (*analyze_cmd) {
      MacroRegistry registry = open_registry(an.registry);
      std::vector<CorpusLine> lines = load_corpus(an.corpus);
      std::ofstream file;
      std::ostream* sink = &out;
      if (!an_out.empty()) {
        file.open(an_out, std::ios::binary | std::ios::trunc);
        if (!file) throw Error(ErrorCode::kIoFailure, "cannot write " + an_out);
        sink = &file;
      }
      for (const CorpusLine& line : lines) {
        LineAnalysis a = analyze_line(line, registry);
        if (a.cases.empty()) {
          *sink << nlohmann::json{{"id", line.id + "#0"},
                                  {"line_id", line.id},
                                  {"error", std::string(error_code_name(*a.error))},
                                  {"message", a.error_message}}
                       .dump()
                << "\n";
          continue;
        }
        for (const TestCase& c : a.cases) {
          nlohmann::json j = test_case_json(c);
          if (a.error) j["error"] = std::string(error_code_name(*a.error));
          *sink << j.dump() << "\n";
        }
      }
      if (file.is_open() && !file) throw Error(ErrorCode::kIoFailure, "write failed for " + an_out);
      return kExitOk;
    }

    if (*verify_cmd) {
      if (ve_coverage) return coverage(ve, ve.cas);
      if (!(threshold > 0)) throw Error(ErrorCode::kConfig, "--threshold must be > 0");
      if (cap < 1) throw Error(ErrorCode::kConfig, "--cap must be >= 1");
      if (!(timeout >= 1)) throw Error(ErrorCode::kConfig, "--timeout must be >= 1 s");
      if (parallelism < 1) throw Error(ErrorCode::kConfig, "--parallelism must be >= 1");
      const CasTarget& target = CasTarget::by_id(ve.cas);
      MacroRegistry registry = open_registry(ve.registry);
      std::vector<CorpusLine> lines = load_corpus(ve.corpus);

      PipelineOptions options;
      options.target = &target;
      options.values.combo_cap = static_cast<std::size_t>(cap);
      options.values.timeout_seconds = timeout;
      options.values.threshold = threshold;
      options.parallelism = parallelism;
      options.symbolic = !no_symbolic;
      BackendFactory factory = backend_factory(backend, registry);

      std::vector<CaseResult> results = run_pipeline(lines, registry, options, factory);
      RunSummary summary = summarize(lines.size(), results);
      write_reports(out_dir, results, summary);
      out << summary_text(summary);
      for (const std::string& v : summary.violations()) err << "mathcast: invariant: " << v << "\n";
      return kExitOk;
    }

    if (*coverage_cmd) return coverage(co, co_cas);
  } catch (const Error& e) {
    err << "mathcast: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::kBackendUnavailable:
      case ErrorCode::kBackendError:
        return kExitBackend;
      default:
        return kExitConfig;
    }
  }
  return kExitConfig;
}

}  // namespace mathcast
