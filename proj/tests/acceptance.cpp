// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each check is independent of the unit suite's framework.
#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "golden.hpp"
#include "mathcast/cli.hpp"
#include "mathcast/error.hpp"
#include "mathcast/meom.hpp"
#include "mathcast/parser.hpp"
#include "mathcast/special_functions.hpp"
#include "mathcast/translator.hpp"
#include "oracles.hpp"
#include "verify_support.hpp"

namespace mathcast {
namespace {

using testing::form_of;
using testing::registry;

struct Check {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  template <class A, class B>
  void equal(const A& got, const B& want, const std::string& what) {
    if (!(got == want)) {
      std::ostringstream s;
      s << what << ": got '" << got << "' want '" << want << "'";
      failures.push_back(s.str());
    }
  }
};

std::string span_text(const std::vector<MathNode>& sibs, std::size_t first, std::size_t last) {
  std::string out;
  for (std::size_t i = first; i <= last; ++i) out += render(sibs[i]);
  return out;
}

std::string bound_text(const std::optional<MathNode>& n) { return n ? render(*n) : "-"; }

std::string to(const CasTarget& t, const char* latex) {
  return translate(parse_latex(latex, registry()), t, registry()).text;
}

void golden_translations(Check& c) {
  c.equal(to(CasTarget::maple(), golden::kHurwitzPrime), golden::kHurwitzMaple, "hurwitz maple");
  c.equal(to(CasTarget::mathematica(), golden::kHurwitzPrime), golden::kHurwitzMathematica,
          "hurwitz mathematica");
  c.equal(to(CasTarget::mathematica(), golden::kJacobi), golden::kJacobiMathematica, "jacobi");
  c.equal(to(CasTarget::mathematica(), golden::kStruve), golden::kStruveMathematica, "struve");
  c.equal(to(CasTarget::maple(), golden::kErfc), golden::kErfcMaple, "erfc");
}

void argument_extraction(Check& c) {
  for (const testing::SumRow& row : testing::kSumRows) {
    MathNode tree = parse_latex(row.latex, registry());
    BoundSpec b = operator_bounds(tree.children.at(row.op), registry());
    ArgumentSpan s = extract_argument(tree.children, row.op, b.bound_vars, registry());
    c.equal(span_text(tree.children, s.first, s.last), row.argument, row.latex);
  }
  MathNode tree = parse_latex(
      "\\sum_{k=0}^{n} \\binom{n}{k} = \\sum_{k=0}^{n} \\frac{\\prod_{m=1}^{n} m}{\\prod_{m=1}^{k} m "
      "\\prod_{m=1}^{n-k} m}",
      registry());
  std::vector<MathNode> flat;
  for (const MathNode& n : tree.children.at(0).children) flat.push_back(n);
  flat.push_back(tree.children.at(1));
  for (const MathNode& n : tree.children.at(2).children) flat.push_back(n);
  if (flat.size() != 5) {
    c.expect(false, "binomial product equation flattens to 5 siblings");
    return;
  }
  ArgumentSpan red = extract_argument(flat, 0, operator_bounds(flat[0], registry()).bound_vars, registry());
  c.expect(red.first == 1 && red.last == 1 && red.terminator == std::optional<std::size_t>(2),
           "left sum ends at the relation");
  ArgumentSpan right = extract_argument(flat, 3, operator_bounds(flat[3], registry()).bound_vars, registry());
  c.expect(right.first == 4 && right.last == 4 && !right.terminator, "right sum runs to the end");
  const std::vector<MathNode>& denom = flat[4].children.at(1).children;
  ArgumentSpan green =
      extract_argument(denom, 0, operator_bounds(denom.at(0), registry()).bound_vars, registry());
  c.expect(green.first == 1 && green.last == 1 && green.terminator == std::optional<std::size_t>(2),
           "first denominator product ends at the second product");
}

void blueprints(Check& c) {
  for (const testing::BlueprintRow& row : testing::kBlueprintRows) {
    MathNode tree = parse_latex(std::string("\\sum_{") + row.subscript + "} c", registry());
    BoundSpec b = operator_bounds(tree.children.at(0), registry());
    c.expect(b.bound_vars == row.vars, std::string(row.subscript) + " variables");
    c.equal(bound_text(b.lower), row.lower, std::string(row.subscript) + " lower");
    c.equal(bound_text(b.upper), row.upper, std::string(row.subscript) + " upper");
    c.equal(bound_text(b.membership), row.membership, std::string(row.subscript) + " membership");
  }
  MathNode tree = parse_latex("\\sum_{k=0} c", registry());
  c.equal(bound_text(operator_bounds(tree.children.at(0), registry()).upper), "\\infty",
          "default upper");
}

void case_analysis(Check& c) {
  LineAnalysis chain = analyze_line(testing::fixture("chain-no-macro"), registry());
  c.equal(chain.cases.size(), 2u, "f=g=h cases");
  for (const TestCase& tc : chain.cases) c.expect(render(tc.relation_tree()) != "f=h", "no f=h case");
  LineAnalysis pm = analyze_line(testing::fixture("imag-power-pm"), registry());
  c.equal(pm.cases.size(), 2u, "plus-minus cases");
  if (pm.cases.size() == 2) {
    c.equal(render(pm.cases[0].relation_tree()), "\\iunit^{+\\iunit}=\\expe^{-\\cpi/2}", "upper sign");
    c.equal(render(pm.cases[1].relation_tree()), "\\iunit^{-\\iunit}=\\expe^{+\\cpi/2}", "lower sign");
  }
  CorpusLine zx;
  zx.id = "zx";
  zx.latex = "z = x";
  LineAnalysis plain = analyze_line(zx, registry());
  c.expect(plain.cases.size() == 1 && !plain.cases[0].verdict.kept &&
               plain.cases[0].verdict.reason == SkipReason::kNoSemanticMath,
           "z=x skipped as no-semantic-math");
}

void constraint_propagation(Check& c) {
  LineAnalysis a = analyze_line(testing::fixture("struve-k-integral"), registry());
  std::vector<std::string> got;
  for (const MathNode& k : a.cases.at(0).constraints) got.push_back(render(k));
  for (const char* want : {"\\Re{z}>0", "\\Re{\\nu+\\frac{1}{2}}>0", "\\Re{\\nu+k+1}>0",
                           "\\Re{-\\nu+k+1}>0", "\\Re{n+\\nu+\\tfrac{3}{2}}>0"}) {
    c.expect(std::find(got.begin(), got.end(), want) != got.end(), std::string("constraint ") + want);
  }
  CaseForm f = form_of("struve-k-integral");
  AssignmentSet s = generate_assignments(f.variables, f.constraints, TestValueConfig::defaults(), registry());
  c.equal(s.raw_count, 100u, "raw combinations");
  c.equal(s.filtered_count, 25u, "filtered combinations");
}

void jacobi_numeric(Check& c) {
  CaseForm f = form_of("jacobi-sum");
  TestValueConfig config = TestValueConfig::defaults();
  AssignmentSet s = generate_assignments(f.variables, f.constraints, config, registry());
  c.equal(s.assignments.size(), 81u, "assignments");
  BuiltinBackend backend(registry());
  NumericOutcome o = numeric_verify(f, backend, config, registry());
  c.equal(std::string(numeric_status_name(o.status)), "verified", "status");
  c.equal(o.passed, 81u, "passed");
  c.equal(o.tested, 81u, "tested");
}

void property_suite(Check& c) {
  BuiltinBackend backend(registry());
  TestValueConfig config = TestValueConfig::defaults();
  std::size_t good = 0, bad = 0;
  for (const std::string& id : testing::identity_ids()) {
    NumericOutcome o = numeric_verify(form_of(id), backend, config, registry());
    if (o.status == NumericStatus::kVerified) ++good;
    else c.expect(false, id + " did not verify");
  }
  for (const std::string& id : testing::corrupted_ids()) {
    NumericOutcome o = numeric_verify(form_of(id), backend, config, registry());
    if (o.status == NumericStatus::kTotalFail || o.status == NumericStatus::kPartialFail) ++bad;
    else c.expect(false, id + " was not caught");
  }
  c.equal(good, 20u, "identities verified");
  c.equal(bad, 5u, "corruptions caught");

  for (unsigned seed = 1; seed <= 200; ++seed) {
    testing::TreeGen gen(seed);
    std::string latex = gen.term(0);
    std::set<std::string> want;
    for (const std::string& v : gen.used()) {
      if (!gen.bound().count(v)) want.insert(v);
    }
    auto out = translate(parse_latex(latex, registry()), CasTarget::mathematica(), registry());
    c.expect(out.free_variables == want, "free variables of " + latex);
  }

  std::size_t round_trips = 0;
  for (const CorpusLine& line : testing::fixtures()) {
    std::vector<std::string> sources = {line.latex};
    for (const auto& k : line.constraints) sources.push_back(k);
    for (const auto& u : line.symbols_used) {
      if (u.definition) sources.push_back(*u.definition);
    }
    for (const std::string& src : sources) {
      MathNode first;
      try {
        first = parse_latex(src, registry());
      } catch (const Error&) {
        continue;
      }
      MathNode second = parse_latex(render(first), registry());
      c.expect(structurally_equal(first, second), "round trip of " + src);
      ++round_trips;
    }
  }
  c.expect(round_trips > 60, "round trip coverage");

  for (const testing::GammaRef& r : testing::kGammaTable) {
    Complex want(std::stod(r.gre), std::stod(r.gim));
    Complex got = sf::gamma(Complex(r.re, r.im));
    c.expect(std::abs(got - want) / std::abs(want) < 1e-10, "gamma at " + std::to_string(r.re));
  }
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism(Check& c) {
  std::filesystem::path base = std::filesystem::temp_directory_path() / "mathcast-acceptance";
  std::filesystem::remove_all(base);
  std::string corpus = testing::fixtures_path();
  for (const char* run : {"a", "b"}) {
    std::string dir = (base / run).string();
    const char* argv[] = {"mathcast", "verify", "--corpus", corpus.c_str(), "--out", dir.c_str()};
    std::ostringstream out, err;
    int rc = run_cli(6, argv, out, err);
    c.equal(rc, 0, std::string("verify run ") + run + " exit code (" + err.str() + ")");
  }
  std::string a = slurp(base / "a" / "cases.jsonl");
  c.expect(!a.empty(), "cases.jsonl written");
  c.expect(a == slurp(base / "b" / "cases.jsonl"), "cases.jsonl byte-identical");
  std::filesystem::remove_all(base);
}

struct Criterion {
  const char* name;
  std::function<void(Check&)> run;
  double limit_seconds;  // 0: no bound
};

}  // namespace
}  // namespace mathcast

int main() {
  using namespace mathcast;
  const std::vector<Criterion> criteria = {
      {"golden-translations", golden_translations, 1},
      {"meom-argument-extraction", argument_extraction, 1},
      {"blueprint-suite", blueprints, 1},
      {"case-analysis", case_analysis, 0},
      {"constraint-propagation", constraint_propagation, 0},
      {"jacobi-numeric", jacobi_numeric, 10},
      {"property-suite", property_suite, 0},
      {"determinism", determinism, 60},
  };
  int failed = 0;
  int index = 1;
  for (const Criterion& cr : criteria) {
    Check c;
    auto start = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.limit_seconds > 0 && took >= cr.limit_seconds) {
      c.failures.push_back("runtime " + std::to_string(took) + " s over bound");
    }
    bool ok = c.failures.empty();
    if (!ok) ++failed;
    std::printf("%s %d %s (%.3f s)\n", ok ? "PASS" : "FAIL", index++, cr.name, took);
    for (const std::string& f : c.failures) std::printf("    %s\n", f.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
