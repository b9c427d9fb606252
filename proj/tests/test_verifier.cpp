#include <gtest/gtest.h>

#include "mathcast/error.hpp"
#include "mathcast/expr.hpp"
#include "mathcast/parser.hpp"
#include "verify_support.hpp"

namespace mathcast {
namespace {

using testing::form_of;
using testing::registry;

const TestValueConfig& config() {
  static const TestValueConfig c = TestValueConfig::defaults();
  return c;
}

TEST(TestValues, GridInvariants) {
  const auto& g = config().general_values;
  ASSERT_EQ(g.size(), 10u);
  int circle = 0;
  for (const TestValue& v : g) {
    Complex z = v.value();
    if (v.circle) {
      ++circle;
      EXPECT_NEAR(std::abs(z), 1.0, 1e-15);
    }
    for (Complex bad : {Complex(0), Complex(1), Complex(-1), Complex(0, 1), Complex(0, -1)}) {
      EXPECT_GT(std::abs(z - bad), 1e-9) << v.label();
    }
    // closed under negation
    bool found = false;
    for (const TestValue& w : g) found = found || std::abs(w.value() + z) < 1e-12;
    EXPECT_TRUE(found) << v.label();
  }
  EXPECT_EQ(circle, 4);
}

TEST(TestValues, SpecialAndPositive) {
  EXPECT_EQ(config().values_for("n").size(), 3u);
  EXPECT_EQ(config().values_for("\\epsilon").size(), 3u);
  EXPECT_EQ(config().values_for("\\varepsilon").size(), 3u);
  std::vector<TestValue> x = config().values_for("x");
  ASSERT_EQ(x.size(), 3u);
  EXPECT_EQ(x[0].label(), "1/2");
  EXPECT_EQ(x[1].label(), "3/2");
  EXPECT_EQ(x[2].label(), "2");
  EXPECT_EQ(config().values_for("y").size(), 6u);  // real
  EXPECT_EQ(config().values_for("w").size(), 10u);
}

TEST(Assignments, SingleVariableX) {
  AssignmentSet s = generate_assignments({"x"}, {}, config(), registry());
  EXPECT_EQ(s.assignments.size(), 3u);
}

TEST(Assignments, StruveHundredThenTwentyFive) {
  CaseForm f = form_of("struve-k-integral");
  EXPECT_EQ(f.variables, (std::vector<std::string>{"\\nu", "z"}));
  AssignmentSet s = generate_assignments(f.variables, f.constraints, config(), registry());
  EXPECT_EQ(s.raw_count, 100u);
  EXPECT_EQ(s.filtered_count, 25u);
  EXPECT_EQ(s.assignments.size(), 25u);
}

TEST(Assignments, JacobiEightyOne) {
  CaseForm f = form_of("jacobi-sum");
  AssignmentSet s = generate_assignments(f.variables, f.constraints, config(), registry());
  EXPECT_EQ(s.raw_count, 81u);
  EXPECT_EQ(s.assignments.size(), 81u);
}

TEST(Assignments, ConstraintFiltersBeforeEvaluation) {
  ExprPtr k = build_expr(parse_latex("\\Re{\\nu+\\frac{1}{2}} > 0", registry()), registry());
  AssignmentSet s = generate_assignments({"\\nu"}, {k}, config(), registry());
  for (const TestAssignment& a : s.assignments) EXPECT_NE(a.label(), "\\nu=-3/2");
  EXPECT_LT(s.filtered_count, s.raw_count);
}

TEST(Assignments, CapAndOrder) {
  AssignmentSet s = generate_assignments({"a1", "a2", "a3", "a4"}, {}, config(), registry());
  EXPECT_EQ(s.raw_count, 10000u);
  EXPECT_EQ(s.assignments.size(), 300u);
  EXPECT_TRUE(s.truncated);
  // Last variable varies fastest.
  EXPECT_EQ(s.assignments[0].label(), "a1=-2, a2=-2, a3=-2, a4=-2");
  EXPECT_EQ(s.assignments[1].label(), "a1=-2, a2=-2, a3=-2, a4=-3/2");
  AssignmentSet again = generate_assignments({"a4", "a3", "a2", "a1"}, {}, config(), registry());
  ASSERT_EQ(again.assignments.size(), s.assignments.size());
  for (std::size_t i = 0; i < s.assignments.size(); ++i) {
    EXPECT_EQ(again.assignments[i].label(), s.assignments[i].label());
  }
}

TEST(Assignments, NoFreeVariables) {
  try {
    generate_assignments({}, {}, config(), registry());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoFreeVariables);
  }
}

TEST(Numeric, JacobiAllPass) {
  CaseForm f = form_of("jacobi-sum");
  BuiltinBackend backend(registry());
  NumericOutcome o = numeric_verify(f, backend, config(), registry());
  EXPECT_EQ(o.status, NumericStatus::kVerified);
  EXPECT_EQ(o.tested, 81u);
  EXPECT_EQ(o.passed, 81u);
}

TEST(Numeric, ImaginaryPowerSingleEvaluation) {
  CaseForm f = form_of("id-imag-power");
  BuiltinBackend backend(registry());
  NumericOutcome o = numeric_verify(f, backend, config(), registry());
  EXPECT_EQ(o.status, NumericStatus::kVerified);
  EXPECT_EQ(o.tested, 1u);
}

TEST(Numeric, OracleIdentitiesVerify) {
  BuiltinBackend backend(registry());
  for (const std::string& id : testing::identity_ids()) {
    NumericOutcome o = numeric_verify(form_of(id), backend, config(), registry());
    EXPECT_EQ(o.status, NumericStatus::kVerified) << id << " " << o.passed << "/" << o.tested;
    EXPECT_EQ(o.passed, o.tested);
    EXPECT_GT(o.tested, 0u);
  }
}

TEST(Numeric, CorruptedIdentitiesFail) {
  BuiltinBackend backend(registry());
  for (const std::string& id : testing::corrupted_ids()) {
    NumericOutcome o = numeric_verify(form_of(id), backend, config(), registry());
    EXPECT_TRUE(o.status == NumericStatus::kTotalFail || o.status == NumericStatus::kPartialFail) << id;
    EXPECT_LT(o.passed, o.tested);
  }
}

TEST(Numeric, StatusMatchesCounts) {
  BuiltinBackend backend(registry());
  for (const CorpusLine& line : testing::fixtures()) {
    LineAnalysis a = analyze_line(line, registry());
    for (const TestCase& c : a.cases) {
      if (!c.verdict.kept || a.error) continue;
      CaseForm f;
      try {
        f = make_case_form(c, CasTarget::mathematica(), registry());
      } catch (const Error&) {
        continue;
      }
      NumericOutcome o = numeric_verify(f, backend, config(), registry());
      EXPECT_LE(o.tested, 300u);
      switch (o.status) {
        case NumericStatus::kVerified: EXPECT_TRUE(o.tested > 0 && o.passed == o.tested) << c.id; break;
        case NumericStatus::kPartialFail: EXPECT_TRUE(o.passed > 0 && o.passed < o.tested) << c.id; break;
        case NumericStatus::kTotalFail: EXPECT_TRUE(o.passed == 0 && o.tested > 0) << c.id; break;
        default: break;
      }
    }
  }
}

TEST(Numeric, ThresholdIsConfigurable) {
  CaseForm f = form_of("float-ellipsis");  // pi vs 3.14159
  BuiltinBackend backend(registry());
  TestValueConfig strict = config();
  strict.threshold = 1e-7;
  EXPECT_EQ(numeric_verify(f, backend, config(), registry()).status, NumericStatus::kVerified);
  EXPECT_EQ(numeric_verify(f, backend, strict, registry()).status, NumericStatus::kTotalFail);
}

TEST(Symbolic, BuiltinSimplifiesDifference) {
  BuiltinBackend backend(registry());
  CaseForm f = form_of("poly-gamma-square");
  EXPECT_EQ(symbolic_verify(f, backend, config()).status, SymbolicStatus::kSimplifiedZero);
  CaseForm g = form_of("id-gamma-recurrence");
  EXPECT_EQ(symbolic_verify(g, backend, config()).status, SymbolicStatus::kNotSimplified);
}

TEST(Symbolic, ReplyParsing) {
  EXPECT_EQ(parse_symbolic_reply("0").status, SymbolicStatus::kSimplifiedZero);
  SymbolicOutcome c = parse_symbolic_reply("ConditionalExpression[0, Im[z]!=0 || Re[z]<1]");
  EXPECT_EQ(c.status, SymbolicStatus::kConditionalZero);
  ASSERT_TRUE(c.condition.has_value());
  EXPECT_EQ(*c.condition, "Im[z]!=0 || Re[z]<1");
  SymbolicOutcome m = parse_symbolic_reply("piecewise(Re(z) < 1 or max(a, b) > 0, 0)");
  EXPECT_EQ(m.status, SymbolicStatus::kConditionalZero);
  EXPECT_EQ(*m.condition, "Re(z) < 1 or max(a, b) > 0");
  EXPECT_EQ(parse_symbolic_reply("piecewise(z < 1, 0, 1)").status, SymbolicStatus::kNotSimplified);
  EXPECT_EQ(parse_symbolic_reply("Sin[z]^2").status, SymbolicStatus::kNotSimplified);
  EXPECT_EQ(parse_symbolic_reply("ERROR syntax").status, SymbolicStatus::kError);
}

TEST(Commands, MathematicaNumericUsesNormalAndRules) {
  CaseForm f = form_of("id-gamma-recurrence");
  TestAssignment a;
  a.values = {{"z", TestValue{1, 6, true}}};
  std::string cmd = numeric_command(f, a);
  EXPECT_EQ(cmd.rfind("N[Normal[", 0), 0u) << cmd;
  EXPECT_NE(cmd.find("z->Exp[I*Pi/6]"), std::string::npos) << cmd;
}

TEST(Commands, SymbolicAssumptions) {
  CaseForm f = form_of("jacobi-sum");
  std::string cmd = symbolic_command(f);
  EXPECT_EQ(cmd.rfind("FullSimplify[", 0), 0u) << cmd;
  EXPECT_NE(cmd.find("Assumptions -> "), std::string::npos) << cmd;
  CaseForm q = form_of("qpochhammer-one", 0, CasTarget::maple());
  EXPECT_NE(symbolic_command(q).find("QSimplify"), std::string::npos) << symbolic_command(q);
}

}  // namespace
}  // namespace mathcast
