#include <gtest/gtest.h>

#include <random>

#include "golden.hpp"
#include "mathcast/error.hpp"
#include "mathcast/evaluator.hpp"
#include "mathcast/expr.hpp"
#include "mathcast/parser.hpp"
#include "mathcast/translator.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace mathcast {
namespace {

using testing::registry;

std::string to(const CasTarget& t, const std::string& latex, const TranslateOptions& o = {}) {
  return translate(parse_latex(latex, registry()), t, registry(), o).text;
}

TEST(Golden, HurwitzPrime) {
  EXPECT_EQ(to(CasTarget::maple(), golden::kHurwitzPrime), golden::kHurwitzMaple);
  EXPECT_EQ(to(CasTarget::mathematica(), golden::kHurwitzPrime), golden::kHurwitzMathematica);
}

TEST(Golden, Jacobi) {
  EXPECT_EQ(to(CasTarget::mathematica(), golden::kJacobi), golden::kJacobiMathematica);
}

TEST(Golden, Struve) {
  auto out = translate(parse_latex(golden::kStruve, registry()), CasTarget::mathematica(), registry());
  EXPECT_EQ(out.text, golden::kStruveMathematica);
  EXPECT_EQ(out.free_variables, (std::set<std::string>{"\\nu", "z"}));
  ASSERT_EQ(out.notes.size(), 1u);
  EXPECT_NE(out.notes[0].find("StruveK"), std::string::npos);
}

TEST(Golden, ErfcDerivative) {
  EXPECT_EQ(to(CasTarget::maple(), golden::kErfc), golden::kErfcMaple);
}

TEST(Translator, PrimeOnSingleIdentifierNeedsNoSubstitution) {
  EXPECT_EQ(to(CasTarget::mathematica(), "\\Hurwitzzeta'@{s}{a}"), "D[HurwitzZeta[s,a],{s,1}]");
}

TEST(Translator, WronskianVariable) {
  EXPECT_EQ(to(CasTarget::mathematica(), "\\Wron@{\\AiryAi@{z}}{\\AiryBi@{z}}"),
            "Wronskian[{AiryAi[z],AiryBi[z]},z]");
  std::vector<MathNode> elems = {parse_latex("z^a", registry()), parse_latex("z^2", registry())};
  EXPECT_EQ(extract_wronskian_variable(elems, registry()), "z");
}

TEST(Translator, WronskianWithoutSharedVariable) {
  try {
    to(CasTarget::mathematica(), "\\Wron@{\\sin@{x}}{\\cos@{y}}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoWronskianVariable);
  }
}

TEST(Translator, PrimeOnPlainIdentifier) {
  try {
    to(CasTarget::mathematica(), "f'(x)");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrimeWithoutSlot);
  }
}

TEST(Translator, OneSidedLimit) {
  EXPECT_NE(to(CasTarget::mathematica(), "\\lim_{x \\to 0^+} \\frac{\\sin@{x}}{x}").find("Direction->\"FromAbove\""),
            std::string::npos);
}

TEST(Translator, ExclusiveSymbolicBound) {
  EXPECT_NE(to(CasTarget::mathematica(), "\\sum_{k<N} k^2").find("{k,-Infinity,N-1}"), std::string::npos);
}

TEST(Translator, ExclusiveNumericBoundsShift) {
  EXPECT_NE(to(CasTarget::mathematica(), "\\sum_{0<k<10} k").find("{k,1,9}"), std::string::npos);
}

TEST(Translator, GenerateConditionsOverride) {
  TranslateOptions o;
  o.generate_conditions = "False";
  EXPECT_NE(to(CasTarget::mathematica(), "\\int_0^1 t \\mathrm{d}t", o).find("GenerateConditions->False"),
            std::string::npos);
}

TEST(Translator, ChooseIsBinomial) {
  EXPECT_EQ(to(CasTarget::mathematica(), "{n \\choose k}"), "Binomial[n,k]");
}

TEST(Translator, GreekNames) {
  EXPECT_EQ(target_identifier("\\alpha", CasTarget::mathematica()), "\\[Alpha]");
  EXPECT_EQ(target_identifier("\\alpha", CasTarget::maple()), "alpha");
  EXPECT_EQ(target_identifier("\\ell", CasTarget::mathematica()), "\\[ScriptL]");
}

TEST(Translator, MaplePackageRecorded) {
  auto out = translate(parse_latex("\\qPochhammer{a}{q}{n}", registry()), CasTarget::maple(), registry());
  EXPECT_EQ(out.packages, std::set<std::string>{"QDifferenceEquations"});
}

TEST(Translator, Deterministic) {
  std::string a = to(CasTarget::mathematica(), golden::kStruve);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(to(CasTarget::mathematica(), golden::kStruve), a);
}

// zeta'(s^2, a) at s = sqrt(v) equals zeta'(s, a) at s = v.
TEST(Translator, SubstitutionIdempotence) {
  ExprPtr squared = build_expr(parse_latex("\\Hurwitzzeta'@{s^2}{a}", registry()), registry());
  ExprPtr plain = build_expr(parse_latex("\\Hurwitzzeta'@{s}{a}", registry()), registry());
  for (double v : {2.25, 3.0, 4.5}) {
    for (double a : {0.5, 1.5}) {
      Complex lhs = evaluate(squared, {{"s", std::sqrt(v)}, {"a", a}}, registry());
      Complex rhs = evaluate(plain, {{"s", v}, {"a", a}}, registry());
      EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(rhs))) << v << " " << a;
    }
  }
}

TEST(FreeVariables, RandomOperatorTrees) {
  int checked = 0;
  for (unsigned seed = 1; seed <= 200; ++seed) {
    testing::TreeGen gen(seed);
    std::string latex = gen.term(0);
    auto out = translate(parse_latex(latex, registry()), CasTarget::mathematica(), registry());
    std::set<std::string> expected;
    for (const std::string& v : gen.used()) {
      if (!gen.bound().count(v)) expected.insert(v);
    }
    for (const std::string& b : gen.bound()) {
      EXPECT_EQ(out.free_variables.count(b), 0u) << latex;
    }
    EXPECT_EQ(out.free_variables, expected) << latex;
    ++checked;
  }
  EXPECT_EQ(checked, 200);
}

}  // namespace
}  // namespace mathcast
