#include <gtest/gtest.h>

#include <algorithm>

#include "mathcast/error.hpp"
#include "mathcast/parser.hpp"
#include "support.hpp"

namespace mathcast {
namespace {

using testing::fixture;
using testing::registry;

CorpusLine line_of(const std::string& latex) {
  CorpusLine l;
  l.id = "t";
  l.latex = latex;
  return l;
}

std::vector<std::string> rendered(const std::vector<MathNode>& nodes) {
  std::vector<std::string> out;
  for (const MathNode& n : nodes) out.push_back(render(n));
  return out;
}

TEST(Split, AdjacentPairsOnly) {
  LineAnalysis a = analyze_line(fixture("chain-no-macro"), registry());
  ASSERT_EQ(a.cases.size(), 2u);
  EXPECT_EQ(render(a.cases[0].relation_tree()), "f=g");
  EXPECT_EQ(render(a.cases[1].relation_tree()), "g=h");
  for (const TestCase& c : a.cases) {
    EXPECT_NE(render(c.relation_tree()), "f=h");
    EXPECT_FALSE(c.verdict.kept);
    EXPECT_EQ(c.verdict.reason, SkipReason::kNoSemanticMath);
  }
}

TEST(Split, PlusMinusSignConsistent) {
  LineAnalysis a = analyze_line(fixture("imag-power-pm"), registry());
  ASSERT_EQ(a.cases.size(), 2u);
  EXPECT_EQ(render(a.cases[0].relation_tree()), "\\iunit^{+\\iunit}=\\expe^{-\\cpi/2}");
  EXPECT_EQ(render(a.cases[1].relation_tree()), "\\iunit^{-\\iunit}=\\expe^{+\\cpi/2}");
  for (const TestCase& c : a.cases) EXPECT_TRUE(c.verdict.kept);
}

TEST(Split, NoRelation) {
  try {
    split_relations(parse_latex("x+1", registry()));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoRelation);
  }
  LineAnalysis a = analyze_line(line_of("\\sin@{x}+1"), registry());
  ASSERT_EQ(a.cases.size(), 1u);
  EXPECT_EQ(a.cases[0].verdict.reason, SkipReason::kNoRelation);
}

TEST(Filter, PlainSymbols) {
  LineAnalysis a = analyze_line(fixture("plain-symbols"), registry());
  ASSERT_EQ(a.cases.size(), 1u);
  EXPECT_EQ(a.cases[0].verdict.reason, SkipReason::kNoSemanticMath);
}

TEST(Filter, EllipsisApproxAndBigO) {
  for (const char* id : {"gamma-ellipsis", "gamma-approx", "gamma-big-o"}) {
    LineAnalysis a = analyze_line(fixture(id), registry());
    EXPECT_EQ(a.cases.at(0).verdict.reason, SkipReason::kEllipsisApproxAsymptotic) << id;
  }
}

TEST(Filter, FloatEllipsisIsKept) {
  LineAnalysis a = analyze_line(fixture("float-ellipsis"), registry());
  EXPECT_TRUE(a.cases.at(0).verdict.kept);
}

TEST(Filter, NonMacroDefinition) {
  LineAnalysis a = analyze_line(fixture("zeta-definition"), registry());
  EXPECT_EQ(a.cases.at(0).verdict.reason, SkipReason::kNonMacroDefinition);
}

TEST(Substitution, DefinitionReplacesSymbol) {
  LineAnalysis a = analyze_line(fixture("airy-bessel-k"), registry());
  ASSERT_EQ(a.cases.size(), 1u);
  const TestCase& c = a.cases[0];
  ASSERT_EQ(c.substitutions.size(), 1u);
  EXPECT_EQ(c.substitutions[0].first, "\\zeta");
  EXPECT_EQ(render(c.rhs).find("\\zeta"), std::string::npos);
  EXPECT_NE(render(c.rhs).find("\\BesselK{\\frac{1}{3}}@{\\frac{2}{3}z^{3/2}}"), std::string::npos)
      << render(c.rhs);
}

TEST(Substitution, CyclicDefinitionsStop) {
  CorpusLine l = line_of("\\sin@{a} = \\sin@{b}");
  l.symbols_used = {{"a", std::string("a = b + 1"), std::nullopt},
                    {"b", std::string("b = a + 1"), std::nullopt}};
  LineAnalysis a = analyze_line(l, registry());
  ASSERT_TRUE(a.error.has_value());
  EXPECT_EQ(*a.error, ErrorCode::kCyclicDefinition);
}

TEST(Constraints, StruveGainsRecursiveGammaConstraints) {
  LineAnalysis a = analyze_line(fixture("struve-k-integral"), registry());
  ASSERT_EQ(a.cases.size(), 1u);
  std::vector<std::string> got = rendered(a.cases[0].constraints);
  for (const char* want : {"\\Re{z}>0", "\\Re{\\nu+\\frac{1}{2}}>0", "\\Re{\\nu+k+1}>0",
                           "\\Re{-\\nu+k+1}>0", "\\Re{n+\\nu+\\tfrac{3}{2}}>0"}) {
    EXPECT_NE(std::find(got.begin(), got.end(), want), got.end()) << want;
  }
}

TEST(Constraints, NoDuplicates) {
  LineAnalysis a = analyze_line(fixture("struve-k-integral"), registry());
  std::vector<std::string> got = rendered(a.cases[0].constraints);
  std::set<std::string> unique(got.begin(), got.end());
  EXPECT_EQ(unique.size(), got.size());
}

TEST(Constraints, TemplateInstantiation) {
  MathNode arg = parse_latex("\\nu+\\frac{1}{2}", registry());
  MathNode k = instantiate_template("\\Re{$0} > 0", {arg}, registry());
  EXPECT_EQ(render(k), "\\Re{\\nu+\\frac{1}{2}}>0");
}

TEST(Corpus, JsonRoundTrip) {
  const CorpusLine& l = fixture("beta-integral-false");
  CorpusLine back = corpus_line_from_json(corpus_line_to_json(l));
  EXPECT_EQ(back.latex, l.latex);
  EXPECT_EQ(back.constraints, l.constraints);
  EXPECT_EQ(back.generate_conditions, "False");
}

TEST(Corpus, MissingFile) {
  try {
    load_corpus("/nonexistent.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoFailure);
  }
}

}  // namespace
}  // namespace mathcast
