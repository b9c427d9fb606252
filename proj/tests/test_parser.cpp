#include <gtest/gtest.h>

#include "mathcast/error.hpp"
#include "mathcast/parser.hpp"
#include "mathcast/token.hpp"
#include "support.hpp"

namespace mathcast {
namespace {

using testing::registry;

TEST(Tokenizer, PrimeAfterNumberIsIllegal) {
  EXPECT_THROW(tokenize("2'"), Error);
}

TEST(Tokenizer, KindsOfSimpleExpression) {
  auto toks = tokenize("\\sin@{x} \\leq f'");
  ASSERT_EQ(toks.size(), 8u);
  EXPECT_EQ(toks[0].kind, TokenKind::kCommand);
  EXPECT_EQ(toks[1].kind, TokenKind::kAt);
  EXPECT_EQ(toks[2].kind, TokenKind::kOpenDelim);
  EXPECT_EQ(toks[3].kind, TokenKind::kIdentifier);
  EXPECT_EQ(toks[5].kind, TokenKind::kRelation);
  EXPECT_EQ(toks[6].kind, TokenKind::kIdentifier);
  EXPECT_EQ(toks[7].kind, TokenKind::kPrime);
}

TEST(Tokenizer, DropsSpacingCommands) {
  auto toks = tokenize("a\\,\\;b\\quad c");
  ASSERT_EQ(toks.size(), 3u);
  EXPECT_EQ(toks[2].text, "c");
}

TEST(Tokenizer, UnbalancedIsError) {
  try {
    tokenize("(a+b");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnbalancedDelimiter);
  }
}

TEST(Tokenizer, IllegalCharacter) {
  try {
    tokenize("a # b");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIllegalCharacter);
  }
}

TEST(Parser, MacroCallShape) {
  MathNode n = parse_latex("\\JacobiP{\\alpha}{\\beta}{n}@{x}", registry());
  ASSERT_EQ(n.kind, NodeKind::kSequence);
  const MathNode& call = n.children.at(0);
  EXPECT_EQ(call.kind, NodeKind::kMacroCall);
  EXPECT_EQ(call.text, "JacobiP");
  EXPECT_EQ(call.param_count, 3);
  EXPECT_EQ(call.children.size(), 4u);
  EXPECT_EQ(call.at_count, 1);
}

TEST(Parser, PrimeCountOnMacro) {
  MathNode n = parse_latex("\\Hurwitzzeta''@{s}{a}", registry());
  EXPECT_EQ(n.children.at(0).primes, 2);
}

TEST(Parser, RelationChainAlternates) {
  MathNode n = parse_latex("a < b \\leq c", registry());
  ASSERT_EQ(n.kind, NodeKind::kRelationChain);
  ASSERT_EQ(n.children.size(), 5u);
  EXPECT_TRUE(n.children[1].is_operator("<"));
  EXPECT_TRUE(n.children[3].is_operator("\\leq"));
}

TEST(Parser, UnknownMacro) {
  try {
    parse_latex("\\LambertW@{x}", registry());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownMacro);
  }
}

TEST(Parser, ArityMismatch) {
  try {
    parse_latex("\\BesselJ@{z}", registry());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kArityMismatch);
  }
}

TEST(Parser, DepthsIncreaseInsideGroups) {
  MathNode n = parse_latex("a + (b + c)", registry());
  const MathNode& group = n.children.at(2);
  ASSERT_EQ(group.kind, NodeKind::kGroup);
  EXPECT_GT(group.children.at(0).children.at(0).depth, n.children.at(0).depth);
}

// Every fixture (and every attached constraint / definition) survives
// parse -> render -> parse unchanged.
TEST(Parser, RoundTripOverFixtureCorpus) {
  std::size_t checked = 0;
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
        continue;  // deliberately malformed fixtures
      }
      std::string printed = render(first);
      MathNode second = parse_latex(printed, registry());
      EXPECT_TRUE(structurally_equal(first, second)) << line.id << ": " << src << " -> " << printed;
      EXPECT_EQ(render(second), printed) << line.id;
      ++checked;
    }
  }
  EXPECT_GT(checked, 60u);
}

}  // namespace
}  // namespace mathcast
