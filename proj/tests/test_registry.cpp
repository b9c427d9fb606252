#include <gtest/gtest.h>

#include "mathcast/error.hpp"
#include "mathcast/parser.hpp"
#include "mathcast/translator.hpp"
#include "support.hpp"

namespace mathcast {
namespace {

using testing::registry;

TEST(Registry, LookupKnownEntries) {
  const MacroEntry& k = registry().lookup("StruveK");
  ASSERT_TRUE(k.alternative.has_value());
  EXPECT_EQ(*k.alternative, "\\StruveH{$0}@{$1} - \\BesselY{$0}@{$1}");
  EXPECT_FALSE(k.has_translation("mathematica"));

  const MacroEntry& q = registry().lookup("qPochhammer");
  EXPECT_EQ(q.packages.at("maple"), "QDifferenceEquations");
}

TEST(Registry, UnknownNameIsNotFound) {
  try {
    registry().lookup("NoSuchFunction");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(Registry, DuplicateRejected) {
  try {
    parse_registry("f | 0 | 1 | maple:f($0)\nf | 0 | 1 | maple:g($0)\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateMacro);
  }
}

TEST(Registry, PlaceholderBeyondArity) {
  try {
    parse_registry("f | 0 | 2 | maple:f($0,$5)\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadPlaceholder);
  }
}

TEST(Registry, RequiredTargetMissing) {
  try {
    parse_registry("f | 0 | 1 | maple:f($0)\n", {"mathematica"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingTranslation);
  }
}

TEST(Registry, MissingFileIsIoFailure) {
  try {
    load_registry("/nonexistent/registry.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoFailure);
  }
}

TEST(Registry, ExponentialIntegralsDistinct) {
  std::set<std::string> texts;
  for (const char* name : {"expintE", "expintEi", "expintEin"}) {
    MathNode t = parse_latex(std::string("\\") + name + "@{z}", registry());
    texts.insert(translate(t, CasTarget::mathematica(), registry()).text);
  }
  EXPECT_EQ(texts.size(), 3u);
}

// Expanding the alternative by hand gives the same translation.
TEST(Registry, AlternativeMatchesHandExpansion) {
  const auto& m = CasTarget::mathematica();
  auto via_alt = translate(parse_latex("\\StruveK{\\nu}@{z}", registry()), m, registry());
  auto by_hand =
      translate(parse_latex("\\StruveH{\\nu}@{z} - \\BesselY{\\nu}@{z}", registry()), m, registry());
  EXPECT_EQ(via_alt.text, by_hand.text);
  EXPECT_EQ(via_alt.notes.size(), 1u);
}

}  // namespace
}  // namespace mathcast
