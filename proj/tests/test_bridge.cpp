#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mathcast/bridge.hpp"
#include "mathcast/error.hpp"
#include "verify_support.hpp"

namespace mathcast {
namespace {

using testing::form_of;
using testing::registry;

std::string fake(const std::string& mode, const std::string& log = {}) {
  std::string cmd = "FAKE_CAS_MODE=" + mode + " ";
  if (!log.empty()) cmd += "FAKE_CAS_LOG=" + log + " ";
  return cmd + FAKE_CAS_PATH;
}

TestValueConfig quick(double timeout) {
  TestValueConfig c = TestValueConfig::defaults();
  c.timeout_seconds = timeout;
  return c;
}

TEST(Frames, RoundTrip) {
  std::string buf = encode_frame("EVAL 1 N[x]") + encode_frame("") + "5:ab";
  EXPECT_EQ(buf.substr(0, 15), "11:EVAL 1 N[x]\n");
  EXPECT_EQ(decode_frame(buf), std::optional<std::string>("EVAL 1 N[x]"));
  EXPECT_EQ(decode_frame(buf), std::optional<std::string>(""));
  EXPECT_EQ(decode_frame(buf), std::nullopt);  // incomplete
  buf += "cde\n";
  EXPECT_EQ(decode_frame(buf), std::optional<std::string>("abcde"));
  EXPECT_TRUE(buf.empty());
}

TEST(Frames, PayloadWithNewlines) {
  std::string buf = encode_frame("a\nb");
  EXPECT_EQ(decode_frame(buf), std::optional<std::string>("a\nb"));
}

TEST(Frames, Malformed) {
  for (std::string bad : {"x2:ab\n", "3:abcX", "123456789012345678901:"}) {
    try {
      decode_frame(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kBackendError);
    }
  }
}

TEST(Bridge, MissingProgramIsUnavailable) {
  try {
    BridgeBackend b("/nonexistent/cas-binary", 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
}

TEST(Bridge, SilentSessionIsUnavailable) {
  try {
    BridgeBackend b(fake("mute"), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
}

TEST(Bridge, ZeroDifferencesVerify) {
  std::string log = ::testing::TempDir() + "fake_cas_zero.log";
  std::remove(log.c_str());
  {
    BridgeBackend b(fake("zero", log));
    NumericOutcome o = numeric_verify(form_of("jacobi-sum"), b, quick(10), registry());
    EXPECT_EQ(o.status, NumericStatus::kVerified);
    EXPECT_EQ(o.tested, 81u);
  }
  std::ifstream in(log);
  std::string first, second;
  std::getline(in, first);
  std::getline(in, second);
  EXPECT_EQ(first, "HELLO");
  EXPECT_EQ(second.rfind("EVAL 1 N[Normal[", 0), 0u) << second;
}

TEST(Bridge, NonZeroDifferencesFail) {
  BridgeBackend b(fake("one"));
  NumericOutcome o = numeric_verify(form_of("jacobi-sum"), b, quick(10), registry());
  EXPECT_EQ(o.status, NumericStatus::kTotalFail);
  EXPECT_EQ(o.passed, 0u);
}

TEST(Bridge, ErrorRepliesAreErrors) {
  BridgeBackend b(fake("error"));
  NumericOutcome o = numeric_verify(form_of("jacobi-sum"), b, quick(10), registry());
  EXPECT_EQ(o.status, NumericStatus::kError);
}

TEST(Bridge, SleepingSessionTimesOutAndRestarts) {
  BridgeBackend b(fake("sleep"));
  auto start = Clock::now();
  NumericOutcome o = numeric_verify(form_of("jacobi-sum"), b, quick(1), registry());
  double took = std::chrono::duration<double>(Clock::now() - start).count();
  EXPECT_EQ(o.status, NumericStatus::kTimeout);
  EXPECT_LT(took, 5.0);
  // The killed session comes back for the next request.
  SymbolicOutcome s = symbolic_verify(form_of("jacobi-sum"), b, quick(5));
  EXPECT_EQ(s.status, SymbolicStatus::kNotSimplified);
}

TEST(Bridge, TimeoutReply) {
  BridgeBackend b(fake("timeout-reply"));
  NumericOutcome o = numeric_verify(form_of("jacobi-sum"), b, quick(10), registry());
  EXPECT_EQ(o.status, NumericStatus::kTimeout);
}

TEST(Bridge, SymbolicReplies) {
  BridgeBackend zero(fake("simplify-zero"));
  EXPECT_EQ(symbolic_verify(form_of("id-gamma-recurrence"), zero, quick(5)).status,
            SymbolicStatus::kSimplifiedZero);
  BridgeBackend cond(fake("conditional"));
  SymbolicOutcome c = symbolic_verify(form_of("id-hurwitz-riemann"), cond, quick(5));
  EXPECT_EQ(c.status, SymbolicStatus::kConditionalZero);
  ASSERT_TRUE(c.condition);
  EXPECT_EQ(*c.condition, "Im[z]!=0 || Re[z]<1");
  BridgeBackend plain(fake("zero"));
  EXPECT_EQ(symbolic_verify(form_of("id-hurwitz-riemann"), plain, quick(5)).status,
            SymbolicStatus::kNotSimplified);
}

TEST(Bridge, RequestIdsIncrease) {
  BridgeBackend b(fake("zero"));
  EXPECT_EQ(b.request("EVAL", "1", Clock::now() + std::chrono::seconds(5)),
            std::optional<std::string>("0 0"));
  EXPECT_EQ(b.request("SIMPLIFY", "x", Clock::now() + std::chrono::seconds(5)),
            std::optional<std::string>("HurwitzZeta[s,a]-Zeta[s]"));
}

}  // namespace
}  // namespace mathcast
