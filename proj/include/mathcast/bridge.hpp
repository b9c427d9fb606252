#pragma once

#include <optional>
#include <string>
#include <sys/types.h>

#include "mathcast/verifier.hpp"

namespace mathcast {

// Frames are `<byte length>:<payload>\n`.
std::string encode_frame(const std::string& payload);
// Removes and returns one complete frame from the front of `buffer`;
// nullopt when more bytes are needed. Throws kBackendError when malformed.
std::optional<std::string> decode_frame(std::string& buffer);

// Drives an external CAS through a child process (see docs/bridge-protocol.md).
// One instance is one session and is not shared between threads.
class BridgeBackend : public Backend {
 public:
  // Starts the session; throws kBackendUnavailable if it does not greet.
  explicit BridgeBackend(std::string command, double handshake_seconds = 10);
  ~BridgeBackend() override;
  BridgeBackend(const BridgeBackend&) = delete;
  BridgeBackend& operator=(const BridgeBackend&) = delete;

  std::string id() const override { return "bridge:" + command_; }
  EvalReply evaluate(const CaseForm& form, const TestAssignment& assignment,
                     Clock::time_point deadline) override;
  SymbolicOutcome simplify(const CaseForm& form, Clock::time_point deadline) override;

  // Sends `<verb> <id> <body>` and returns the reply text after `RESULT <id> `.
  // nullopt on timeout, after which the session is restarted.
  std::optional<std::string> request(const std::string& verb, const std::string& body,
                                     Clock::time_point deadline);

 private:
  void start();
  void stop();
  void send(const std::string& payload);
  // nullopt on timeout; throws kBackendError on EOF.
  std::optional<std::string> receive(Clock::time_point deadline);

  std::string command_;
  double handshake_seconds_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  long long next_id_ = 1;
};

}  // namespace mathcast
