#include "mathcast/bridge.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <mutex>
#include <sstream>

#include "mathcast/error.hpp"

namespace mathcast {
namespace {

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { signal(SIGPIPE, SIG_IGN); });
}

Clock::time_point after_seconds(double s) {
  return Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(s));
}

}  // namespace

std::string encode_frame(const std::string& payload) {
  return std::to_string(payload.size()) + ":" + payload + "\n";
}

std::optional<std::string> decode_frame(std::string& buffer) {
  std::size_t colon = buffer.find(':');
  if (colon == std::string::npos) {
    if (buffer.size() > 20) throw Error(ErrorCode::kBackendError, "frame header too long");
    for (char c : buffer) {
      if (c < '0' || c > '9') throw Error(ErrorCode::kBackendError, "malformed frame header");
    }
    return std::nullopt;
  }
  if (colon == 0 || colon > 19) throw Error(ErrorCode::kBackendError, "malformed frame header");
  std::size_t length = 0;
  for (std::size_t i = 0; i < colon; ++i) {
    char c = buffer[i];
    if (c < '0' || c > '9') throw Error(ErrorCode::kBackendError, "malformed frame header");
    length = length * 10 + static_cast<std::size_t>(c - '0');
  }
  if (buffer.size() < colon + 1 + length + 1) return std::nullopt;
  if (buffer[colon + 1 + length] != '\n') {
    throw Error(ErrorCode::kBackendError, "frame is not newline terminated");
  }
  std::string payload = buffer.substr(colon + 1, length);
  buffer.erase(0, colon + 1 + length + 1);
  return payload;
}

BridgeBackend::BridgeBackend(std::string command, double handshake_seconds)
    : command_(std::move(command)), handshake_seconds_(handshake_seconds) {
  ignore_sigpipe();
  start();
}

BridgeBackend::~BridgeBackend() { stop(); }

void BridgeBackend::start() {
  int in[2], out[2];
  if (pipe(in) != 0 || pipe(out) != 0) {
    throw Error(ErrorCode::kBackendUnavailable, "cannot create pipes for " + command_);
  }
  pid_t pid = fork();
  if (pid < 0) throw Error(ErrorCode::kBackendUnavailable, "cannot fork for " + command_);
  if (pid == 0) {
    setpgid(0, 0);  // so stop() reaches whatever sh spawns
    dup2(in[0], STDIN_FILENO);
    dup2(out[1], STDOUT_FILENO);
    close(in[0]);
    close(in[1]);
    close(out[0]);
    close(out[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in[0]);
  close(out[1]);
  pid_ = pid;
  to_child_ = in[1];
  from_child_ = out[0];
  buffer_.clear();
  try {
    send("HELLO");
    std::optional<std::string> greeting = receive(after_seconds(handshake_seconds_));
    if (!greeting || greeting->rfind("READY", 0) != 0) {
      throw Error(ErrorCode::kBackendUnavailable, "no greeting from " + command_);
    }
  } catch (const Error& e) {
    stop();
    throw Error(ErrorCode::kBackendUnavailable, "bridge '" + command_ + "' unavailable: " + e.detail());
  }
}

void BridgeBackend::stop() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    kill(-pid_, SIGKILL);
    kill(pid_, SIGKILL);
    waitpid(pid_, nullptr, 0);
  }
  pid_ = -1;
}

void BridgeBackend::send(const std::string& payload) {
  std::string frame = encode_frame(payload);
  std::size_t done = 0;
  while (done < frame.size()) {
    ssize_t n = write(to_child_, frame.data() + done, frame.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kBackendError, "bridge session closed its input");
    }
    done += static_cast<std::size_t>(n);
  }
}

std::optional<std::string> BridgeBackend::receive(Clock::time_point deadline) {
  for (;;) {
    if (std::optional<std::string> frame = decode_frame(buffer_)) return frame;
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (left.count() <= 0) return std::nullopt;
    pollfd p{from_child_, POLLIN, 0};
    int r = poll(&p, 1, static_cast<int>(std::min<long long>(left.count(), 1 << 30)));
    if (r < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kBackendError, "poll failed on bridge session");
    }
    if (r == 0) return std::nullopt;
    char chunk[4096];
    ssize_t n = read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw Error(ErrorCode::kBackendError, "bridge session ended");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::optional<std::string> BridgeBackend::request(const std::string& verb, const std::string& body,
                                                  Clock::time_point deadline) {
  if (pid_ < 0) start();
  std::string id = std::to_string(next_id_++);
  try {
    send(verb + " " + id + " " + body);
    const std::string prefix = "RESULT " + id;
    for (;;) {
      std::optional<std::string> frame = receive(deadline);
      if (!frame) {
        stop();
        return std::nullopt;
      }
      if (frame->rfind(prefix, 0) != 0) continue;  // stale reply
      std::string rest = frame->substr(prefix.size());
      if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
      if (rest == "TIMEOUT") return std::nullopt;
      return rest;
    }
  } catch (const Error&) {
    stop();
    throw;
  }
}

EvalReply BridgeBackend::evaluate(const CaseForm& form, const TestAssignment& assignment,
                                  Clock::time_point deadline) {
  EvalReply reply;
  std::optional<std::string> text;
  try {
    text = request("EVAL", numeric_command(form, assignment), deadline);
  } catch (const Error& e) {
    reply.tag = std::string(error_code_name(e.code()));
    return reply;
  }
  if (!text) {
    reply.kind = EvalReply::Kind::kTimeout;
    return reply;
  }
  if (*text == "True" || *text == "true" || *text == "False" || *text == "false") {
    reply.kind = EvalReply::Kind::kTruth;
    reply.truth = (*text)[0] == 'T' || (*text)[0] == 't';
    return reply;
  }
  if (text->rfind("ERROR", 0) == 0) {
    reply.tag = "backend: " + text->substr(text->size() > 6 ? 6 : text->size());
    return reply;
  }
  std::istringstream in(*text);
  double re = 0, im = 0;
  if (!(in >> re)) {
    reply.tag = "BackendError";
    return reply;
  }
  if (!(in >> im)) im = 0;
  reply.kind = EvalReply::Kind::kValue;
  reply.value = Complex(re, im);
  return reply;
}

SymbolicOutcome BridgeBackend::simplify(const CaseForm& form, Clock::time_point deadline) {
  SymbolicOutcome out;
  try {
    std::optional<std::string> text = request("SIMPLIFY", symbolic_command(form), deadline);
    if (!text) {
      out.status = SymbolicStatus::kError;
      out.message = "timeout";
      return out;
    }
    return parse_symbolic_reply(*text);
  } catch (const Error& e) {
    out.status = SymbolicStatus::kError;
    out.message = e.what();
    return out;
  }
}

}  // namespace mathcast
