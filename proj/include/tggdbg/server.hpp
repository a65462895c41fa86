#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tggdbg/engine.hpp"
#include "tggdbg/serialization.hpp"

namespace tgg {

inline constexpr std::string_view kProtocolVersion = "1";

/// What a fresh connection starts from.
struct SessionConfig {
  std::shared_ptr<const RuleSet> ruleset;
  OperationKind kind = OperationKind::Gen;
  TripleGraph input;
  std::uint64_t seed = 0;

  Session makeSession() const { return Session::create(ruleset, kind, input, seed); }
};

struct Reply {
  Json response;
  std::optional<Json> event;  // dataPackage after a successful state change
};

/// Request dispatcher for one session. Requests are {id, type, params};
/// responses are {id, ok:true, body} or {id, ok:false, error:{code, message}}.
/// Calls are serialized, so concurrent callers observe a total order.
class DebugServer {
 public:
  explicit DebugServer(Session session);

  Reply handle(const Json& request);

  /// One NDJSON input line to the output lines (response first, then the
  /// event if any), each without the trailing newline.
  std::vector<std::string> handleLine(std::string_view line);

  const Session& session() const { return session_; }

 private:
  Json dispatch(const std::string& type, const Json& params, std::optional<Json>& event);

  std::mutex mutex_;
  Session session_;
};

/// Serves one DebugServer per connection on a TCP port. A connection that
/// opens with an HTTP upgrade is handled as a WebSocket carrying NDJSON text
/// frames; anything else is read as plain NDJSON lines.
class TransportServer {
 public:
  TransportServer(SessionConfig config, std::uint16_t port, std::string address = "127.0.0.1");
  ~TransportServer();
  TransportServer(const TransportServer&) = delete;
  TransportServer& operator=(const TransportServer&) = delete;

  /// Bound port (useful when constructed with port 0).
  std::uint16_t port() const;

  /// Accepts connections until stop() is called.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tgg
