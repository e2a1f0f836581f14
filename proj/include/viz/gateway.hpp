#pragma once

// Front door: the message protocol spoken over /session, the single-writer
// session host behind it, the network server and the command-line entry
// points. docs/protocol.md lists every message.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "viz/session.hpp"
#include "viz/viewlang.hpp"

namespace viz::gateway {

/// Interactive volume frames are capped at this size per side.
inline constexpr std::size_t kMaxStreamSide = 512;

class ProtocolError : public Error {
 public:
  using Error::Error;
};

namespace msg {
struct Command {
  std::string text;
};
struct Pointer {
  PointerEvent event;
};
struct Key {
  std::string key;
};
struct RequestScene {};
struct RequestRender {
  int viewId = 0;
  std::size_t width = 256;
  std::size_t height = 256;
};
}  // namespace msg

using ClientMessage = std::variant<msg::Command, msg::Pointer, msg::Key, msg::RequestScene, msg::RequestRender>;

/// Throws ProtocolError on malformed JSON or schema violations. Unknown
/// fields are ignored.
ClientMessage parseClientMessage(const std::string& text);
nlohmann::json clientMessageToJson(const ClientMessage& m);

/// Server message types that carry each event kind. Every kind travels in a
/// SceneDelta; some also trigger a payload message.
std::vector<std::string> serverMessagesFor(lang::EventKind kind);

nlohmann::json eventToJson(const lang::Event& e);

/// u32 vertexCount | u32 triangleCount | f32 xyz * vertexCount |
/// u32 index * 3 * triangleCount, little-endian.
std::string encodeMeshFrame(const TriangleMesh& mesh);
TriangleMesh decodeMeshFrame(const std::string& bytes);

std::string base64Encode(const std::string& bytes);
std::string base64Decode(const std::string& text);

struct Outgoing {
  enum class Target { Sender, All };
  Target target = Target::Sender;
  bool binary = false;
  std::string payload;
};

/// Owns the live session. Not thread-safe: the server calls it from its one
/// I/O thread, which makes every mutation a single ordered stream.
class SessionHost {
 public:
  explicit SessionHost(lang::EvalContext ctx = {}, Session initial = {});

  /// Handles one text frame from a client and returns what to send, in order.
  std::vector<Outgoing> handle(const std::string& text);

  const Session& session() const { return session_; }
  std::uint64_t version() const { return version_; }

 private:
  std::vector<Outgoing> apply(const msg::Command& m);
  std::vector<Outgoing> apply(const msg::Pointer& m);
  std::vector<Outgoing> apply(const msg::Key& m);
  std::vector<Outgoing> apply(const msg::RequestScene& m);
  std::vector<Outgoing> apply(const msg::RequestRender& m);

  std::vector<Outgoing> commit(Session next, std::vector<lang::Event> events);
  void appendPayloads(const lang::Event& e, Outgoing::Target target, std::vector<Outgoing>& out);
  Outgoing ack() const;

  lang::EvalContext ctx_;
  Session session_;
  std::uint64_t version_ = 0;
  std::uint64_t binaryRef_ = 0;
};

Outgoing errorMessage(const std::string& message, const std::string& origin,
                      std::optional<lang::SourcePos> pos = std::nullopt);

// Network service ----------------------------------------------------------------

struct ServeOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 8080;  // 0 picks a free port
  std::filesystem::path dataDir;
  /// Directory served at "/"; a built-in page is used when empty.
  std::filesystem::path staticDir;
};

class Server {
 public:
  explicit Server(ServeOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Bound port, valid after construction.
  unsigned short port() const;
  /// Serves until stop(); call from one thread.
  void run();
  /// Safe to call from any thread.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Command line ---------------------------------------------------------------------

enum ExitCode : int { kExitOk = 0, kExitScriptErrors = 1, kExitUnreadable = 2, kExitRenderFailure = 3 };

struct RunOptions {
  std::filesystem::path script;
  std::filesystem::path outDir = ".";
  /// Size for snapshots that do not give one.
  std::optional<lang::PixelSize> size;
  bool strict = false;
  std::filesystem::path dataDir;  // empty: VIZ_DATA_DIR, then the script's directory
};

int cliRun(const RunOptions& options, std::ostream& log);

}  // namespace viz::gateway
