#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "mapc/rlenv.hpp"

// Wire protocol for external agents. Every message is a 4-byte big-endian
// payload length followed by that many bytes of UTF-8 JSON.
//
//   {"cmd":"reset","seed":u64}  -> {"obs":[...],"mask":[...],"n":N,"z":Z}
//   {"cmd":"step","action":u32} -> {"obs":[...],"mask":[...],"reward":r,
//                                   "terminated":b,"truncated":b,"info":{...}}
//   {"cmd":"close"}             -> {"ok":true}
//   failure                     -> {"error":code,"msg":text}
namespace mapc::wire {

inline constexpr std::size_t kMaxFrameBytes = 64u << 20;

/// Throws std::system_error on I/O failure.
void write_frame(int fd, std::string_view payload);
/// nullopt on clean EOF before a header; throws on truncated frames.
std::optional<std::string> read_frame(int fd);

/// One client's environment state machine. handle() never throws; protocol
/// and parse errors come back as {"error":...} replies.
class EnvSession {
 public:
  explicit EnvSession(EnvConfig cfg);

  nlohmann::json handle(const nlohmann::json& request);
  nlohmann::json handle_text(std::string_view request);
  bool closed() const { return closed_; }
  const Environment& environment() const { return env_; }

 private:
  Environment env_;
  bool closed_ = false;
};

/// Serves requests from in_fd, replying on out_fd, until close or EOF.
void serve_stream(int in_fd, int out_fd, const EnvConfig& cfg);

/// Listens on a Unix stream socket; each connection gets its own
/// environment and thread. Returns when `stop` becomes true (checked between
/// accepts) or after `max_connections` connections finished (0 = unlimited).
void serve_unix_socket(const std::string& path, const EnvConfig& cfg,
                       const std::atomic<bool>* stop = nullptr, std::size_t max_connections = 0);

/// Connects to a Unix socket served by serve_unix_socket. Returns the fd.
int connect_unix_socket(const std::string& path);

/// Blocking request/reply client over a pair of descriptors.
class EnvClient {
 public:
  EnvClient(int in_fd, int out_fd) : in_(in_fd), out_(out_fd) {}

  nlohmann::json call(const nlohmann::json& request);
  nlohmann::json reset(std::uint64_t seed) { return call({{"cmd", "reset"}, {"seed", seed}}); }
  nlohmann::json step(std::uint32_t action) { return call({{"cmd", "step"}, {"action", action}}); }
  nlohmann::json close() { return call({{"cmd", "close"}}); }

 private:
  int in_;
  int out_;
};

}  // namespace mapc::wire
