#include "mapc/protocol.hpp"

#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>
#include <poll.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <iostream>
#include <system_error>
#include <thread>
#include <vector>

namespace mapc::wire {

namespace {

void write_all(int fd, const char* data, std::size_t len) {
  while (len > 0) {
    const ssize_t n = ::write(fd, data, len);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::system_error(errno, std::generic_category(), "write_frame");
    }
    data += n;
    len -= static_cast<std::size_t>(n);
  }
}

// Returns bytes read; less than len only on EOF.
std::size_t read_all(int fd, char* data, std::size_t len) {
  std::size_t got = 0;
  while (got < len) {
    const ssize_t n = ::read(fd, data + got, len - got);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::system_error(errno, std::generic_category(), "read_frame");
    }
    if (n == 0) break;
    got += static_cast<std::size_t>(n);
  }
  return got;
}

nlohmann::json error_reply(const std::string& code, const std::string& msg) {
  return {{"error", code}, {"msg", msg}};
}

nlohmann::json mask_json(const ActionMask& mask) {
  nlohmann::json out = nlohmann::json::array();
  for (auto m : mask) out.push_back(static_cast<int>(m));
  return out;
}

}  // namespace

void write_frame(int fd, std::string_view payload) {
  if (payload.size() > kMaxFrameBytes) throw std::length_error("write_frame: payload too large");
  const auto len = static_cast<std::uint32_t>(payload.size());
  const std::array<char, 4> header{static_cast<char>((len >> 24) & 0xFF), static_cast<char>((len >> 16) & 0xFF),
                                   static_cast<char>((len >> 8) & 0xFF), static_cast<char>(len & 0xFF)};
  write_all(fd, header.data(), header.size());
  write_all(fd, payload.data(), payload.size());
}

std::optional<std::string> read_frame(int fd) {
  std::array<unsigned char, 4> header{};
  const std::size_t got = read_all(fd, reinterpret_cast<char*>(header.data()), header.size());
  if (got == 0) return std::nullopt;
  if (got < header.size()) throw std::runtime_error("read_frame: truncated header");
  const std::uint32_t len = (std::uint32_t{header[0]} << 24) | (std::uint32_t{header[1]} << 16) |
                            (std::uint32_t{header[2]} << 8) | std::uint32_t{header[3]};
  if (len > kMaxFrameBytes) throw std::length_error("read_frame: frame exceeds limit");
  std::string payload(len, '\0');
  if (read_all(fd, payload.data(), len) < len) throw std::runtime_error("read_frame: truncated payload");
  return payload;
}

EnvSession::EnvSession(EnvConfig cfg) : env_(std::move(cfg)) {}

nlohmann::json EnvSession::handle(const nlohmann::json& request) {
  if (closed_) return error_reply("closed", "session is closed");
  try {
    if (!request.is_object() || !request.contains("cmd") || !request["cmd"].is_string()) {
      return error_reply("bad_request", "expected an object with a string 'cmd'");
    }
    const auto cmd = request["cmd"].get<std::string>();
    if (cmd == "reset") {
      const bool seed_ok = request.contains("seed") && request["seed"].is_number_integer() &&
                           (request["seed"].is_number_unsigned() || request["seed"].get<std::int64_t>() >= 0);
      if (!seed_ok) {
        return error_reply("bad_request", "reset needs an unsigned integer 'seed'");
      }
      const EnvReset r = env_.reset(request["seed"].get<std::uint64_t>());
      return {{"obs", r.observation}, {"mask", mask_json(r.mask)}, {"n", r.sta_count}, {"z", r.action_count}};
    }
    if (cmd == "step") {
      if (!request.contains("action") || !request["action"].is_number_integer() ||
          request["action"].get<std::int64_t>() < 0 ||
          request["action"].get<std::int64_t>() > std::numeric_limits<std::uint32_t>::max()) {
        return error_reply("invalid_action", "step needs a non-negative integer 'action'");
      }
      const EnvStep s = env_.step(request["action"].get<ActionId>());
      return {{"obs", s.observation}, {"mask", mask_json(s.mask)}, {"reward", s.reward},
              {"terminated", s.terminated}, {"truncated", s.truncated}, {"info", s.info}};
    }
    if (cmd == "close") {
      closed_ = true;
      return {{"ok", true}};
    }
    return error_reply("unknown_cmd", "unknown command '" + cmd + "'");
  } catch (const ProtocolError& e) {
    return error_reply(e.code(), e.what());
  } catch (const std::exception& e) {
    return error_reply("internal", e.what());
  }
}

nlohmann::json EnvSession::handle_text(std::string_view request) {
  nlohmann::json parsed = nlohmann::json::parse(request, nullptr, false);
  if (parsed.is_discarded()) return error_reply("bad_request", "malformed JSON");
  return handle(parsed);
}

void serve_stream(int in_fd, int out_fd, const EnvConfig& cfg) {
  EnvSession session(cfg);
  while (!session.closed()) {
    std::optional<std::string> frame;
    try {
      frame = read_frame(in_fd);
    } catch (const std::exception& e) {
      std::cerr << "serve-env: " << e.what() << '\n';
      return;
    }
    if (!frame) return;
    write_frame(out_fd, session.handle_text(*frame).dump());
  }
}

void serve_unix_socket(const std::string& path, const EnvConfig& cfg, const std::atomic<bool>* stop,
                       std::size_t max_connections) {
  sockaddr_un addr{};
  if (path.size() >= sizeof(addr.sun_path)) throw std::invalid_argument("socket path too long: " + path);
  const int listener = ::socket(AF_UNIX, SOCK_STREAM, 0);
  if (listener < 0) throw std::system_error(errno, std::generic_category(), "socket");
  addr.sun_family = AF_UNIX;
  std::strncpy(addr.sun_path, path.c_str(), sizeof(addr.sun_path) - 1);
  ::unlink(path.c_str());
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0 || ::listen(listener, 16) < 0) {
    const int err = errno;
    ::close(listener);
    throw std::system_error(err, std::generic_category(), "bind/listen " + path);
  }

  std::vector<std::thread> workers;
  std::size_t accepted = 0;
  while (!(stop && stop->load()) && (max_connections == 0 || accepted < max_connections)) {
    pollfd pfd{listener, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, 100);
    if (ready < 0 && errno != EINTR) break;
    if (ready <= 0) continue;
    const int conn = ::accept(listener, nullptr, nullptr);
    if (conn < 0) continue;
    ++accepted;
    workers.emplace_back([conn, &cfg] {
      try {
        serve_stream(conn, conn, cfg);
      } catch (const std::exception& e) {
        std::cerr << "serve-env: connection error: " << e.what() << '\n';
      }
      ::close(conn);
    });
  }
  for (auto& w : workers) w.join();
  ::close(listener);
  ::unlink(path.c_str());
}

int connect_unix_socket(const std::string& path) {
  sockaddr_un addr{};
  if (path.size() >= sizeof(addr.sun_path)) throw std::invalid_argument("socket path too long: " + path);
  const int fd = ::socket(AF_UNIX, SOCK_STREAM, 0);
  if (fd < 0) throw std::system_error(errno, std::generic_category(), "socket");
  addr.sun_family = AF_UNIX;
  std::strncpy(addr.sun_path, path.c_str(), sizeof(addr.sun_path) - 1);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    const int err = errno;
    ::close(fd);
    throw std::system_error(err, std::generic_category(), "connect " + path);
  }
  return fd;
}

nlohmann::json EnvClient::call(const nlohmann::json& request) {
  write_frame(out_, request.dump());
  auto reply = read_frame(in_);
  if (!reply) throw std::runtime_error("EnvClient: server closed the stream");
  return nlohmann::json::parse(*reply);
}

}  // namespace mapc::wire
