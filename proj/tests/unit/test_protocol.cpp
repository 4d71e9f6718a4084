#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <thread>

#include "doctest.h"
#include "mapc/protocol.hpp"

using namespace mapc;
using nlohmann::json;

namespace {

EnvConfig short_env() {
  EnvConfig cfg;
  cfg.sim.sim_duration_s = 0.2;
  return cfg;
}

struct SocketPair {
  int a = -1, b = -1;
  SocketPair() {
    int fds[2];
    REQUIRE(::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) == 0);
    a = fds[0];
    b = fds[1];
  }
  ~SocketPair() {
    if (a >= 0) ::close(a);
    if (b >= 0) ::close(b);
  }
};

}  // namespace

TEST_CASE("frame round trip with a big-endian length prefix") {
  SocketPair p;
  wire::write_frame(p.a, "{\"x\":1}");
  unsigned char header[4];
  REQUIRE(::read(p.b, header, 4) == 4);
  CHECK(header[0] == 0);
  CHECK(header[1] == 0);
  CHECK(header[2] == 0);
  CHECK(header[3] == 7);
  char body[7];
  REQUIRE(::read(p.b, body, 7) == 7);
  CHECK(std::string(body, 7) == "{\"x\":1}");

  wire::write_frame(p.a, "");
  wire::write_frame(p.a, std::string(100000, 'z'));
  CHECK(wire::read_frame(p.b) == std::string());
  CHECK(wire::read_frame(p.b)->size() == 100000);
  ::close(p.a);
  p.a = -1;
  CHECK_FALSE(wire::read_frame(p.b).has_value());
}

TEST_CASE("truncated frame is an error") {
  SocketPair p;
  const unsigned char header[4] = {0, 0, 0, 10};
  REQUIRE(::write(p.a, header, 4) == 4);
  REQUIRE(::write(p.a, "abc", 3) == 3);
  ::close(p.a);
  p.a = -1;
  CHECK_THROWS(wire::read_frame(p.b));
}

TEST_CASE("session replies and error codes") {
  wire::EnvSession s(short_env());
  CHECK(s.handle_text("not json")["error"] == "bad_request");
  CHECK(s.handle(json{{"cmd", "dance"}})["error"] == "unknown_cmd");
  CHECK(s.handle(json{{"cmd", "step"}, {"action", 0}})["error"] == "not_reset");
  CHECK(s.handle(json{{"cmd", "reset"}})["error"] == "bad_request");
  CHECK(s.handle(json{{"cmd", "step"}, {"action", -1}})["error"] == "invalid_action");

  const json r = s.handle(json{{"cmd", "reset"}, {"seed", 3}});
  REQUIRE(r.contains("obs"));
  const std::size_t n = r["n"], z = r["z"];
  CHECK(r["obs"].size() == 3 * n);
  CHECK(r["mask"].size() == z);
  CHECK(s.handle(json{{"cmd", "step"}, {"action", z}})["error"] == "invalid_action");
  for (std::size_t k = 0; k < z; ++k) {
    if (r["mask"][k] == 0) {
      CHECK(s.handle(json{{"cmd", "step"}, {"action", k}})["error"] == "masked_action");
      break;
    }
  }
  std::size_t a = 0;
  while (r["mask"][a] == 0) ++a;
  const json step = s.handle(json{{"cmd", "step"}, {"action", a}});
  for (const char* key : {"obs", "mask", "reward", "terminated", "truncated", "info"}) CHECK(step.contains(key));
  CHECK(step["info"]["action"] == a);
  CHECK(s.handle(json{{"cmd", "close"}})["ok"] == true);
  CHECK(s.closed());
  CHECK(s.handle(json{{"cmd", "reset"}, {"seed", 3}})["error"] == "closed");
}

TEST_CASE("doubles survive the wire unchanged") {
  wire::EnvSession s(short_env());
  const json r = json::parse(s.handle(json{{"cmd", "reset"}, {"seed", 9}}).dump());
  Environment env(short_env());
  const auto direct = env.reset(9);
  REQUIRE(r["obs"].size() == direct.observation.size());
  for (std::size_t k = 0; k < direct.observation.size(); ++k) CHECK(r["obs"][k].get<double>() == direct.observation[k]);
}

TEST_CASE("stream server over a socket pair") {
  SocketPair p;
  std::thread server([&] { wire::serve_stream(p.b, p.b, short_env()); });
  wire::EnvClient client(p.a, p.a);
  const json r = client.reset(5);
  CHECK(r.contains("mask"));
  CHECK(client.call(json{{"cmd", "bogus"}})["error"] == "unknown_cmd");
  CHECK(client.close()["ok"] == true);
  server.join();
}

TEST_CASE("unix socket server handles concurrent sessions") {
  const auto path = (std::filesystem::temp_directory_path() / ("mapc_test_" + std::to_string(::getpid()) + ".sock")).string();
  std::atomic<bool> stop{false};
  std::thread server([&] { wire::serve_unix_socket(path, short_env(), &stop, 2); });
  int fd1 = -1, fd2 = -1;
  for (int tries = 0; tries < 200 && fd1 < 0; ++tries) {
    try {
      fd1 = wire::connect_unix_socket(path);
    } catch (const std::exception&) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
  }
  REQUIRE(fd1 >= 0);
  fd2 = wire::connect_unix_socket(path);
  wire::EnvClient c1(fd1, fd1), c2(fd2, fd2);
  const json a = c1.reset(1);
  const json b = c2.reset(1);
  CHECK(a == b);
  const json c = c2.reset(2);
  CHECK(c1.close()["ok"] == true);
  CHECK(c2.close()["ok"] == true);
  ::close(fd1);
  ::close(fd2);
  server.join();
  CHECK_FALSE(std::filesystem::exists(path));
}

TEST_CASE("mapcsim serve-env --stdio speaks the protocol") {
  int to_child[2], from_child[2];
  REQUIRE(::pipe(to_child) == 0);
  REQUIRE(::pipe(from_child) == 0);
  const pid_t pid = ::fork();
  REQUIRE(pid >= 0);
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::execl(MAPCSIM_PATH, MAPCSIM_PATH, "serve-env", "--stdio", static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  wire::EnvClient client(from_child[0], to_child[1]);
  const json r = client.reset(4);
  REQUIRE(r.contains("mask"));
  Environment env(EnvConfig{});
  const auto direct = env.reset(4);
  CHECK(r["n"] == direct.sta_count);
  CHECK(r["z"] == direct.action_count);
  CHECK(r["obs"].get<std::vector<double>>() == direct.observation);
  std::size_t a = 0;
  while (r["mask"][a] == 0) ++a;
  const json s = client.step(static_cast<std::uint32_t>(a));
  CHECK(s["reward"].get<double>() == env.step(static_cast<ActionId>(a)).reward);
  CHECK(client.close()["ok"] == true);
  ::close(to_child[1]);
  ::close(from_child[0]);
  int status = 0;
  ::waitpid(pid, &status, 0);
  CHECK(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
}
