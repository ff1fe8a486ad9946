// Copyright 2026 The smattr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "smattr/external_oracle.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "smattr/error.hpp"

namespace smattr {
namespace {

std::string Errno(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

}  // namespace

ExternalOracle::ExternalOracle(const ExternalConfig& config)
    : timeout_(config.timeout_ms) {
  if (config.timeout_ms <= 0) {
    Fail(ErrorKind::kInvalidConfig, "external oracle timeout must be > 0");
  }
  // A dead peer must surface as EPIPE, not kill the process.
  ::signal(SIGPIPE, SIG_IGN);
  if (config.command.empty() && config.address.empty()) {
    Fail(ErrorKind::kInvalidConfig,
         "external oracle needs a command or an address");
  }
  try {
    if (!config.command.empty()) {
      SpawnChild(config.command);
    } else {
      ConnectTcp(config.address);
    }
    channel_ = std::make_unique<protocol::LineChannel>(read_fd_, write_fd_);
    const auto handshake = channel_->ReadLine(timeout_);
    if (!handshake) Fail(ErrorKind::kOracleIo, "oracle closed before handshake");
    shape_ = protocol::ParseHandshake(*handshake);
  } catch (...) {
    Close();
    throw;
  }
}

ExternalOracle::~ExternalOracle() { Close(); }

void ExternalOracle::Close() {
  if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
  if (read_fd_ >= 0) ::close(read_fd_);
  write_fd_ = read_fd_ = -1;
  if (child_ > 0) {
    int status = 0;
    // Closing stdin asks the child to exit; reap it, forcing if it lingers.
    for (int i = 0; i < 200; ++i) {
      if (::waitpid(child_, &status, WNOHANG) == child_) {
        child_ = -1;
        return;
      }
      ::usleep(10000);
    }
    ::kill(child_, SIGKILL);
    ::waitpid(child_, &status, 0);
    child_ = -1;
  }
}

void ExternalOracle::SpawnChild(const std::string& command) {
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0) Fail(ErrorKind::kOracleIo, Errno("pipe"));
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    Fail(ErrorKind::kOracleIo, Errno("pipe"));
  }
  const pid_t pid = ::fork();
  if (pid < 0) Fail(ErrorKind::kOracleIo, Errno("fork"));
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  child_ = pid;
  write_fd_ = to_child[1];
  read_fd_ = from_child[0];
}

void ExternalOracle::ConnectTcp(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos) {
    Fail(ErrorKind::kInvalidConfig, "oracle address must be host:port");
  }
  const std::string host = address.substr(0, colon);
  const std::string port = address.substr(colon + 1);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* found = nullptr;
  if (::getaddrinfo(host.c_str(), port.c_str(), &hints, &found) != 0) {
    Fail(ErrorKind::kOracleIo, "cannot resolve oracle address " + address);
  }
  int fd = -1;
  for (addrinfo* ai = found; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(found);
  if (fd < 0) Fail(ErrorKind::kOracleIo, "cannot connect to oracle at " + address);
  read_fd_ = fd;
  write_fd_ = fd;
}

Eigen::VectorXf ExternalOracle::Call(const nlohmann::json& request,
                                     std::uint64_t id,
                                     int expected_size) const {
  // Caller holds mutex_.
  channel_->WriteLine(request.dump());
  for (;;) {
    const auto line = channel_->ReadLine(timeout_);
    if (!line) Fail(ErrorKind::kOracleIo, "oracle closed the connection");
    nlohmann::json response;
    try {
      response = nlohmann::json::parse(*line);
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorKind::kOracleIo, std::string("oracle sent non-JSON: ") + e.what());
    }
    try {
      const auto got = response.at("id").get<std::uint64_t>();
      if (got < id) continue;  // stale reply to an abandoned request
      if (got != id) Fail(ErrorKind::kOracleIo, "oracle replied to unknown id");
      if (!response.at("ok").get<bool>()) {
        Fail(ErrorKind::kOracleIo,
             "oracle error: " + response.value("error", std::string("unknown")));
      }
      const auto values = response.at("vector").get<std::vector<double>>();
      if (static_cast<int>(values.size()) != expected_size) {
        Fail(ErrorKind::kOracleIo, "oracle vector has wrong length");
      }
      Eigen::VectorXf out(expected_size);
      for (int i = 0; i < expected_size; ++i) {
        out[i] = static_cast<float>(values[i]);
      }
      return out;
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorKind::kOracleIo, std::string("malformed oracle reply: ") + e.what());
    }
  }
}

FeatureVector ExternalOracle::Embed(const Image& image) const {
  CheckInput(image);
  std::lock_guard<std::mutex> lock(mutex_);
  const std::uint64_t id = next_id_++;
  return Call(protocol::ImageRequest(id, protocol::Op::kEmbed, image), id,
              shape_.feature_dim);
}

EvidenceVector ExternalOracle::Evidence(const Image& image) const {
  CheckInput(image);
  std::lock_guard<std::mutex> lock(mutex_);
  const std::uint64_t id = next_id_++;
  EvidenceVector e = Call(
      protocol::ImageRequest(id, protocol::Op::kEvidence, image), id,
      shape_.categories);
  if (!e.allFinite() || (e.array() < 0.0f).any()) {
    Fail(ErrorKind::kOracleIo, "oracle returned invalid evidence");
  }
  return e;
}

FeatureVector ExternalOracle::ClassWeight(int category) const {
  if (category < 0 || category >= shape_.categories) {
    Fail(ErrorKind::kInvalidArgument,
         "category " + std::to_string(category) + " out of range");
  }
  std::lock_guard<std::mutex> lock(mutex_);
  const std::uint64_t id = next_id_++;
  return Call(protocol::ClassWeightRequest(id, category), id,
              shape_.feature_dim);
}

void ServeTcpOnce(const Oracle& oracle, int port,
                  const std::function<void(int)>& on_listen) {
  const int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) Fail(ErrorKind::kOracleIo, Errno("socket"));
  const int one = 1;
  ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(listener, 1) != 0) {
    ::close(listener);
    Fail(ErrorKind::kOracleIo, Errno("bind/listen"));
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len);
  if (on_listen) on_listen(ntohs(addr.sin_port));
  const int conn = ::accept(listener, nullptr, nullptr);
  ::close(listener);
  if (conn < 0) Fail(ErrorKind::kOracleIo, Errno("accept"));
  protocol::LineChannel channel(conn, conn);
  try {
    protocol::Serve(oracle, channel);
  } catch (...) {
    ::close(conn);
    throw;
  }
  ::close(conn);
}

}  // namespace smattr
