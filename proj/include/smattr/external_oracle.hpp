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

#ifndef SMATTR_EXTERNAL_ORACLE_HPP_
#define SMATTR_EXTERNAL_ORACLE_HPP_

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "smattr/oracle.hpp"
#include "smattr/protocol.hpp"

namespace smattr {

struct ExternalConfig {
  // Shell command line of a child speaking the oracle protocol on stdio.
  std::string command;
  // Alternatively "host:port" of a server speaking it over TCP.
  std::string address;
  int timeout_ms = 30000;
};

// Oracle backed by an out-of-process model. Requests are serialized over a
// single connection and correlated by id.
class ExternalOracle final : public Oracle {
 public:
  explicit ExternalOracle(const ExternalConfig& config);
  ~ExternalOracle() override;

  ExternalOracle(const ExternalOracle&) = delete;
  ExternalOracle& operator=(const ExternalOracle&) = delete;

  const OracleShape& shape() const override { return shape_; }
  FeatureVector Embed(const Image& image) const override;
  EvidenceVector Evidence(const Image& image) const override;
  FeatureVector ClassWeight(int category) const override;

 private:
  Eigen::VectorXf Call(const nlohmann::json& request, std::uint64_t id,
                       int expected_size) const;
  void SpawnChild(const std::string& command);
  void ConnectTcp(const std::string& address);
  void Close();

  OracleShape shape_;
  std::chrono::milliseconds timeout_;
  pid_t child_ = -1;
  int read_fd_ = -1;
  int write_fd_ = -1;
  mutable std::mutex mutex_;
  mutable std::uint64_t next_id_ = 1;
  mutable std::unique_ptr<protocol::LineChannel> channel_;
};

// Accepts one TCP connection on `port` (0 picks a free port; the bound port
// is reported through `on_listen`) and serves it until EOF.
void ServeTcpOnce(const Oracle& oracle, int port,
                  const std::function<void(int)>& on_listen);

}  // namespace smattr

#endif  // SMATTR_EXTERNAL_ORACLE_HPP_
