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

// Newline-delimited JSON protocol spoken between the attribution pipeline and
// an out-of-process model.
//
//   handshake (server, first line)
//     {"protocol":"smattr-oracle","version":1,"d":D,"k":K,"h":H,"w":W,"c":C}
//   request
//     {"id":u64,"op":"embed"|"evidence"|"class_weight",
//      "h":H,"w":W,"c":C,"data":"<base64 LE float32, row-major HWC>",
//      "category":u32}                      (category: class_weight only)
//   response
//     {"id":u64,"ok":true,"vector":[f64,...]}
//     {"id":u64,"ok":false,"error":"message"}
//
// The same framing is used over a child process's stdin/stdout and over a
// TCP stream.

#ifndef SMATTR_PROTOCOL_HPP_
#define SMATTR_PROTOCOL_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "smattr/oracle.hpp"

namespace smattr::protocol {

inline constexpr const char* kProtocolName = "smattr-oracle";
inline constexpr int kProtocolVersion = 1;

std::string Base64Encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> Base64Decode(const std::string& text);

std::string EncodeFloats(std::span<const float> values);
std::vector<float> DecodeFloats(const std::string& text);

nlohmann::json Handshake(const OracleShape& shape);
OracleShape ParseHandshake(const std::string& line);

enum class Op { kEmbed, kEvidence, kClassWeight };
const char* OpName(Op op);

nlohmann::json ImageRequest(std::uint64_t id, Op op, const Image& image);
nlohmann::json ClassWeightRequest(std::uint64_t id, int category);

// Answers one request line against `oracle`. Never throws; malformed
// requests produce an ok:false response (id 0 when unparseable).
std::string HandleRequest(const Oracle& oracle, const std::string& line);

// Line-oriented duplex channel over a pair of file descriptors.
class LineChannel {
 public:
  LineChannel(int read_fd, int write_fd) : read_fd_(read_fd), write_fd_(write_fd) {}

  // Blocks until a full line arrives. nullopt on EOF; kOracleIo on timeout
  // or read failure. A negative timeout waits forever.
  std::optional<std::string> ReadLine(std::chrono::milliseconds timeout);
  void WriteLine(const std::string& line);

 private:
  int read_fd_;
  int write_fd_;
  std::string buffer_;
};

// Serves requests until EOF on the channel.
void Serve(const Oracle& oracle, LineChannel& channel);

}  // namespace smattr::protocol

#endif  // SMATTR_PROTOCOL_HPP_
