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

#include "smattr/protocol.hpp"

#include <poll.h>
#include <unistd.h>

#include <array>
#include <bit>
#include <cerrno>
#include <cstring>

#include "smattr/error.hpp"

namespace smattr::protocol {
namespace {

constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int DecodeChar(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

static_assert(std::endian::native == std::endian::little,
              "wire format assumes a little-endian host");

nlohmann::json ErrorResponse(std::uint64_t id, const std::string& message) {
  return {{"id", id}, {"ok", false}, {"error", message}};
}

template <typename Vector>
nlohmann::json VectorResponse(std::uint64_t id, const Vector& v) {
  std::vector<double> values(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) values[i] = v[i];
  return {{"id", id}, {"ok", true}, {"vector", values}};
}

Image ImageFromRequest(const nlohmann::json& request) {
  const int h = request.at("h").get<int>();
  const int w = request.at("w").get<int>();
  const int c = request.at("c").get<int>();
  std::vector<float> values = DecodeFloats(request.at("data").get<std::string>());
  Eigen::ArrayXf data =
      Eigen::Map<Eigen::ArrayXf>(values.data(), static_cast<Eigen::Index>(values.size()));
  return Image::FromData(h, w, c, std::move(data));
}

}  // namespace

std::string Base64Encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const std::uint32_t v = bytes[i] << 16;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += "==";
  } else if (rest == 2) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> Base64Decode(const std::string& text) {
  if (text.size() % 4 != 0) {
    Fail(ErrorKind::kFormat, "base64 length is not a multiple of 4");
  }
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    std::array<int, 4> q{};
    int pad = 0;
    for (int j = 0; j < 4; ++j) {
      const char c = text[i + j];
      if (c == '=' && i + 4 == text.size() && j >= 2) {
        q[j] = 0;
        ++pad;
        continue;
      }
      if (pad > 0) Fail(ErrorKind::kFormat, "base64 data after padding");
      q[j] = DecodeChar(c);
      if (q[j] < 0) Fail(ErrorKind::kFormat, "invalid base64 character");
    }
    const std::uint32_t v = (q[0] << 18) | (q[1] << 12) | (q[2] << 6) | q[3];
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(v >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

std::string EncodeFloats(std::span<const float> values) {
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(values.data());
  return Base64Encode({bytes, values.size() * sizeof(float)});
}

std::vector<float> DecodeFloats(const std::string& text) {
  const std::vector<std::uint8_t> bytes = Base64Decode(text);
  if (bytes.size() % sizeof(float) != 0) {
    Fail(ErrorKind::kFormat, "float payload length is not a multiple of 4");
  }
  std::vector<float> out(bytes.size() / sizeof(float));
  std::memcpy(out.data(), bytes.data(), bytes.size());
  return out;
}

nlohmann::json Handshake(const OracleShape& shape) {
  return {{"protocol", kProtocolName}, {"version", kProtocolVersion},
          {"d", shape.feature_dim},    {"k", shape.categories},
          {"h", shape.height},         {"w", shape.width},
          {"c", shape.channels}};
}

OracleShape ParseHandshake(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kOracleIo, std::string("handshake is not JSON: ") + e.what());
  }
  try {
    if (j.at("protocol").get<std::string>() != kProtocolName) {
      Fail(ErrorKind::kOracleIo, "unexpected protocol name in handshake");
    }
    if (j.at("version").get<int>() != kProtocolVersion) {
      Fail(ErrorKind::kOracleIo, "unsupported protocol version");
    }
    OracleShape shape{j.at("d").get<int>(), j.at("k").get<int>(),
                      j.at("h").get<int>(), j.at("w").get<int>(),
                      j.at("c").get<int>()};
    if (shape.feature_dim < 1 || shape.categories < 2 || shape.height < 1 ||
        shape.width < 1 || (shape.channels != 1 && shape.channels != 3)) {
      Fail(ErrorKind::kOracleIo, "handshake declares an invalid shape");
    }
    return shape;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kOracleIo, std::string("malformed handshake: ") + e.what());
  }
}

const char* OpName(Op op) {
  switch (op) {
    case Op::kEmbed:
      return "embed";
    case Op::kEvidence:
      return "evidence";
    case Op::kClassWeight:
      return "class_weight";
  }
  return "?";
}

nlohmann::json ImageRequest(std::uint64_t id, Op op, const Image& image) {
  return {{"id", id},
          {"op", OpName(op)},
          {"h", image.height},
          {"w", image.width},
          {"c", image.channels},
          {"data", EncodeFloats({image.data.data(),
                                 static_cast<std::size_t>(image.data.size())})}};
}

nlohmann::json ClassWeightRequest(std::uint64_t id, int category) {
  return {{"id", id}, {"op", OpName(Op::kClassWeight)}, {"category", category}};
}

std::string HandleRequest(const Oracle& oracle, const std::string& line) {
  std::uint64_t id = 0;
  try {
    const nlohmann::json request = nlohmann::json::parse(line);
    id = request.at("id").get<std::uint64_t>();
    const std::string op = request.at("op").get<std::string>();
    if (op == "embed") {
      return VectorResponse(id, oracle.Embed(ImageFromRequest(request))).dump();
    }
    if (op == "evidence") {
      return VectorResponse(id, oracle.Evidence(ImageFromRequest(request))).dump();
    }
    if (op == "class_weight") {
      return VectorResponse(
                 id, oracle.ClassWeight(request.at("category").get<int>()))
          .dump();
    }
    return ErrorResponse(id, "unknown op '" + op + "'").dump();
  } catch (const std::exception& e) {
    return ErrorResponse(id, e.what()).dump();
  }
}

std::optional<std::string> LineChannel::ReadLine(
    std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    const auto newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      return line;
    }
    int wait_ms = -1;
    if (timeout.count() >= 0) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) Fail(ErrorKind::kOracleIo, "oracle read timed out");
      wait_ms = static_cast<int>(left.count());
    }
    pollfd pfd{read_fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, wait_ms);
    if (ready < 0) {
      if (errno == EINTR) continue;
      Fail(ErrorKind::kOracleIo, std::string("poll: ") + std::strerror(errno));
    }
    if (ready == 0) Fail(ErrorKind::kOracleIo, "oracle read timed out");
    char chunk[65536];
    const ssize_t got = ::read(read_fd_, chunk, sizeof(chunk));
    if (got < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      Fail(ErrorKind::kOracleIo, std::string("read: ") + std::strerror(errno));
    }
    if (got == 0) {
      if (buffer_.empty()) return std::nullopt;
      std::string line = std::move(buffer_);
      buffer_.clear();
      return line;
    }
    buffer_.append(chunk, static_cast<std::size_t>(got));
  }
}

void LineChannel::WriteLine(const std::string& line) {
  std::string framed = line;
  framed += '\n';
  std::size_t sent = 0;
  while (sent < framed.size()) {
    const ssize_t n = ::write(write_fd_, framed.data() + sent, framed.size() - sent);
    if (n < 0) {
      if (errno == EINTR) continue;
      Fail(ErrorKind::kOracleIo, std::string("write: ") + std::strerror(errno));
    }
    sent += static_cast<std::size_t>(n);
  }
}

void Serve(const Oracle& oracle, LineChannel& channel) {
  channel.WriteLine(Handshake(oracle.shape()).dump());
  while (auto line = channel.ReadLine(std::chrono::milliseconds(-1))) {
    if (line->empty()) continue;
    channel.WriteLine(HandleRequest(oracle, *line));
  }
}

}  // namespace smattr::protocol
