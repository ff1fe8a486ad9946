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

#include "smattr/random.hpp"

#include <utility>

#include "smattr/error.hpp"

namespace smattr {
namespace {

inline std::uint64_t Rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t SplitMix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) s = SplitMix64(x);
}

std::uint64_t Xoshiro256::Next() {
  const std::uint64_t result = Rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = Rotl(s_[3], 45);
  return result;
}

double Xoshiro256::Unit() {
  return static_cast<double>(Next() >> 11) * 0x1.0p-53;
}

double Xoshiro256::Uniform(double lo, double hi) {
  return lo + (hi - lo) * Unit();
}

std::uint64_t Xoshiro256::Below(std::uint64_t n) {
  if (n == 0) Fail(ErrorKind::kInvalidArgument, "Below(0) has no values");
  // 2^64 mod n, computed without overflow.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = Next();
    // Draws below the threshold would bias r % n.
    if (r >= threshold) return r % n;
  }
}

std::int64_t Xoshiro256::Between(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) Fail(ErrorKind::kInvalidArgument, "Between: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(Below(span));
}

std::vector<int> SampleWithoutReplacement(Xoshiro256& rng,
                                          std::vector<int> pool, int count) {
  if (count < 0 || count > static_cast<int>(pool.size())) {
    Fail(ErrorKind::kInvalidArgument, "sample size exceeds pool");
  }
  for (int i = 0; i < count; ++i) {
    const auto j = i + static_cast<int>(rng.Below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace smattr
