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

#ifndef SMATTR_RANDOM_HPP_
#define SMATTR_RANDOM_HPP_

#include <cstdint>
#include <vector>

namespace smattr {

// Portable seeded generator. Everything that must be reproducible across
// platforms (synthetic model weights, checker sampling, test instances) draws
// from this and never from <random> distributions, whose output is
// implementation defined.
//
// Algorithm (bit-exact):
//   seeding   state[i] = splitmix64(x) for i = 0..3, where x starts at the
//             seed and splitmix64 advances x by 0x9E3779B97F4A7C15 and
//             returns  z = x; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//                      z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
//                      z ^ (z >> 31)
//   next      xoshiro256**: result = rotl(s1 * 5, 7) * 9, then
//             t = s1 << 17; s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3;
//             s2 ^= t; s3 = rotl(s3, 45)
//   unit      (next() >> 11) * 2^-53, in [0, 1)
//   uniform   lo + (hi - lo) * unit()
//   below(n)  rejection: draw r = next() until r >= (2^64 mod n),
//             return r mod n
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t Next();
  double Unit();
  double Uniform(double lo, double hi);
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t Below(std::uint64_t n);
  // Uniform integer in [lo, hi], inclusive.
  std::int64_t Between(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t s_[4];
};

std::uint64_t SplitMix64(std::uint64_t& state);

// Partial Fisher-Yates: `count` distinct draws from `pool`, in draw order.
std::vector<int> SampleWithoutReplacement(Xoshiro256& rng,
                                          std::vector<int> pool, int count);

}  // namespace smattr

#endif  // SMATTR_RANDOM_HPP_
