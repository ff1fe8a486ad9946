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

// Seeded instance shared by the oracle, score and io tests.

#ifndef SMATTR_TESTS_GOLDEN_HPP_
#define SMATTR_TESTS_GOLDEN_HPP_

#include <unistd.h>

#include <filesystem>
#include <string>

#include "json.hpp"
#include "smattr/instances.hpp"
#include "smattr/io.hpp"
#include "smattr/random.hpp"

namespace smattr::testing {

inline InstanceShape GoldenShape() {
  InstanceShape shape;
  shape.side = 8;
  shape.channels = 3;
  shape.n = 4;
  shape.m = 4;
  shape.feature_dim = 8;
  shape.categories = 4;
  return shape;
}

inline constexpr std::uint64_t kGoldenSeed = 11;

// Same shape the selftest uses: 20x20 RGB, 10 elements of 10 patches.
inline InstanceShape SearchShape() {
  InstanceShape shape;
  shape.side = 20;
  shape.n = 10;
  shape.m = 10;
  shape.feature_dim = 16;
  shape.categories = 5;
  return shape;
}

inline std::vector<float> Pixels(const Image& image) {
  return std::vector<float>(image.data.data(),
                            image.data.data() + image.data.size());
}

// Scratch directory removed with the object.
class TempDir {
 public:
  TempDir() {
    std::string pattern =
        (std::filesystem::temp_directory_path() / "smattr-XXXXXX").string();
    path_ = ::mkdtemp(pattern.data());
  }
  ~TempDir() {
    std::error_code ignored;
    std::filesystem::remove_all(path_, ignored);
  }
  std::string operator/(const std::string& name) const {
    return (path_ / name).string();
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Writes image.png, saliency.smap and config.json for a seeded synthetic run
// into `dir`, returning the config path. `overrides` is merged over the
// defaults.
inline std::string WriteRunFixture(const TempDir& dir, std::uint64_t seed,
                                   int side, int n, int m,
                                   const nlohmann::json& overrides = {}) {
  Xoshiro256 rng(seed);
  WriteImage(RandomImage(rng, side, side, 3), dir / "image.png");
  WriteFloatMap(RandomSaliency(rng, side, side), dir / "saliency.smap");
  nlohmann::json config = {
      {"n", n},
      {"m", m},
      {"image_path", "image.png"},
      {"saliency_path", "saliency.smap"},
      {"oracle",
       {{"backend", "synthetic"},
        {"synthetic", {{"seed", seed + 1}, {"feature_dim", 16}, {"categories", 5}}}}}};
  if (overrides.is_object()) config.merge_patch(overrides);
  WriteTextFile(dir / "config.json", config.dump(2));
  return dir / "config.json";
}

}  // namespace smattr::testing

#endif  // SMATTR_TESTS_GOLDEN_HPP_
