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

// Seeded end-to-end problem instances built on the synthetic oracle. Used by
// the self-test command and the test suites.

#ifndef SMATTR_INSTANCES_HPP_
#define SMATTR_INSTANCES_HPP_

#include <cstdint>
#include <memory>

#include "smattr/geometry.hpp"
#include "smattr/oracle.hpp"
#include "smattr/random.hpp"

namespace smattr {

struct InstanceShape {
  int side = 16;
  int channels = 3;
  int n = 4;
  int m = 8;
  int feature_dim = 16;
  int categories = 5;
  TargetMode target_mode = TargetMode::kFromCategory;
};

struct SyntheticInstance {
  Image image;
  SaliencyMap saliency;
  RegionSet regions;
  std::unique_ptr<SyntheticOracle> oracle;
  // Category the model favours on the full image.
  int category = 0;
  TargetFeature target;
};

Image RandomImage(Xoshiro256& rng, int height, int width, int channels);
SaliencyMap RandomSaliency(Xoshiro256& rng, int height, int width);

// Image and saliency come from Xoshiro256(seed); the oracle uses seed + 1.
SyntheticInstance MakeSyntheticInstance(std::uint64_t seed,
                                        const InstanceShape& shape = {});

}  // namespace smattr

#endif  // SMATTR_INSTANCES_HPP_
