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

#include "smattr/instances.hpp"

namespace smattr {

Image RandomImage(Xoshiro256& rng, int height, int width, int channels) {
  Image image = Image::Zeros(height, width, channels);
  for (Eigen::Index i = 0; i < image.size(); ++i) {
    image.data[i] = static_cast<float>(rng.Unit());
  }
  return image;
}

SaliencyMap RandomSaliency(Xoshiro256& rng, int height, int width) {
  RowMajorArray<float> values(height, width);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) values(r, c) = static_cast<float>(rng.Unit());
  }
  return SaliencyMap::FromValues(std::move(values));
}

SyntheticInstance MakeSyntheticInstance(std::uint64_t seed,
                                        const InstanceShape& shape) {
  SyntheticInstance inst;
  Xoshiro256 rng(seed);
  inst.image = RandomImage(rng, shape.side, shape.side, shape.channels);
  inst.saliency = RandomSaliency(rng, shape.side, shape.side);
  inst.regions = Divide(inst.image, inst.saliency, shape.n, shape.m);
  inst.oracle = std::make_unique<SyntheticOracle>(
      SyntheticConfig{seed + 1, shape.feature_dim, shape.categories}, shape.side,
      shape.side, shape.channels);
  const Eigen::VectorXd probs = ClassProbs(inst.oracle->Evidence(inst.image));
  Eigen::Index best = 0;
  probs.maxCoeff(&best);
  inst.category = static_cast<int>(best);
  inst.target = shape.target_mode == TargetMode::kFromCategory
                    ? TargetFromCategory(*inst.oracle, inst.category)
                    : TargetFromImage(*inst.oracle, inst.image);
  return inst;
}

}  // namespace smattr
