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

#include "smattr/geometry.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "smattr/error.hpp"
#include "smattr/instances.hpp"
#include "smattr/random.hpp"

namespace smattr {
namespace {

SaliencyMap Map(int h, int w, std::initializer_list<float> v) {
  RowMajorArray<float> values(h, w);
  std::copy(v.begin(), v.end(), values.data());
  return SaliencyMap::FromValues(values);
}

ImportanceGrid Grid(int n, std::initializer_list<double> v) {
  ImportanceGrid g(n, n);
  std::copy(v.begin(), v.end(), g.data());
  return g;
}

TEST(PoolSaliency, MeanOfAllPixels) {
  const auto imp = PoolSaliency(Map(2, 2, {1, 1, 0, 0}), MakePatchGrid(2, 2, 1));
  EXPECT_EQ(imp(0, 0), 0.5);
}

TEST(PoolSaliency, IdentityForUnitBlocks) {
  const auto imp = PoolSaliency(Map(2, 2, {1, 2, 3, 4}), MakePatchGrid(2, 2, 2));
  EXPECT_EQ(imp(0, 0), 1);
  EXPECT_EQ(imp(0, 1), 2);
  EXPECT_EQ(imp(1, 0), 3);
  EXPECT_EQ(imp(1, 1), 4);
}

TEST(PoolSaliency, BlockMeans) {
  const auto imp = PoolSaliency(
      Map(4, 4, {1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}),
      MakePatchGrid(4, 4, 2));
  EXPECT_EQ(imp(0, 0), 1);
  EXPECT_EQ(imp(0, 1), 0);
  EXPECT_EQ(imp(1, 0), 0);
  EXPECT_EQ(imp(1, 1), 0);
}

TEST(PoolSaliency, RejectsMismatchedShape) {
  EXPECT_THROW(PoolSaliency(Map(2, 2, {1, 1, 1, 1}), MakePatchGrid(4, 4, 2)),
               Error);
}

TEST(MakePatchGrid, RejectsIndivisibleSide) {
  EXPECT_THROW(MakePatchGrid(5, 4, 2), Error);
  EXPECT_THROW(MakePatchGrid(4, 4, 0), Error);
}

TEST(RankPatches, StrictOrdering) {
  EXPECT_EQ(RankPatches(Grid(2, {3, 1, 2, 0})), (std::vector<int>{0, 2, 1, 3}));
}

TEST(RankPatches, AllTiesFallBackToRowMajor) {
  EXPECT_EQ(RankPatches(Grid(2, {5, 5, 5, 5})), (std::vector<int>{0, 1, 2, 3}));
}

TEST(RankPatches, TiesBrokenByIndex) {
  EXPECT_EQ(RankPatches(Grid(2, {0, 1, 1, 0})), (std::vector<int>{1, 2, 0, 3}));
}

TEST(Divide, DecreasingSaliencyGivesOnePatchPerElement) {
  const Image image = Image::Zeros(4, 4, 1);
  RowMajorArray<float> s(4, 4);
  for (int i = 0; i < 16; ++i) s.data()[i] = 16.0f - i;
  const RegionSet r = Divide(image, SaliencyMap::FromValues(s), 2, 4);
  ASSERT_EQ(r.m, 4);
  for (int l = 0; l < 4; ++l) {
    EXPECT_EQ(r.elements[l].patch_ids, std::vector<int>{l});
  }
}

TEST(Divide, BlockedAssignmentOfRanks) {
  const RegionSet r =
      DivideByImportance(MakePatchGrid(2, 2, 2), Grid(2, {3, 1, 2, 0}), 2);
  EXPECT_EQ(r.elements[0].patch_ids, (std::vector<int>{0, 2}));
  EXPECT_EQ(r.elements[1].patch_ids, (std::vector<int>{1, 3}));
}

TEST(Divide, FaceProfileHasEightPatchesPerElement) {
  Xoshiro256 rng(3);
  const Image image = RandomImage(rng, 56, 56, 1);
  const RegionSet r = Divide(image, RandomSaliency(rng, 56, 56), 28, 98);
  EXPECT_EQ(r.d, 8);
  for (const auto& e : r.elements) EXPECT_EQ(e.patch_ids.size(), 8u);
}

TEST(Divide, RejectsInvalidElementCount) {
  const Image image = Image::Zeros(4, 4, 1);
  const SaliencyMap s = Map(4, 4, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  EXPECT_THROW(Divide(image, s, 2, 3), Error);
  EXPECT_THROW(Divide(image, s, 2, 0), Error);
  EXPECT_THROW(Divide(image, s, 2, 5), Error);
}

TEST(DivideUniform, PatchTenByTen) {
  const RegionSet r = DivideUniform(Image::Zeros(20, 20, 3), 10);
  EXPECT_EQ(r.m, 100);
  EXPECT_EQ(r.d, 1);
}

TEST(DivideUniform, SingleElementCoversImage) {
  const RegionSet r = DivideUniform(Image::Zeros(4, 4, 1), 1);
  ASSERT_EQ(r.m, 1);
  EXPECT_EQ(r.grid.patch_h, 4);
}

TEST(DivideUniform, FourQuadrants) {
  const RegionSet r = DivideUniform(Image::Zeros(4, 4, 1), 2);
  ASSERT_EQ(r.m, 4);
  EXPECT_EQ(r.grid.patch_h, 2);
  EXPECT_EQ(r.grid.patch_w, 2);
}

class MaskTest : public ::testing::Test {
 protected:
  void SetUp() override {
    Xoshiro256 rng(21);
    image_ = RandomImage(rng, 8, 8, 3);
    regions_ = Divide(image_, RandomSaliency(rng, 8, 8), 4, 4);
  }
  Image image_;
  RegionSet regions_;
};

TEST_F(MaskTest, AllElementsReconstructInput) {
  const std::vector<int> all = {0, 1, 2, 3};
  EXPECT_EQ(ApplyMask(image_, all, regions_), image_);
}

TEST_F(MaskTest, EmptySubsetIsZero) {
  EXPECT_EQ(ApplyMask(image_, {}, regions_), Image::Zeros(8, 8, 3));
}

TEST_F(MaskTest, DisjointSupportsAdd) {
  const std::vector<int> a = {0}, b = {2}, ab = {0, 2};
  const Image ma = ApplyMask(image_, a, regions_);
  const Image mb = ApplyMask(image_, b, regions_);
  EXPECT_TRUE(((ma.data + mb.data) == ApplyMask(image_, ab, regions_).data).all());
}

TEST_F(MaskTest, ComplementIsRemainingElements) {
  const std::vector<int> s = {1, 3}, rest = {0, 2};
  EXPECT_EQ(ApplyComplementMask(image_, s, regions_),
            ApplyMask(image_, rest, regions_));
}

TEST_F(MaskTest, RejectsDuplicatesAndOutOfRange) {
  const std::vector<int> dup = {1, 1}, bad = {4};
  EXPECT_THROW(ApplyMask(image_, dup, regions_), Error);
  EXPECT_THROW(ApplyMask(image_, bad, regions_), Error);
}

TEST(Image, RejectsOutOfRangePixels) {
  Eigen::ArrayXf data = Eigen::ArrayXf::Constant(4, 0.5f);
  data[2] = 1.5f;
  EXPECT_THROW(Image::FromData(2, 2, 1, data), Error);
}

TEST(SaliencyMap, RejectsNegativeAndNan) {
  RowMajorArray<float> v = RowMajorArray<float>::Zero(1, 2);
  v(0, 1) = -1.0f;
  EXPECT_THROW(SaliencyMap::FromValues(v), Error);
  v(0, 1) = std::nanf("");
  EXPECT_THROW(SaliencyMap::FromValues(v), Error);
}

TEST(ValidateRegionSet, DetectsOverlap) {
  RegionSet r = DivideUniform(Image::Zeros(4, 4, 1), 2);
  r.elements[1].patch_ids = {0};
  EXPECT_THROW(ValidateRegionSet(r), Error);
}

}  // namespace
}  // namespace smattr
