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

#include "smattr/io.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <fstream>
#include <functional>
#include <iterator>

#include "golden.hpp"
#include "smattr/error.hpp"
#include "smattr/random.hpp"
#include "smattr/scores.hpp"
#include "smattr/search.hpp"

namespace smattr {
namespace {

using testing::SearchShape;
using testing::TempDir;

std::vector<std::uint8_t> Bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kInvalidArgument;
}

TEST(Png, BlackImageReadsAsZeros) {
  TempDir dir;
  WriteImage(Image::Zeros(3, 5, 3), dir / "black.png");
  const Image image = ReadImage(dir / "black.png");
  EXPECT_EQ(image.height, 3);
  EXPECT_EQ(image.width, 5);
  EXPECT_EQ(image.channels, 3);
  EXPECT_TRUE(image.data.isZero(0.0f));
}

TEST(Png, FullIntensityIsOne) {
  TempDir dir;
  Image image = Image::Zeros(1, 2, 1);
  image.data[1] = 1.0f;
  WriteImage(image, dir / "x.png");
  EXPECT_EQ(ReadImage(dir / "x.png").data[1], 1.0f);
}

TEST(Png, EightBitRoundTripIsLossless) {
  TempDir dir;
  Image image = Image::Zeros(4, 4, 3);
  for (Eigen::Index i = 0; i < image.size(); ++i) {
    image.data[i] = static_cast<float>((i * 37) % 256) / 255.0f;
  }
  WriteImage(image, dir / "a.png");
  const Image back = ReadImage(dir / "a.png");
  EXPECT_EQ(back, image);
  WriteImage(back, dir / "b.png");
  EXPECT_EQ(Bytes(dir / "a.png"), Bytes(dir / "b.png"));
}

TEST(Png, RejectsNonPng) {
  TempDir dir;
  WriteTextFile(dir / "fake.png", "not an image");
  EXPECT_EQ(KindOf([&] { ReadImage(dir / "fake.png"); }), ErrorKind::kIo);
  EXPECT_EQ(KindOf([&] { ReadImage(dir / "missing.png"); }), ErrorKind::kIo);
}

TEST(FloatMap, HalfEncodesToKnownBytes) {
  RowMajorArray<float> v(1, 1);
  v(0, 0) = 0.5f;
  const std::vector<std::uint8_t> bytes = EncodeFloatMap(SaliencyMap::FromValues(v));
  const std::vector<std::uint8_t> want = {'S', 'M', 'A', 'P', 1, 0, 0, 0,
                                          1,   0,   0,   0,   1, 0, 0, 0,
                                          0x00, 0x00, 0x00, 0x3F};
  EXPECT_EQ(bytes, want);
}

TEST(FloatMap, RoundTripIsBitwise) {
  TempDir dir;
  Xoshiro256 rng(2);
  const SaliencyMap map = RandomSaliency(rng, 5, 7);
  WriteFloatMap(map, dir / "m.smap");
  const SaliencyMap back = ReadFloatMap(dir / "m.smap");
  ASSERT_EQ(back.height(), 5);
  ASSERT_EQ(back.width(), 7);
  EXPECT_EQ(std::memcmp(back.values.data(), map.values.data(), 35 * 4), 0);
}

TEST(FloatMap, TruncatedPayloadIsFormatError) {
  RowMajorArray<float> v = RowMajorArray<float>::Ones(2, 2);
  std::vector<std::uint8_t> bytes = EncodeFloatMap(SaliencyMap::FromValues(v));
  bytes.pop_back();
  EXPECT_EQ(KindOf([&] { DecodeFloatMap(bytes); }), ErrorKind::kFormat);
  bytes[0] = 'X';
  EXPECT_EQ(KindOf([&] { DecodeFloatMap(bytes); }), ErrorKind::kFormat);
}

TEST(FloatMap, CsvInput) {
  TempDir dir;
  WriteTextFile(dir / "s.csv", "3,2\n0,1,2\n3,4,5\n");
  const SaliencyMap map = ReadSaliency(dir / "s.csv");
  ASSERT_EQ(map.width(), 3);
  ASSERT_EQ(map.height(), 2);
  EXPECT_EQ(map.values(1, 2), 5.0f);
  WriteTextFile(dir / "bad.csv", "3,2\n0,1,2\n");
  EXPECT_EQ(KindOf([&] { ReadSaliency(dir / "bad.csv"); }), ErrorKind::kFormat);
}

TEST(RegionSetJson, RoundTrip) {
  TempDir dir;
  Xoshiro256 rng(8);
  const Image image = RandomImage(rng, 8, 8, 1);
  const RegionSet regions = Divide(image, RandomSaliency(rng, 8, 8), 4, 8);
  WriteRegionSet(regions, dir / "r.json");
  EXPECT_EQ(ReadRegionSet(dir / "r.json"), regions);
}

TEST(RegionSetJson, RejectsOverlap) {
  nlohmann::json doc = RegionSetToJson(DivideUniform(Image::Zeros(2, 2, 1), 2));
  doc["elements"][1] = {0};
  EXPECT_THROW(RegionSetFromJson(doc), Error);
}

class ResultIoTest : public ::testing::Test {
 protected:
  ResultIoTest() : inst_(MakeSyntheticInstance(5, SearchShape())) {
    const AttributionObjective obj(inst_.image, inst_.regions, inst_.target,
                                   *inst_.oracle, Lambdas{});
    doc_.result = GreedyMaximize(obj, GreedyOptions{3});
    doc_.config = {{"k", 3}};
  }
  SyntheticInstance inst_;
  ResultDocument doc_;
};

TEST_F(ResultIoTest, RoundTripIsExact) {
  TempDir dir;
  WriteResult(doc_, dir / "r.json");
  const ResultDocument back = ReadResult(dir / "r.json");
  EXPECT_EQ(back.result.order, doc_.result.order);
  EXPECT_EQ(back.result.gains, doc_.result.gains);
  EXPECT_EQ(back.result.values, doc_.result.values);
  EXPECT_EQ(back.result.initial_value, doc_.result.initial_value);
  EXPECT_EQ(back.tool_version, kToolVersion);
  EXPECT_TRUE(back.result.timing_ms.empty());
}

TEST_F(ResultIoTest, TimingOnlyWhenRequested) {
  EXPECT_FALSE(ResultToJson(doc_, false).contains("timing_ms"));
  EXPECT_EQ(ResultToJson(doc_, true).at("timing_ms").size(), 3u);
}

TEST_F(ResultIoTest, MissingOrderIsSchemaError) {
  nlohmann::json j = ResultToJson(doc_, false);
  j.erase("order");
  EXPECT_EQ(KindOf([&] { ResultFromJson(j); }), ErrorKind::kFormat);
}

TEST_F(ResultIoTest, GoldenDocument) {
  const nlohmann::json want =
      ReadJsonFile(std::string(SMATTR_TEST_DATA) + "/golden_result.json");
  const nlohmann::json got = ResultToJson(doc_, false);
  EXPECT_EQ(got.at("order"), want.at("order"));
  EXPECT_EQ(got.at("mode"), want.at("mode"));
  for (const char* key : {"gains", "values"}) {
    ASSERT_EQ(got.at(key).size(), want.at(key).size());
    for (std::size_t i = 0; i < got.at(key).size(); ++i) {
      EXPECT_NEAR(got.at(key)[i].get<double>(), want.at(key)[i].get<double>(),
                  1e-9);
    }
  }
}

}  // namespace
}  // namespace smattr
