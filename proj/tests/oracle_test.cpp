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

#include "smattr/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "golden.hpp"
#include "reference_model.hpp"
#include "smattr/error.hpp"

namespace smattr {
namespace {

using testing::GoldenShape;
using testing::kGoldenSeed;
using testing::Pixels;

EvidenceVector Ev(std::initializer_list<float> v) {
  EvidenceVector e(static_cast<Eigen::Index>(v.size()));
  std::copy(v.begin(), v.end(), e.data());
  return e;
}

TEST(Confidence, ZeroEvidenceIsZero) { EXPECT_EQ(Confidence(Ev({0, 0})), 0.0); }

TEST(Confidence, DirectSubstitution) {
  EXPECT_NEAR(Confidence(Ev({3, 1})), 1.0 - 2.0 / 6.0, 1e-9);
}

TEST(Confidence, TendsToOneWithLargeEvidence) {
  EXPECT_GT(Confidence(Ev({1e30f, 0})), 1.0 - 1e-9);
}

TEST(Confidence, RejectsNegativeOrNonFinite) {
  EXPECT_THROW(Confidence(Ev({-1, 0})), Error);
  EXPECT_THROW(Confidence(Ev({std::numeric_limits<float>::infinity(), 0})),
               Error);
}

TEST(ClassProbs, Symmetric) {
  const auto p = ClassProbs(Ev({0, 0}));
  EXPECT_EQ(p[0], 0.5);
  EXPECT_EQ(p[1], 0.5);
}

TEST(ClassProbs, DirichletMean) {
  const auto p = ClassProbs(Ev({3, 1}));
  EXPECT_NEAR(p[0], 4.0 / 6.0, 1e-9);
  EXPECT_NEAR(p[1], 2.0 / 6.0, 1e-9);
}

TEST(ClassProbs, SumsToOne) {
  EXPECT_NEAR(ClassProbs(Ev({0.1f, 7, 2.5f, 1e6f})).sum(), 1.0, 1e-12);
}

TEST(EdlLoss, TwoClassesNoEvidence) {
  Eigen::VectorXf y(2);
  y << 1, 0;
  EXPECT_NEAR(EdlLoss(Ev({0, 0}), y), std::log(2.0), 1e-9);
}

TEST(EdlLoss, ThreeClassesUnitEvidence) {
  Eigen::VectorXf y(3);
  y << 0, 1, 0;
  EXPECT_NEAR(EdlLoss(Ev({1, 1, 1}), y), std::log(3.0), 1e-9);
}

TEST(EdlLoss, VanishesWithEvidenceOnLabel) {
  Eigen::VectorXf y(2);
  y << 0, 1;
  EXPECT_LT(EdlLoss(Ev({0, 1e30f}), y), 1e-9);
}

TEST(EdlLoss, RejectsMalformedOneHot) {
  Eigen::VectorXf y(2);
  y << 1, 1;
  EXPECT_THROW(EdlLoss(Ev({0, 0}), y), Error);
  y << 0.5f, 0.5f;
  EXPECT_THROW(EdlLoss(Ev({0, 0}), y), Error);
}

class SyntheticOracleTest : public ::testing::Test {
 protected:
  SyntheticOracleTest() : inst_(MakeSyntheticInstance(kGoldenSeed, GoldenShape())) {}
  SyntheticInstance inst_;
};

TEST_F(SyntheticOracleTest, Deterministic) {
  EXPECT_EQ(inst_.oracle->Embed(inst_.image), inst_.oracle->Embed(inst_.image));
  EXPECT_EQ(inst_.oracle->Evidence(inst_.image),
            inst_.oracle->Evidence(inst_.image));
}

TEST_F(SyntheticOracleTest, ZeroImageMapsToZeroFeature) {
  const FeatureVector f = inst_.oracle->Embed(Image::Zeros(8, 8, 3));
  EXPECT_TRUE(f.isZero(0.0));
}

TEST_F(SyntheticOracleTest, ZeroHeadGivesUnitEvidence) {
  const SyntheticOracle zero_head(
      inst_.oracle->trunk().cast<float>(), Eigen::MatrixXf::Zero(4, 8), 8, 8, 3);
  EXPECT_EQ(zero_head.Evidence(inst_.image), EvidenceVector::Ones(4));
}

TEST_F(SyntheticOracleTest, GoldenEmbedding) {
  const float expected[] = {-0.387497745f, 0.394664911f, -0.175513242f,
                            -0.413303267f, 0.383593871f, 0.130673461f,
                            0.395143273f,  -0.414852503f};
  const FeatureVector f = inst_.oracle->Embed(inst_.image);
  ASSERT_EQ(f.size(), 8);
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(f[i], expected[i], 1e-6) << i;
}

TEST_F(SyntheticOracleTest, GoldenEvidence) {
  const float expected[] = {0.48751971f, 0.620174411f, 1.55490346f,
                            1.26605645f};
  const EvidenceVector e = inst_.oracle->Evidence(inst_.image);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(e[i], expected[i], 1e-6) << i;
  EXPECT_EQ(inst_.category, 2);
}

TEST_F(SyntheticOracleTest, GoldenClassWeight) {
  const float expected[] = {0.472165942f, -0.628365159f, 0.613950968f,
                            -0.301794916f, -0.204986915f, 0.324847609f,
                            -0.033390969f, 0.614837706f};
  const TargetFeature t = TargetFromCategory(*inst_.oracle, 0);
  EXPECT_EQ(t.mode, TargetMode::kFromCategory);
  for (int i = 0; i < 8; ++i) EXPECT_EQ(t.vector[i], expected[i]) << i;
}

TEST_F(SyntheticOracleTest, MatchesReferenceModelOnMaskedImages) {
  const reference::Model model(kGoldenSeed + 1, 8, 4, 8 * 8 * 3);
  for (int l = 0; l < 4; ++l) {
    const std::vector<int> s = {l};
    const Image masked = ApplyMask(inst_.image, s, inst_.regions);
    const auto want_f = model.Embed(Pixels(masked));
    const auto want_e = model.Evidence(Pixels(masked));
    const Probe got = inst_.oracle->Evaluate(masked);
    for (int i = 0; i < 8; ++i) EXPECT_NEAR(got.feature[i], want_f[i], 1e-6);
    for (int i = 0; i < 4; ++i) {
      EXPECT_NEAR(got.evidence[i], want_e[i], 1e-6 * want_e[i]);
    }
  }
}

TEST_F(SyntheticOracleTest, OnePatchChangesEmbedding) {
  const std::vector<int> a = {0, 1, 2}, b = {0, 1, 2, 3};
  EXPECT_NE(inst_.oracle->Embed(ApplyMask(inst_.image, a, inst_.regions)),
            inst_.oracle->Embed(ApplyMask(inst_.image, b, inst_.regions)));
}

TEST_F(SyntheticOracleTest, CategoriesHaveDistinctTargets) {
  EXPECT_NE(TargetFromCategory(*inst_.oracle, 0).vector,
            TargetFromCategory(*inst_.oracle, 1).vector);
}

TEST_F(SyntheticOracleTest, FromImageTargetIsEmbedding) {
  const TargetFeature t = TargetFromImage(*inst_.oracle, inst_.image);
  EXPECT_EQ(t.vector, inst_.oracle->Embed(inst_.image));
}

TEST_F(SyntheticOracleTest, RejectsWrongShapeAndCategory) {
  try {
    inst_.oracle->Embed(Image::Zeros(4, 4, 3));
    FAIL() << "expected oracle-input error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOracleInput);
  }
  EXPECT_THROW(TargetFromCategory(*inst_.oracle, 4), Error);
  EXPECT_THROW(TargetFromCategory(*inst_.oracle, -1), Error);
}

TEST(TargetMode, NamesRoundTrip) {
  EXPECT_EQ(ParseTargetMode(TargetModeName(TargetMode::kFromImage)),
            TargetMode::kFromImage);
  EXPECT_EQ(ParseTargetMode("from-category"), TargetMode::kFromCategory);
  EXPECT_THROW(ParseTargetMode("nope"), Error);
}

}  // namespace
}  // namespace smattr
