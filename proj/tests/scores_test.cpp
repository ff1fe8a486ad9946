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

#include "smattr/scores.hpp"

#include <gtest/gtest.h>

#include "golden.hpp"
#include "smattr/error.hpp"

namespace smattr {
namespace {

using testing::GoldenShape;
using testing::kGoldenSeed;

Eigen::VectorXf V(std::initializer_list<float> v) {
  Eigen::VectorXf out(static_cast<Eigen::Index>(v.size()));
  std::copy(v.begin(), v.end(), out.data());
  return out;
}

TEST(CosineDistance, SelfIsZero) {
  const auto f = V({0.3f, -1.2f, 4.0f});
  EXPECT_NEAR(CosineDistance(f, f), 0.0, 1e-9);
}

TEST(CosineDistance, Orthogonal) { EXPECT_EQ(CosineDistance(V({1, 0}), V({0, 1})), 1.0); }

TEST(CosineDistance, Antipodal) {
  const auto f = V({0.3f, -1.2f, 4.0f});
  EXPECT_NEAR(CosineDistance(f, Eigen::VectorXf(-f)), 2.0, 1e-9);
}

TEST(CosineDistance, ZeroVectorConvention) {
  EXPECT_EQ(CosineDistance(V({0, 0}), V({1, 2})), 1.0);
}

TEST(CosineDistance, RejectsDimensionMismatch) {
  EXPECT_THROW(CosineDistance(V({1, 0}), V({1, 0, 0})), Error);
}

ElementFeatures Features(std::initializer_list<std::initializer_list<float>> cols) {
  Eigen::MatrixXf m(static_cast<Eigen::Index>(cols.begin()->size()),
                    static_cast<Eigen::Index>(cols.size()));
  int c = 0;
  for (const auto& col : cols) m.col(c++) = V(col);
  return ElementFeatures(m);
}

TEST(Effectiveness, MarginalAgainstEmptyIsOne) {
  const auto f = Features({{1, 0}, {0, 1}});
  EXPECT_EQ(EffectivenessMarginal(0, {}, f), 1.0);
}

TEST(Effectiveness, MarginalAgainstIdenticalIsZero) {
  const auto f = Features({{1, 2}, {1, 2}, {0, 1}});
  const std::vector<int> s = {1, 2};
  EXPECT_NEAR(EffectivenessMarginal(0, s, f), 0.0, 1e-9);
}

TEST(Effectiveness, MarginalRejectsMember) {
  const auto f = Features({{1, 0}, {0, 1}});
  const std::vector<int> s = {0};
  EXPECT_THROW(EffectivenessMarginal(0, s, f), Error);
}

TEST(Effectiveness, OrthogonalPairSumsToTwo) {
  const auto f = Features({{1, 0}, {0, 1}});
  const std::vector<int> s = {0, 1};
  EXPECT_NEAR(Effectiveness(s, f), 2.0, 1e-9);
}

TEST(Effectiveness, IdenticalPairIsZero) {
  const auto f = Features({{1, 2}, {1, 2}});
  const std::vector<int> s = {0, 1};
  EXPECT_NEAR(Effectiveness(s, f), 0.0, 1e-9);
}

TEST(Effectiveness, SingletonIsOne) {
  const auto f = Features({{1, 2}, {3, 1}});
  const std::vector<int> s = {1};
  EXPECT_EQ(Effectiveness(s, f), 1.0);
}

class ObjectiveTest : public ::testing::Test {
 protected:
  ObjectiveTest()
      : inst_(MakeSyntheticInstance(kGoldenSeed, GoldenShape())),
        objective_(inst_.image, inst_.regions, inst_.target, *inst_.oracle,
                   Lambdas{}) {}
  SyntheticInstance inst_;
  AttributionObjective objective_;
};

TEST_F(ObjectiveTest, GoldenMarginal) {
  const std::vector<int> s = {1, 2};
  EXPECT_NEAR(EffectivenessMarginal(0, s, objective_.features()),
              0.949425342413, 1e-6);
}

TEST_F(ObjectiveTest, GoldenBreakdown) {
  const std::vector<int> s = {0, 2};
  const ScoreBreakdown b = objective_.Evaluate(s);
  EXPECT_NEAR(b.conf, 0.604457950841, 1e-6);
  EXPECT_NEAR(b.eff, 3.24988715174, 1e-6);
  EXPECT_NEAR(b.cons, 0.417757953444, 1e-6);
  EXPECT_NEAR(b.colla, 1.07784144171, 1e-6);
  EXPECT_NEAR(b.total, 5.34994449774, 1e-6);
  EXPECT_NEAR(b.total, b.conf + b.eff + b.cons + b.colla, 1e-9);
}

TEST_F(ObjectiveTest, ConsistencyOfFullImageAgainstItself) {
  const TargetFeature self = TargetFromImage(*inst_.oracle, inst_.image);
  const AttributionObjective obj(inst_.image, inst_.regions, self,
                                 *inst_.oracle, Lambdas{});
  const std::vector<int> all = {0, 1, 2, 3};
  EXPECT_NEAR(obj.ConsistencyOf(all), 1.0, 1e-6);
  EXPECT_NEAR(obj.CollaborationOf({}), 0.0, 1e-6);
  // Complement of everything is the zero image.
  EXPECT_EQ(obj.CollaborationOf(all), 1.0);
}

TEST(Consistency, OrthogonalIsZero) {
  const TargetFeature t{TargetMode::kFromCategory, 0, V({0, 1})};
  EXPECT_EQ(Consistency(V({1, 0}), t), 0.0);
}

TEST_F(ObjectiveTest, EffectivenessProjection) {
  const AttributionObjective obj(inst_.image, inst_.regions, inst_.target,
                                 *inst_.oracle, Lambdas{0, 1, 0, 0});
  const std::vector<int> s = {0, 1, 3};
  EXPECT_EQ(obj.Evaluate(s).total, Effectiveness(s, obj.features()));
}

TEST_F(ObjectiveTest, LinearInWeights) {
  const AttributionObjective doubled(inst_.image, inst_.regions, inst_.target,
                                     *inst_.oracle, Lambdas{2, 1, 1, 1});
  const std::vector<int> s = {2, 3};
  const ScoreBreakdown base = objective_.Evaluate(s);
  EXPECT_NEAR(doubled.Evaluate(s).total, base.total + base.conf, 1e-9);
}

TEST_F(ObjectiveTest, RejectsDuplicateIds) {
  const std::vector<int> s = {1, 1};
  EXPECT_THROW(objective_.Evaluate(s), Error);
}

TEST(Lambdas, RejectsNegativeOrNonFinite) {
  EXPECT_THROW(ValidateLambdas(Lambdas{-1, 1, 1, 1}), Error);
  EXPECT_THROW(ValidateLambdas(Lambdas{1, 1, std::nan(""), 1}), Error);
  EXPECT_NO_THROW(ValidateLambdas(Lambdas{0, 0, 0, 0}));
}

}  // namespace
}  // namespace smattr
