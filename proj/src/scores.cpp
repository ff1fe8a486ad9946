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

#include <cmath>
#include <limits>

#include "smattr/parallel.hpp"

namespace smattr {
namespace {

void CheckSubset(std::span<const int> subset, int m) {
  std::vector<char> seen(m, 0);
  for (int id : subset) {
    if (id < 0 || id >= m) {
      Fail(ErrorKind::kInvalidArgument,
           "element id " + std::to_string(id) + " out of range");
    }
    if (seen[id]) {
      Fail(ErrorKind::kInvalidArgument,
           "element id " + std::to_string(id) + " repeated in subset");
    }
    seen[id] = 1;
  }
}

}  // namespace

void ValidateLambdas(const Lambdas& l) {
  for (double v : {l.conf, l.eff, l.cons, l.colla}) {
    if (!std::isfinite(v) || v < 0.0) {
      Fail(ErrorKind::kInvalidConfig, "lambdas must be finite and >= 0");
    }
  }
}

double Combine(const ScoreBreakdown& p, const Lambdas& l) {
  return l.conf * p.conf + l.eff * p.eff + l.cons * p.cons + l.colla * p.colla;
}

ElementFeatures::ElementFeatures(const Image& image, const RegionSet& regions,
                                 const Oracle& oracle, int threads)
    : embeddings_(oracle.shape().feature_dim, regions.m) {
  ParallelFor(regions.m, threads, [&](int i) {
    const int one[] = {i};
    embeddings_.col(i) = oracle.Embed(ApplyMask(image, one, regions));
  });
  ComputeDistances();
}

ElementFeatures::ElementFeatures(Eigen::MatrixXf embeddings)
    : embeddings_(std::move(embeddings)) {
  ComputeDistances();
}

void ElementFeatures::ComputeDistances() {
  const int m = size();
  distances_.setZero(m, m);
  for (int i = 0; i < m; ++i) {
    distances_(i, i) = CosineDistance(embeddings_.col(i), embeddings_.col(i));
    for (int j = i + 1; j < m; ++j) {
      const double d = CosineDistance(embeddings_.col(i), embeddings_.col(j));
      distances_(i, j) = d;
      distances_(j, i) = d;
    }
  }
}

double EffectivenessMarginal(int alpha, std::span<const int> s,
                             const ElementFeatures& features) {
  if (alpha < 0 || alpha >= features.size()) {
    Fail(ErrorKind::kInvalidArgument, "alpha out of range");
  }
  CheckSubset(s, features.size());
  if (s.empty()) return 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (int other : s) {
    if (other == alpha) {
      Fail(ErrorKind::kInvalidArgument, "alpha is already in the subset");
    }
    best = std::min(best, features.Distance(alpha, other));
  }
  return best;
}

double Effectiveness(std::span<const int> s, const ElementFeatures& features) {
  CheckSubset(s, features.size());
  if (s.empty()) return 0.0;
  if (s.size() == 1) return 1.0;
  double sum = 0.0;
  for (int i : s) {
    double best = std::numeric_limits<double>::infinity();
    for (int j : s) {
      if (j != i) best = std::min(best, features.Distance(i, j));
    }
    sum += best;
  }
  return sum;
}

double Consistency(const FeatureVector& union_feature,
                   const TargetFeature& target) {
  return CosineSimilarity(union_feature, target.vector);
}

double Collaboration(const FeatureVector& complement_feature,
                     const TargetFeature& target) {
  return 1.0 - CosineSimilarity(complement_feature, target.vector);
}

AttributionObjective::AttributionObjective(const Image& image,
                                           const RegionSet& regions,
                                           const TargetFeature& target,
                                           const Oracle& oracle,
                                           const Lambdas& lambdas, int threads)
    : image_(image),
      regions_(regions),
      target_(target),
      oracle_(oracle),
      lambdas_(lambdas),
      features_(image, regions, oracle, threads) {
  ValidateLambdas(lambdas);
  if (target.vector.size() != oracle.shape().feature_dim) {
    Fail(ErrorKind::kInvalidArgument,
         "target feature dimension differs from the oracle's");
  }
}

ScoreBreakdown AttributionObjective::Evaluate(
    std::span<const int> subset) const {
  CheckSubset(subset, regions_.m);
  ScoreBreakdown out;
  const Probe probe = oracle_.Evaluate(ApplyMask(image_, subset, regions_));
  out.conf = Confidence(probe.evidence);
  out.eff = Effectiveness(subset, features_);
  out.cons = Consistency(probe.feature, target_);
  out.colla = CollaborationOf(subset);
  out.total = Combine(out, lambdas_);
  return out;
}

double AttributionObjective::ConsistencyOf(std::span<const int> subset) const {
  return Consistency(oracle_.Embed(ApplyMask(image_, subset, regions_)),
                     target_);
}

double AttributionObjective::CollaborationOf(
    std::span<const int> subset) const {
  return Collaboration(
      oracle_.Embed(ApplyComplementMask(image_, subset, regions_)), target_);
}

}  // namespace smattr
