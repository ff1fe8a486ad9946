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

// The four subset scores and their weighted combination.
//
//   conf(S)  = 1 - K / sum_k (e_k + 1), evidence of the masked union
//   eff(S)   = sum_{i in S} min_{j in S, j != i} dist(F(I^M_i), F(I^M_j))
//   cons(S)  = cos(F(union of S), f_s)
//   colla(S) = 1 - cos(F(I - union of S), f_s)
//   F(S)     = l1 conf + l2 eff + l3 cons + l4 colla
//
// Conventions for the degenerate cases: a zero feature has cosine
// similarity 0 with anything; the effectiveness marginal against the empty
// set is 1, eff of a singleton is 1 and eff of the empty set is 0.

#ifndef SMATTR_SCORES_HPP_
#define SMATTR_SCORES_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <span>
#include <vector>

#include "smattr/error.hpp"
#include "smattr/geometry.hpp"
#include "smattr/oracle.hpp"

namespace smattr {

template <typename DerivedA, typename DerivedB>
double CosineSimilarity(const Eigen::MatrixBase<DerivedA>& a,
                        const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) {
    Fail(ErrorKind::kInvalidArgument, "cosine of vectors with different sizes");
  }
  const auto ad = a.template cast<double>();
  const auto bd = b.template cast<double>();
  const double na = ad.norm();
  const double nb = bd.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(ad.dot(bd) / (na * nb), -1.0, 1.0);
}

template <typename DerivedA, typename DerivedB>
double CosineDistance(const Eigen::MatrixBase<DerivedA>& a,
                      const Eigen::MatrixBase<DerivedB>& b) {
  return 1.0 - CosineSimilarity(a, b);
}

struct Lambdas {
  double conf = 1.0;
  double eff = 1.0;
  double cons = 1.0;
  double colla = 1.0;
};

void ValidateLambdas(const Lambdas& lambdas);

struct ScoreBreakdown {
  double conf = 0.0;
  double eff = 0.0;
  double cons = 0.0;
  double colla = 0.0;
  double total = 0.0;
};

double Combine(const ScoreBreakdown& parts, const Lambdas& lambdas);

// Set function over element ids [0, size()). Evaluate must be safe to call
// concurrently and deterministic.
class SetFunction {
 public:
  virtual ~SetFunction() = default;
  virtual int size() const = 0;
  virtual ScoreBreakdown Evaluate(std::span<const int> subset) const = 0;
};

// Embeddings of every single-element masked image and their pairwise cosine
// distances. Built once per attribution run; read-only afterwards.
class ElementFeatures {
 public:
  ElementFeatures(const Image& image, const RegionSet& regions,
                  const Oracle& oracle, int threads = 1);
  // From precomputed embeddings, one column per element.
  explicit ElementFeatures(Eigen::MatrixXf embeddings);

  int size() const { return static_cast<int>(embeddings_.cols()); }
  const Eigen::MatrixXf& embeddings() const { return embeddings_; }
  double Distance(int i, int j) const { return distances_(i, j); }

 private:
  void ComputeDistances();

  Eigen::MatrixXf embeddings_;
  Eigen::MatrixXd distances_;
};

// Smallest distance from alpha to the members of s; 1 for empty s.
double EffectivenessMarginal(int alpha, std::span<const int> s,
                             const ElementFeatures& features);
double Effectiveness(std::span<const int> s, const ElementFeatures& features);

double Consistency(const FeatureVector& union_feature,
                   const TargetFeature& target);
double Collaboration(const FeatureVector& complement_feature,
                     const TargetFeature& target);

// Everything the objective needs for one image. Holds references; the
// referenced objects must outlive it.
class AttributionObjective final : public SetFunction {
 public:
  AttributionObjective(const Image& image, const RegionSet& regions,
                       const TargetFeature& target, const Oracle& oracle,
                       const Lambdas& lambdas, int threads = 1);

  int size() const override { return regions_.m; }
  const Lambdas& lambdas() const { return lambdas_; }
  const ElementFeatures& features() const { return features_; }

  // Rejects duplicate or out-of-range ids. The empty set is evaluated on the
  // all-zero image with eff = 0.
  ScoreBreakdown Evaluate(std::span<const int> subset) const override;

  double ConsistencyOf(std::span<const int> subset) const;
  double CollaborationOf(std::span<const int> subset) const;

 private:
  const Image& image_;
  const RegionSet& regions_;
  const TargetFeature& target_;
  const Oracle& oracle_;
  Lambdas lambdas_;
  ElementFeatures features_;
};

}  // namespace smattr

#endif  // SMATTR_SCORES_HPP_
