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

// Model contract consumed by the attribution objective: a feature embedding,
// non-negative evidence over K categories, and per-category weight vectors.
//
// Evidence follows the Dirichlet reading of an evidential classifier:
// S = sum_k (e_k + 1), uncertainty u = K / S, confidence = 1 - u and the
// category probabilities are the Dirichlet mean (e_k + 1) / S.

#ifndef SMATTR_ORACLE_HPP_
#define SMATTR_ORACLE_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>

#include "smattr/geometry.hpp"

namespace smattr {

using FeatureVector = Eigen::VectorXf;
using EvidenceVector = Eigen::VectorXf;

struct OracleShape {
  int feature_dim = 0;
  int categories = 0;
  int height = 0;
  int width = 0;
  int channels = 0;
};

// Embedding and evidence for one input, computed together when the backend
// can share work between them.
struct Probe {
  FeatureVector feature;
  EvidenceVector evidence;
};

// Implementations must be safe to call concurrently through a const
// reference and deterministic for a given input.
class Oracle {
 public:
  virtual ~Oracle() = default;

  virtual const OracleShape& shape() const = 0;
  virtual FeatureVector Embed(const Image& image) const = 0;
  virtual EvidenceVector Evidence(const Image& image) const = 0;
  virtual FeatureVector ClassWeight(int category) const = 0;

  virtual Probe Evaluate(const Image& image) const {
    return Probe{Embed(image), Evidence(image)};
  }

 protected:
  // Throws kOracleInput if the image shape differs from shape().
  void CheckInput(const Image& image) const;
};

void ValidateEvidence(const EvidenceVector& evidence);

double Confidence(const EvidenceVector& evidence);
Eigen::VectorXd ClassProbs(const EvidenceVector& evidence);
// Evidential loss sum_k y_k (log S - log(e_k + 1)) for a one-hot y.
double EdlLoss(const EvidenceVector& evidence, const Eigen::VectorXf& onehot);

struct SyntheticConfig {
  std::uint64_t seed = 0;
  int feature_dim = 32;
  int categories = 10;
};

// Seeded random-projection model:
//   embed(x)    = normalize(tanh(W x)),   W ~ U(-1,1)^{D x HWC}
//   evidence(x) = exp(H embed(x)),        H ~ U(-1,1)^{K x D}
// W is drawn row-major first, then H, from one Xoshiro256 stream. Weights
// are rounded to float; products accumulate in double and results are
// stored as float. A zero pre-normalization embedding is returned as zero.
class SyntheticOracle final : public Oracle {
 public:
  SyntheticOracle(const SyntheticConfig& config, int height, int width,
                  int channels);
  // Explicit weights: trunk is D x (H*W*C), head is K x D.
  SyntheticOracle(Eigen::MatrixXf trunk, Eigen::MatrixXf head, int height,
                  int width, int channels);

  const OracleShape& shape() const override { return shape_; }
  FeatureVector Embed(const Image& image) const override;
  EvidenceVector Evidence(const Image& image) const override;
  FeatureVector ClassWeight(int category) const override;
  Probe Evaluate(const Image& image) const override;

  const Eigen::MatrixXd& trunk() const { return trunk_; }
  const Eigen::MatrixXd& head() const { return head_; }

 private:
  FeatureVector EmbedUnchecked(const Image& image) const;
  EvidenceVector EvidenceFromFeature(const FeatureVector& feature) const;

  OracleShape shape_;
  Eigen::MatrixXd trunk_;
  Eigen::MatrixXd head_;
};

enum class TargetMode { kFromImage, kFromCategory };

const char* TargetModeName(TargetMode mode);
TargetMode ParseTargetMode(const std::string& name);

// Target semantic feature the consistency and collaboration scores align to.
struct TargetFeature {
  TargetMode mode = TargetMode::kFromImage;
  int category = -1;
  FeatureVector vector;
};

TargetFeature TargetFromImage(const Oracle& oracle, const Image& image);
TargetFeature TargetFromCategory(const Oracle& oracle, int category);

}  // namespace smattr

#endif  // SMATTR_ORACLE_HPP_
