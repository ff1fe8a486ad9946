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

#include <cmath>

#include "smattr/error.hpp"
#include "smattr/random.hpp"

namespace smattr {

void Oracle::CheckInput(const Image& image) const {
  const OracleShape& s = shape();
  if (image.height != s.height || image.width != s.width ||
      image.channels != s.channels) {
    Fail(ErrorKind::kOracleInput,
         "oracle expects " + std::to_string(s.height) + "x" +
             std::to_string(s.width) + "x" + std::to_string(s.channels) +
             " input, got " + std::to_string(image.height) + "x" +
             std::to_string(image.width) + "x" +
             std::to_string(image.channels));
  }
}

void ValidateEvidence(const EvidenceVector& evidence) {
  if (evidence.size() < 2) {
    Fail(ErrorKind::kInvalidArgument, "evidence needs at least 2 categories");
  }
  if (!evidence.allFinite() || (evidence.array() < 0.0f).any()) {
    Fail(ErrorKind::kInvalidArgument, "evidence must be finite and >= 0");
  }
}

double Confidence(const EvidenceVector& evidence) {
  ValidateEvidence(evidence);
  const double strength = (evidence.cast<double>().array() + 1.0).sum();
  return 1.0 - static_cast<double>(evidence.size()) / strength;
}

Eigen::VectorXd ClassProbs(const EvidenceVector& evidence) {
  ValidateEvidence(evidence);
  const Eigen::ArrayXd alpha = evidence.cast<double>().array() + 1.0;
  return (alpha / alpha.sum()).matrix();
}

double EdlLoss(const EvidenceVector& evidence, const Eigen::VectorXf& onehot) {
  ValidateEvidence(evidence);
  if (onehot.size() != evidence.size()) {
    Fail(ErrorKind::kInvalidArgument, "one-hot size differs from K");
  }
  int hot = -1;
  for (Eigen::Index k = 0; k < onehot.size(); ++k) {
    if (onehot[k] == 1.0f) {
      if (hot >= 0) Fail(ErrorKind::kInvalidArgument, "one-hot has two 1s");
      hot = static_cast<int>(k);
    } else if (onehot[k] != 0.0f) {
      Fail(ErrorKind::kInvalidArgument, "one-hot entries must be 0 or 1");
    }
  }
  if (hot < 0) Fail(ErrorKind::kInvalidArgument, "one-hot has no 1");
  const double strength = (evidence.cast<double>().array() + 1.0).sum();
  return std::log(strength) - std::log1p(static_cast<double>(evidence[hot]));
}

namespace {

Eigen::MatrixXd DrawUniform(Xoshiro256& rng, int rows, int cols) {
  Eigen::MatrixXd out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      out(r, c) = static_cast<float>(rng.Uniform(-1.0, 1.0));
    }
  }
  return out;
}

}  // namespace

SyntheticOracle::SyntheticOracle(const SyntheticConfig& config, int height,
                                 int width, int channels) {
  if (config.feature_dim < 1 || config.categories < 2) {
    Fail(ErrorKind::kInvalidConfig,
         "synthetic oracle needs feature_dim >= 1 and categories >= 2");
  }
  const Image probe = Image::Zeros(height, width, channels);
  shape_ = OracleShape{config.feature_dim, config.categories, height, width,
                       channels};
  Xoshiro256 rng(config.seed);
  trunk_ = DrawUniform(rng, config.feature_dim, static_cast<int>(probe.size()));
  head_ = DrawUniform(rng, config.categories, config.feature_dim);
}

SyntheticOracle::SyntheticOracle(Eigen::MatrixXf trunk, Eigen::MatrixXf head,
                                 int height, int width, int channels) {
  const Image probe = Image::Zeros(height, width, channels);
  if (trunk.rows() < 1 || trunk.cols() != probe.size() || head.rows() < 2 ||
      head.cols() != trunk.rows()) {
    Fail(ErrorKind::kInvalidConfig, "synthetic oracle weight shapes disagree");
  }
  shape_ = OracleShape{static_cast<int>(trunk.rows()),
                       static_cast<int>(head.rows()), height, width, channels};
  trunk_ = trunk.cast<double>();
  head_ = head.cast<double>();
}

FeatureVector SyntheticOracle::EmbedUnchecked(const Image& image) const {
  const Eigen::VectorXd pre = trunk_ * image.data.matrix().cast<double>();
  const FeatureVector activated = pre.array().tanh().cast<float>().matrix();
  const double norm = activated.cast<double>().norm();
  if (norm == 0.0) return FeatureVector::Zero(shape_.feature_dim);
  return (activated.cast<double>() / norm).cast<float>();
}

EvidenceVector SyntheticOracle::EvidenceFromFeature(
    const FeatureVector& feature) const {
  const Eigen::VectorXd logits = head_ * feature.cast<double>();
  return logits.array().exp().cast<float>().matrix();
}

FeatureVector SyntheticOracle::Embed(const Image& image) const {
  CheckInput(image);
  return EmbedUnchecked(image);
}

EvidenceVector SyntheticOracle::Evidence(const Image& image) const {
  CheckInput(image);
  return EvidenceFromFeature(EmbedUnchecked(image));
}

Probe SyntheticOracle::Evaluate(const Image& image) const {
  CheckInput(image);
  Probe probe;
  probe.feature = EmbedUnchecked(image);
  probe.evidence = EvidenceFromFeature(probe.feature);
  return probe;
}

FeatureVector SyntheticOracle::ClassWeight(int category) const {
  if (category < 0 || category >= shape_.categories) {
    Fail(ErrorKind::kInvalidArgument,
         "category " + std::to_string(category) + " out of range");
  }
  return head_.row(category).transpose().cast<float>();
}

const char* TargetModeName(TargetMode mode) {
  return mode == TargetMode::kFromImage ? "from-image" : "from-category";
}

TargetMode ParseTargetMode(const std::string& name) {
  if (name == "from-image") return TargetMode::kFromImage;
  if (name == "from-category") return TargetMode::kFromCategory;
  Fail(ErrorKind::kInvalidConfig, "unknown target mode '" + name + "'");
}

TargetFeature TargetFromImage(const Oracle& oracle, const Image& image) {
  return TargetFeature{TargetMode::kFromImage, -1, oracle.Embed(image)};
}

TargetFeature TargetFromCategory(const Oracle& oracle, int category) {
  if (category < 0 || category >= oracle.shape().categories) {
    Fail(ErrorKind::kInvalidArgument,
         "category " + std::to_string(category) + " out of range [0," +
             std::to_string(oracle.shape().categories) + ")");
  }
  return TargetFeature{TargetMode::kFromCategory, category,
                       oracle.ClassWeight(category)};
}

}  // namespace smattr
