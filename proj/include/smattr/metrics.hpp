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

// Faithfulness metrics for an element ordering: insertion and deletion
// curves of one category's probability, their trapezoidal AUC, and the best
// probability reached within growing prefixes of the ordering.

#ifndef SMATTR_METRICS_HPP_
#define SMATTR_METRICS_HPP_

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "smattr/geometry.hpp"
#include "smattr/oracle.hpp"

namespace smattr {

enum class CurveKind { kInsertion, kDeletion };

const char* CurveKindName(CurveKind kind);
CurveKind ParseCurveKind(const std::string& name);

struct CurvePoint {
  double fraction = 0.0;
  double probability = 0.0;
};

struct Curve {
  CurveKind kind = CurveKind::kInsertion;
  int category = 0;
  std::vector<CurvePoint> points;
};

// Throws kInvalidArgument unless fractions run strictly upward from 0 to 1
// and every probability lies in [0, 1].
void ValidateCurve(const Curve& curve);

// Point i is the category probability with the first i elements of `order`
// inserted into a zero image (insertion) or zeroed out of the image
// (deletion), at fraction i / |order|.
Curve InsertionCurve(const Image& image, const RegionSet& regions,
                     std::span<const int> order, int category,
                     const Oracle& oracle, int threads = 1);
Curve DeletionCurve(const Image& image, const RegionSet& regions,
                    std::span<const int> order, int category,
                    const Oracle& oracle, int threads = 1);

double Auc(const Curve& curve);

struct RangeReport {
  static constexpr std::array<double, 4> kRanges = {0.25, 0.5, 0.75, 1.0};
  std::array<double, 4> best{};
};

RangeReport HighestConfidenceByRange(const Curve& curve);

// Element ranked r of k gets (k - r) / k on its pixels; unranked pixels 0.
SaliencyMap OrderToSaliency(const RegionSet& regions,
                            std::span<const int> order);

// "fraction,probability" header, 9 significant digits.
void WriteCurveCsv(const Curve& curve, std::ostream& out);
void WriteCurveCsv(const Curve& curve, const std::string& path);

}  // namespace smattr

#endif  // SMATTR_METRICS_HPP_
