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

#include "smattr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "smattr/error.hpp"
#include "smattr/parallel.hpp"

namespace smattr {
namespace {

void CheckOrder(std::span<const int> order, const RegionSet& regions) {
  if (order.empty()) Fail(ErrorKind::kInvalidArgument, "ordering is empty");
  std::vector<char> seen(regions.m, 0);
  for (int id : order) {
    if (id < 0 || id >= regions.m) {
      Fail(ErrorKind::kInvalidArgument,
           "element id " + std::to_string(id) + " out of range");
    }
    if (seen[id]) {
      Fail(ErrorKind::kInvalidArgument,
           "element id " + std::to_string(id) + " repeated in ordering");
    }
    seen[id] = 1;
  }
}

Curve BuildCurve(CurveKind kind, const Image& image, const RegionSet& regions,
                 std::span<const int> order, int category,
                 const Oracle& oracle, int threads) {
  CheckOrder(order, regions);
  if (category < 0 || category >= oracle.shape().categories) {
    Fail(ErrorKind::kInvalidArgument,
         "category " + std::to_string(category) + " out of range");
  }
  const int k = static_cast<int>(order.size());
  Curve curve;
  curve.kind = kind;
  curve.category = category;
  curve.points.resize(k + 1);
  ParallelFor(k + 1, threads, [&](int i) {
    const auto prefix = order.first(i);
    const Image probe = kind == CurveKind::kInsertion
                            ? ApplyMask(image, prefix, regions)
                            : ApplyComplementMask(image, prefix, regions);
    curve.points[i].fraction = static_cast<double>(i) / k;
    curve.points[i].probability =
        ClassProbs(oracle.Evidence(probe))[category];
  });
  return curve;
}

}  // namespace

const char* CurveKindName(CurveKind kind) {
  return kind == CurveKind::kInsertion ? "insertion" : "deletion";
}

CurveKind ParseCurveKind(const std::string& name) {
  if (name == "insertion") return CurveKind::kInsertion;
  if (name == "deletion") return CurveKind::kDeletion;
  Fail(ErrorKind::kInvalidArgument, "unknown metric '" + name + "'");
}

void ValidateCurve(const Curve& curve) {
  const auto& p = curve.points;
  if (p.size() < 2 || p.front().fraction != 0.0 || p.back().fraction != 1.0) {
    Fail(ErrorKind::kInvalidArgument, "curve must run from fraction 0 to 1");
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0 && !(p[i].fraction > p[i - 1].fraction)) {
      Fail(ErrorKind::kInvalidArgument, "curve fractions must increase");
    }
    if (!(p[i].probability >= 0.0 && p[i].probability <= 1.0)) {
      Fail(ErrorKind::kInvalidArgument, "curve probability outside [0,1]");
    }
  }
}

Curve InsertionCurve(const Image& image, const RegionSet& regions,
                     std::span<const int> order, int category,
                     const Oracle& oracle, int threads) {
  return BuildCurve(CurveKind::kInsertion, image, regions, order, category,
                    oracle, threads);
}

Curve DeletionCurve(const Image& image, const RegionSet& regions,
                    std::span<const int> order, int category,
                    const Oracle& oracle, int threads) {
  return BuildCurve(CurveKind::kDeletion, image, regions, order, category,
                    oracle, threads);
}

double Auc(const Curve& curve) {
  ValidateCurve(curve);
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    area += (b.fraction - a.fraction) * (a.probability + b.probability) / 2.0;
  }
  return area;
}

RangeReport HighestConfidenceByRange(const Curve& curve) {
  if (curve.kind != CurveKind::kInsertion) {
    Fail(ErrorKind::kInvalidArgument,
         "highest confidence is defined on insertion curves");
  }
  ValidateCurve(curve);
  RangeReport report;
  double running = -1.0;
  std::size_t i = 0;
  for (std::size_t r = 0; r < RangeReport::kRanges.size(); ++r) {
    // Tolerates fractions like 3/12 landing a hair above 0.25.
    const double limit = RangeReport::kRanges[r] + 1e-12;
    while (i < curve.points.size() && curve.points[i].fraction <= limit) {
      running = std::max(running, curve.points[i].probability);
      ++i;
    }
    report.best[r] = running;
  }
  return report;
}

SaliencyMap OrderToSaliency(const RegionSet& regions,
                            std::span<const int> order) {
  const PatchGrid& g = regions.grid;
  RowMajorArray<float> values =
      RowMajorArray<float>::Zero(g.image_height(), g.image_width());
  if (!order.empty()) {
    CheckOrder(order, regions);
    const double k = static_cast<double>(order.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
      const auto value = static_cast<float>((k - r) / k);
      for (int p : regions.elements[order[r]].patch_ids) {
        values.block((p / g.n) * g.patch_h, (p % g.n) * g.patch_w, g.patch_h,
                     g.patch_w) = value;
      }
    }
  }
  return SaliencyMap::FromValues(std::move(values));
}

void WriteCurveCsv(const Curve& curve, std::ostream& out) {
  out << "fraction,probability\n";
  out << std::setprecision(9);
  for (const auto& p : curve.points) {
    out << p.fraction << ',' << p.probability << '\n';
  }
}

void WriteCurveCsv(const Curve& curve, const std::string& path) {
  std::ofstream file(path);
  if (!file) Fail(ErrorKind::kIo, "cannot open " + path + " for writing");
  WriteCurveCsv(curve, file);
  if (!file) Fail(ErrorKind::kIo, "failed writing " + path);
}

}  // namespace smattr
