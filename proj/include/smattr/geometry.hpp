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

// Image and patch-grid data model, and the saliency-guided division of an
// image into masked sub-region elements.
//
// Patches are numbered row-major over the N x N grid: patch p covers grid
// row p / N and grid column p % N. Element l of a prior-guided division owns
// the patches whose descending-importance ranks fall in [l*d, (l+1)*d).

#ifndef SMATTR_GEOMETRY_HPP_
#define SMATTR_GEOMETRY_HPP_

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace smattr {

template <typename Scalar>
using RowMajorArray =
    Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dense H x W x C raster, channel-interleaved row-major, values in [0, 1].
struct Image {
  int height = 0;
  int width = 0;
  int channels = 1;
  Eigen::ArrayXf data;

  static Image Zeros(int height, int width, int channels);
  // Validates shape and value range.
  static Image FromData(int height, int width, int channels,
                        Eigen::ArrayXf data);

  Eigen::Index size() const { return data.size(); }
  Eigen::Index Offset(int row, int col, int channel = 0) const {
    return (static_cast<Eigen::Index>(row) * width + col) * channels + channel;
  }
  float at(int row, int col, int channel = 0) const {
    return data[Offset(row, col, channel)];
  }
  bool SameShape(const Image& other) const {
    return height == other.height && width == other.width &&
           channels == other.channels;
  }
};

// Bitwise equality of shape and payload.
bool operator==(const Image& a, const Image& b);

// Non-negative importance raster produced by some prior attribution method.
struct SaliencyMap {
  RowMajorArray<float> values;

  int height() const { return static_cast<int>(values.rows()); }
  int width() const { return static_cast<int>(values.cols()); }

  static SaliencyMap FromValues(RowMajorArray<float> values);
};

struct PatchGrid {
  int n = 1;
  int patch_h = 0;
  int patch_w = 0;

  int patch_count() const { return n * n; }
  int image_height() const { return n * patch_h; }
  int image_width() const { return n * patch_w; }
};

// Rejects dimensions not divisible by n.
PatchGrid MakePatchGrid(int height, int width, int n);

// N x N per-patch importance.
using ImportanceGrid = RowMajorArray<double>;

struct RegionElement {
  int id = 0;
  std::vector<int> patch_ids;
};

struct RegionSet {
  PatchGrid grid;
  int m = 0;
  int d = 0;
  std::vector<RegionElement> elements;

  int size() const { return m; }
};

bool operator==(const RegionElement& a, const RegionElement& b);
bool operator==(const RegionSet& a, const RegionSet& b);

// Throws kInvalidGeometry/kInvalidArgument unless `regions` is an exact
// partition of its grid into m elements of d patches.
void ValidateRegionSet(const RegionSet& regions);

// Block-mean pooling of the map onto the grid.
ImportanceGrid PoolSaliency(const SaliencyMap& map, const PatchGrid& grid);

// Patch indices sorted by importance, descending; ties by ascending index.
std::vector<int> RankPatches(const ImportanceGrid& importance);

// Groups ranked patches into m elements of d = N^2 / m patches each.
RegionSet DivideByImportance(const PatchGrid& grid,
                             const ImportanceGrid& importance, int m);

RegionSet Divide(const Image& image, const SaliencyMap& saliency, int n, int m);

// One patch per element, element i = {patch i}.
RegionSet DivideUniform(const Image& image, int n);

// Copies the pixels of the selected elements; everything else is 0.
Image ApplyMask(const Image& image, std::span<const int> subset,
                const RegionSet& regions);

// Keeps every element except the selected ones: I - sum_{s in subset} I^M_s.
Image ApplyComplementMask(const Image& image, std::span<const int> subset,
                          const RegionSet& regions);

// Per-patch keep flags for the given subset; validates ids.
std::vector<char> PatchSelection(std::span<const int> subset,
                                 const RegionSet& regions);

// Mean pooled importance of every element.
Eigen::ArrayXd ElementImportance(const RegionSet& regions,
                                 const ImportanceGrid& importance);

}  // namespace smattr

#endif  // SMATTR_GEOMETRY_HPP_
