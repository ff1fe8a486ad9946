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

#include "smattr/geometry.hpp"

#include <algorithm>
#include <cstring>
#include <cmath>
#include <numeric>
#include <string>

#include "smattr/error.hpp"

namespace smattr {
namespace {

std::string Dims(int h, int w) {
  return std::to_string(h) + "x" + std::to_string(w);
}

void CheckImageMatchesGrid(const Image& image, const PatchGrid& grid) {
  if (image.height != grid.image_height() ||
      image.width != grid.image_width()) {
    Fail(ErrorKind::kInvalidGeometry,
         "image " + Dims(image.height, image.width) +
             " does not match region grid " +
             Dims(grid.image_height(), grid.image_width()));
  }
}

// Copies (or zeroes) whole patches between two images of the same shape.
void CopyPatches(const Image& src, const std::vector<char>& keep,
                 const PatchGrid& grid, Image& dst) {
  const Eigen::Index run = static_cast<Eigen::Index>(grid.patch_w) * src.channels;
  for (int p = 0; p < grid.patch_count(); ++p) {
    if (!keep[p]) continue;
    const int row0 = (p / grid.n) * grid.patch_h;
    const int col0 = (p % grid.n) * grid.patch_w;
    for (int r = row0; r < row0 + grid.patch_h; ++r) {
      const Eigen::Index off = src.Offset(r, col0);
      dst.data.segment(off, run) = src.data.segment(off, run);
    }
  }
}

}  // namespace

Image Image::Zeros(int height, int width, int channels) {
  if (height <= 0 || width <= 0 || (channels != 1 && channels != 3)) {
    Fail(ErrorKind::kInvalidGeometry,
         "image must be non-empty with 1 or 3 channels");
  }
  Image image;
  image.height = height;
  image.width = width;
  image.channels = channels;
  image.data = Eigen::ArrayXf::Zero(static_cast<Eigen::Index>(height) * width *
                                    channels);
  return image;
}

Image Image::FromData(int height, int width, int channels,
                      Eigen::ArrayXf data) {
  Image image = Zeros(height, width, channels);
  if (data.size() != image.data.size()) {
    Fail(ErrorKind::kInvalidGeometry,
         "image payload has " + std::to_string(data.size()) +
             " values, expected " + std::to_string(image.data.size()));
  }
  if (!data.isFinite().all() || (data < 0.0f).any() || (data > 1.0f).any()) {
    Fail(ErrorKind::kInvalidArgument, "image values must be finite in [0,1]");
  }
  image.data = std::move(data);
  return image;
}

bool operator==(const Image& a, const Image& b) {
  if (!a.SameShape(b) || a.data.size() != b.data.size()) return false;
  // Bitwise: -0.0f != 0.0f here.
  return std::memcmp(a.data.data(), b.data.data(),
                     sizeof(float) * a.data.size()) == 0;
}

SaliencyMap SaliencyMap::FromValues(RowMajorArray<float> values) {
  if (values.size() == 0) {
    Fail(ErrorKind::kInvalidGeometry, "saliency map is empty");
  }
  if (!values.isFinite().all() || (values < 0.0f).any()) {
    Fail(ErrorKind::kInvalidArgument,
         "saliency values must be finite and non-negative");
  }
  SaliencyMap map;
  map.values = std::move(values);
  return map;
}

PatchGrid MakePatchGrid(int height, int width, int n) {
  if (n < 1) Fail(ErrorKind::kInvalidConfig, "grid side n must be >= 1");
  if (height <= 0 || width <= 0 || height % n != 0 || width % n != 0) {
    Fail(ErrorKind::kInvalidGeometry, "dimensions " + Dims(height, width) +
                                          " are not divisible by n=" +
                                          std::to_string(n));
  }
  return PatchGrid{n, height / n, width / n};
}

bool operator==(const RegionElement& a, const RegionElement& b) {
  return a.id == b.id && a.patch_ids == b.patch_ids;
}

bool operator==(const RegionSet& a, const RegionSet& b) {
  return a.grid.n == b.grid.n && a.grid.patch_h == b.grid.patch_h &&
         a.grid.patch_w == b.grid.patch_w && a.m == b.m && a.d == b.d &&
         a.elements == b.elements;
}

void ValidateRegionSet(const RegionSet& regions) {
  const int total = regions.grid.patch_count();
  if (regions.grid.n < 1 || regions.m < 1 || regions.d < 1 ||
      regions.m * regions.d != total) {
    Fail(ErrorKind::kInvalidConfig, "region set requires m * d = N^2");
  }
  if (static_cast<int>(regions.elements.size()) != regions.m) {
    Fail(ErrorKind::kInvalidConfig, "region set element count != m");
  }
  std::vector<char> seen(total, 0);
  for (int l = 0; l < regions.m; ++l) {
    const RegionElement& element = regions.elements[l];
    if (element.id != l) {
      Fail(ErrorKind::kInvalidArgument, "element ids must be 0..m-1 in order");
    }
    if (static_cast<int>(element.patch_ids.size()) != regions.d) {
      Fail(ErrorKind::kInvalidConfig,
           "element " + std::to_string(l) + " does not have d patches");
    }
    for (int p : element.patch_ids) {
      if (p < 0 || p >= total) {
        Fail(ErrorKind::kInvalidArgument,
             "patch id " + std::to_string(p) + " out of range");
      }
      if (seen[p]) {
        Fail(ErrorKind::kInvalidArgument,
             "patch " + std::to_string(p) + " assigned twice");
      }
      seen[p] = 1;
    }
  }
}

ImportanceGrid PoolSaliency(const SaliencyMap& map, const PatchGrid& grid) {
  if (map.height() != grid.image_height() ||
      map.width() != grid.image_width()) {
    Fail(ErrorKind::kInvalidGeometry,
         "saliency " + Dims(map.height(), map.width()) +
             " does not match grid " +
             Dims(grid.image_height(), grid.image_width()));
  }
  ImportanceGrid pooled(grid.n, grid.n);
  const double area = static_cast<double>(grid.patch_h) * grid.patch_w;
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      pooled(i, j) = map.values
                         .block(i * grid.patch_h, j * grid.patch_w,
                                grid.patch_h, grid.patch_w)
                         .cast<double>()
                         .sum() /
                     area;
    }
  }
  return pooled;
}

std::vector<int> RankPatches(const ImportanceGrid& importance) {
  const auto n = static_cast<int>(importance.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Row-major storage, so linear index == patch id.
  const double* values = importance.data();
  std::stable_sort(order.begin(), order.end(),
                   [values](int a, int b) { return values[a] > values[b]; });
  return order;
}

RegionSet DivideByImportance(const PatchGrid& grid,
                             const ImportanceGrid& importance, int m) {
  const int total = grid.patch_count();
  if (importance.rows() != grid.n || importance.cols() != grid.n) {
    Fail(ErrorKind::kInvalidGeometry, "importance grid is not N x N");
  }
  if (!importance.isFinite().all()) {
    Fail(ErrorKind::kInvalidArgument, "importance values must be finite");
  }
  if (m < 1 || m > total || total % m != 0) {
    Fail(ErrorKind::kInvalidConfig, "N^2=" + std::to_string(total) +
                                        " is not divisible by m=" +
                                        std::to_string(m));
  }
  const std::vector<int> ranked = RankPatches(importance);
  RegionSet regions;
  regions.grid = grid;
  regions.m = m;
  regions.d = total / m;
  regions.elements.resize(m);
  for (int l = 0; l < m; ++l) {
    regions.elements[l].id = l;
    regions.elements[l].patch_ids.assign(ranked.begin() + l * regions.d,
                                         ranked.begin() + (l + 1) * regions.d);
  }
  return regions;
}

RegionSet Divide(const Image& image, const SaliencyMap& saliency, int n,
                 int m) {
  if (saliency.height() != image.height || saliency.width() != image.width) {
    Fail(ErrorKind::kInvalidGeometry,
         "saliency " + Dims(saliency.height(), saliency.width()) +
             " differs from image " + Dims(image.height, image.width));
  }
  const PatchGrid grid = MakePatchGrid(image.height, image.width, n);
  if (m < 1 || grid.patch_count() % m != 0) {
    Fail(ErrorKind::kInvalidConfig, "N^2=" +
                                        std::to_string(grid.patch_count()) +
                                        " is not divisible by m=" +
                                        std::to_string(m));
  }
  return DivideByImportance(grid, PoolSaliency(saliency, grid), m);
}

RegionSet DivideUniform(const Image& image, int n) {
  const PatchGrid grid = MakePatchGrid(image.height, image.width, n);
  RegionSet regions;
  regions.grid = grid;
  regions.m = grid.patch_count();
  regions.d = 1;
  regions.elements.resize(regions.m);
  for (int i = 0; i < regions.m; ++i) {
    regions.elements[i] = RegionElement{i, {i}};
  }
  return regions;
}

std::vector<char> PatchSelection(std::span<const int> subset,
                                 const RegionSet& regions) {
  std::vector<char> keep(regions.grid.patch_count(), 0);
  for (int id : subset) {
    if (id < 0 || id >= regions.m) {
      Fail(ErrorKind::kInvalidArgument,
           "element id " + std::to_string(id) + " out of range [0," +
               std::to_string(regions.m) + ")");
    }
    const auto& patches = regions.elements[id].patch_ids;
    if (keep[patches.front()]) {
      Fail(ErrorKind::kInvalidArgument,
           "element id " + std::to_string(id) + " listed twice");
    }
    for (int p : patches) keep[p] = 1;
  }
  return keep;
}

Image ApplyMask(const Image& image, std::span<const int> subset,
                const RegionSet& regions) {
  CheckImageMatchesGrid(image, regions.grid);
  const std::vector<char> keep = PatchSelection(subset, regions);
  Image out = Image::Zeros(image.height, image.width, image.channels);
  CopyPatches(image, keep, regions.grid, out);
  return out;
}

Image ApplyComplementMask(const Image& image, std::span<const int> subset,
                          const RegionSet& regions) {
  CheckImageMatchesGrid(image, regions.grid);
  std::vector<char> keep = PatchSelection(subset, regions);
  for (auto& k : keep) k = !k;
  Image out = Image::Zeros(image.height, image.width, image.channels);
  CopyPatches(image, keep, regions.grid, out);
  return out;
}

Eigen::ArrayXd ElementImportance(const RegionSet& regions,
                                 const ImportanceGrid& importance) {
  Eigen::ArrayXd mean(regions.m);
  const double* values = importance.data();
  for (int l = 0; l < regions.m; ++l) {
    double sum = 0.0;
    for (int p : regions.elements[l].patch_ids) sum += values[p];
    mean[l] = sum / regions.d;
  }
  return mean;
}

}  // namespace smattr
