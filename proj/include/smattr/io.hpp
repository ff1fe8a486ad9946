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

// File formats.
//
// Float map (.smap), little-endian:
//   offset 0   "SMAP"
//   offset 4   u16 version (1)
//   offset 6   u16 reserved (0)
//   offset 8   u32 width
//   offset 12  u32 height
//   offset 16  width * height float32, row-major
//
// Region sets and attribution results are JSON documents; see the writers
// for field names. Readers reject documents that violate the invariants of
// the type they describe.

#ifndef SMATTR_IO_HPP_
#define SMATTR_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "smattr/geometry.hpp"
#include "smattr/search.hpp"

namespace smattr {

inline constexpr const char* kToolVersion = "smattr 1.0.0";
inline constexpr std::uint16_t kFloatMapVersion = 1;

// 8-bit grayscale or RGB PNG; values are v / 255.
Image ReadImage(const std::string& path);
// Values are quantized with round(v * 255).
void WriteImage(const Image& image, const std::string& path);

std::vector<std::uint8_t> EncodeFloatMap(const SaliencyMap& map);
SaliencyMap DecodeFloatMap(const std::vector<std::uint8_t>& bytes);
SaliencyMap ReadFloatMap(const std::string& path);
void WriteFloatMap(const SaliencyMap& map, const std::string& path);

// Plain-text map: first line "width,height", then one comma-separated row per
// line.
SaliencyMap ReadFloatMapCsv(const std::string& path);
// Dispatches on extension: ".csv" is text, anything else must be .smap.
SaliencyMap ReadSaliency(const std::string& path);

nlohmann::json RegionSetToJson(const RegionSet& regions);
RegionSet RegionSetFromJson(const nlohmann::json& doc);
void WriteRegionSet(const RegionSet& regions, const std::string& path);
RegionSet ReadRegionSet(const std::string& path);

struct ResultDocument {
  AttributionResult result;
  // Echo of the configuration that produced the result.
  nlohmann::json config;
  std::string tool_version = kToolVersion;
};

// include_timing controls whether the wall-clock timing_ms array is
// embedded; without it the document is a pure function of its inputs.
nlohmann::json ResultToJson(const ResultDocument& doc, bool include_timing);
ResultDocument ResultFromJson(const nlohmann::json& json);
void WriteResult(const ResultDocument& doc, const std::string& path,
                 bool include_timing = false);
ResultDocument ReadResult(const std::string& path);

nlohmann::json ReadJsonFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);

}  // namespace smattr

#endif  // SMATTR_IO_HPP_
