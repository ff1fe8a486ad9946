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

#ifndef SMATTR_PIPELINE_HPP_
#define SMATTR_PIPELINE_HPP_

#include <memory>

#include "smattr/config.hpp"
#include "smattr/geometry.hpp"
#include "smattr/io.hpp"
#include "smattr/oracle.hpp"

namespace smattr {

// Inputs of one attribution run, loaded and divided.
struct PreparedRun {
  RunConfig config;
  Image image;
  RegionSet regions;
  std::unique_ptr<Oracle> oracle;
  TargetFeature target;
};

// Loads the image (and saliency in prior mode), divides it, and connects the
// oracle.
PreparedRun PrepareRun(const RunConfig& config);

// Greedy attribution for the prepared run. The config echo inside the
// document excludes paths and thread counts.
ResultDocument Attribute(const PreparedRun& run);

}  // namespace smattr

#endif  // SMATTR_PIPELINE_HPP_
