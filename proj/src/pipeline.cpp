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

#include "smattr/pipeline.hpp"

#include "smattr/error.hpp"
#include "smattr/scores.hpp"
#include "smattr/search.hpp"

namespace smattr {

PreparedRun PrepareRun(const RunConfig& config) {
  ValidateRunConfig(config);
  if (config.image_path.empty()) {
    Fail(ErrorKind::kInvalidConfig, "config has no image_path");
  }
  PreparedRun run;
  run.config = config;
  run.image = ReadImage(config.image_path);
  if (config.division_mode == DivisionMode::kUniform) {
    run.regions = DivideUniform(run.image, config.n);
    run.config.m = run.regions.m;
  } else {
    if (config.saliency_path.empty()) {
      Fail(ErrorKind::kInvalidConfig, "prior division needs saliency_path");
    }
    run.regions = Divide(run.image, ReadSaliency(config.saliency_path),
                         config.n, config.m);
  }
  run.oracle = MakeOracle(config.oracle, run.image.height, run.image.width,
                          run.image.channels);
  run.target = config.target_mode == TargetMode::kFromCategory
                   ? TargetFromCategory(*run.oracle, config.target_category)
                   : TargetFromImage(*run.oracle, run.image);
  return run;
}

ResultDocument Attribute(const PreparedRun& run) {
  const RunConfig& c = run.config;
  const AttributionObjective objective(run.image, run.regions, run.target,
                                       *run.oracle, c.lambdas, c.threads);
  GreedyOptions options;
  options.k = c.effective_k();
  options.threads = c.threads;
  options.mode = c.greedy_mode;
  ResultDocument doc;
  doc.result = GreedyMaximize(objective, options);
  doc.config = RunConfigToJson(c);
  return doc;
}

}  // namespace smattr
