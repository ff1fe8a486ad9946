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

#ifndef SMATTR_CONFIG_HPP_
#define SMATTR_CONFIG_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "json.hpp"
#include "smattr/external_oracle.hpp"
#include "smattr/oracle.hpp"
#include "smattr/scores.hpp"
#include "smattr/search.hpp"

namespace smattr {

enum class DivisionMode { kPrior, kUniform };

const char* DivisionModeName(DivisionMode mode);
DivisionMode ParseDivisionMode(const std::string& name);

enum class OracleBackend { kSynthetic, kExternal };

struct OracleConfig {
  OracleBackend backend = OracleBackend::kSynthetic;
  SyntheticConfig synthetic;
  ExternalConfig external;
};

struct CheckerConfig {
  int trials = 1000;
  std::uint64_t seed = 7;
};

// Grid/element defaults per task profile.
struct Profile {
  int n;
  int m;
};
inline constexpr Profile kFaceProfile{28, 98};
inline constexpr Profile kFineProfile{10, 25};

Profile ParseProfile(const std::string& name);

// One attribution run. JSON field names mirror the members.
struct RunConfig {
  std::string profile = "face";
  int n = kFaceProfile.n;
  int m = kFaceProfile.m;
  // 0 means k = m.
  int k = 0;
  Lambdas lambdas;
  OracleConfig oracle;
  TargetMode target_mode = TargetMode::kFromImage;
  int target_category = -1;
  DivisionMode division_mode = DivisionMode::kPrior;
  GreedyMode greedy_mode = GreedyMode::kPlain;
  int threads = 1;
  std::string image_path;
  std::string saliency_path;
  std::string result_path = "result.json";
  std::string saliency_out_path = "rank_saliency.smap";
  std::string regions_path;
  std::string curve_path = "curve.csv";
  CheckerConfig checker;

  int effective_k() const { return k == 0 ? m : k; }
};

// Relative paths are resolved against `base_dir`. Missing fields keep their
// defaults; n and m default from the profile.
RunConfig RunConfigFromJson(const nlohmann::json& doc,
                            const std::string& base_dir = "");
RunConfig LoadRunConfig(const std::string& path);
nlohmann::json RunConfigToJson(const RunConfig& config);

// Checks n, m, k, lambdas and division-mode constraints.
void ValidateRunConfig(const RunConfig& config);

// SMATTR_ORACLE_CMD supplies the external command when the config has
// neither a command nor an address.
std::unique_ptr<Oracle> MakeOracle(const OracleConfig& config, int height,
                                   int width, int channels);

}  // namespace smattr

#endif  // SMATTR_CONFIG_HPP_
