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

#include "smattr/config.hpp"

#include <cstdlib>
#include <filesystem>

#include "smattr/error.hpp"
#include "smattr/io.hpp"

namespace smattr {
namespace {

namespace fs = std::filesystem;

std::string Resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty() || base_dir.empty() || fs::path(path).is_absolute()) {
    return path;
  }
  return (fs::path(base_dir) / path).lexically_normal().string();
}

template <typename T>
void Take(const nlohmann::json& doc, const char* key, T& out) {
  if (doc.contains(key)) out = doc.at(key).get<T>();
}

}  // namespace

const char* DivisionModeName(DivisionMode mode) {
  return mode == DivisionMode::kPrior ? "prior" : "uniform";
}

DivisionMode ParseDivisionMode(const std::string& name) {
  if (name == "prior") return DivisionMode::kPrior;
  if (name == "uniform") return DivisionMode::kUniform;
  Fail(ErrorKind::kInvalidConfig, "unknown division mode '" + name + "'");
}

Profile ParseProfile(const std::string& name) {
  if (name == "face") return kFaceProfile;
  if (name == "fine") return kFineProfile;
  Fail(ErrorKind::kInvalidConfig, "unknown profile '" + name + "'");
}

RunConfig RunConfigFromJson(const nlohmann::json& doc,
                            const std::string& base_dir) {
  if (!doc.is_object()) Fail(ErrorKind::kInvalidConfig, "config must be an object");
  RunConfig c;
  try {
    Take(doc, "profile", c.profile);
    const Profile profile = ParseProfile(c.profile);
    c.n = profile.n;
    c.m = profile.m;
    Take(doc, "n", c.n);
    Take(doc, "m", c.m);
    Take(doc, "k", c.k);
    if (doc.contains("lambdas")) {
      const auto l = doc.at("lambdas").get<std::vector<double>>();
      if (l.size() != 4) Fail(ErrorKind::kInvalidConfig, "lambdas needs 4 values");
      c.lambdas = Lambdas{l[0], l[1], l[2], l[3]};
    }
    if (doc.contains("oracle")) {
      const auto& o = doc.at("oracle");
      const std::string backend = o.value("backend", std::string("synthetic"));
      if (backend == "synthetic") {
        c.oracle.backend = OracleBackend::kSynthetic;
      } else if (backend == "external") {
        c.oracle.backend = OracleBackend::kExternal;
      } else {
        Fail(ErrorKind::kInvalidConfig, "unknown oracle backend '" + backend + "'");
      }
      if (o.contains("synthetic")) {
        const auto& s = o.at("synthetic");
        Take(s, "seed", c.oracle.synthetic.seed);
        Take(s, "feature_dim", c.oracle.synthetic.feature_dim);
        Take(s, "categories", c.oracle.synthetic.categories);
      }
      if (o.contains("external")) {
        const auto& e = o.at("external");
        Take(e, "command", c.oracle.external.command);
        Take(e, "address", c.oracle.external.address);
        Take(e, "timeout_ms", c.oracle.external.timeout_ms);
      }
    }
    if (doc.contains("target_mode")) {
      c.target_mode = ParseTargetMode(doc.at("target_mode").get<std::string>());
    }
    Take(doc, "target_category", c.target_category);
    if (doc.contains("division_mode")) {
      c.division_mode =
          ParseDivisionMode(doc.at("division_mode").get<std::string>());
    }
    if (doc.contains("greedy_mode")) {
      c.greedy_mode = ParseGreedyMode(doc.at("greedy_mode").get<std::string>());
    }
    Take(doc, "threads", c.threads);
    Take(doc, "image_path", c.image_path);
    Take(doc, "saliency_path", c.saliency_path);
    Take(doc, "result_path", c.result_path);
    Take(doc, "saliency_out_path", c.saliency_out_path);
    Take(doc, "regions_path", c.regions_path);
    Take(doc, "curve_path", c.curve_path);
    if (doc.contains("checker")) {
      Take(doc.at("checker"), "trials", c.checker.trials);
      Take(doc.at("checker"), "seed", c.checker.seed);
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kInvalidConfig, std::string("config: ") + e.what());
  }
  for (std::string* p : {&c.image_path, &c.saliency_path, &c.result_path,
                         &c.saliency_out_path, &c.regions_path, &c.curve_path}) {
    *p = Resolve(base_dir, *p);
  }
  return c;
}

RunConfig LoadRunConfig(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = ReadJsonFile(path);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kFormat) Fail(ErrorKind::kInvalidConfig, e.what());
    throw;
  }
  return RunConfigFromJson(doc, fs::path(path).parent_path().string());
}

nlohmann::json RunConfigToJson(const RunConfig& c) {
  nlohmann::json oracle = {
      {"backend",
       c.oracle.backend == OracleBackend::kSynthetic ? "synthetic" : "external"}};
  if (c.oracle.backend == OracleBackend::kSynthetic) {
    oracle["synthetic"] = {{"seed", c.oracle.synthetic.seed},
                           {"feature_dim", c.oracle.synthetic.feature_dim},
                           {"categories", c.oracle.synthetic.categories}};
  } else {
    oracle["external"] = {{"command", c.oracle.external.command},
                          {"address", c.oracle.external.address},
                          {"timeout_ms", c.oracle.external.timeout_ms}};
  }
  return {{"profile", c.profile},
          {"n", c.n},
          {"m", c.m},
          {"k", c.effective_k()},
          {"lambdas",
           {c.lambdas.conf, c.lambdas.eff, c.lambdas.cons, c.lambdas.colla}},
          {"oracle", oracle},
          {"target_mode", TargetModeName(c.target_mode)},
          {"target_category", c.target_category},
          {"division_mode", DivisionModeName(c.division_mode)},
          {"greedy_mode", GreedyModeName(c.greedy_mode)},
          {"checker", {{"trials", c.checker.trials}, {"seed", c.checker.seed}}}};
}

void ValidateRunConfig(const RunConfig& c) {
  if (c.n < 1) Fail(ErrorKind::kInvalidConfig, "n must be >= 1");
  const int m = c.division_mode == DivisionMode::kUniform ? c.n * c.n : c.m;
  if (c.division_mode == DivisionMode::kPrior &&
      (c.m < 1 || (c.n * c.n) % c.m != 0)) {
    Fail(ErrorKind::kInvalidConfig, "n^2 must be divisible by m");
  }
  const int k = c.k == 0 ? m : c.k;
  if (k < 1 || k > m) {
    Fail(ErrorKind::kInvalidConfig, "k must lie in [1, m]");
  }
  ValidateLambdas(c.lambdas);
  if (c.threads < 1) Fail(ErrorKind::kInvalidConfig, "threads must be >= 1");
  if (c.target_mode == TargetMode::kFromCategory && c.target_category < 0) {
    Fail(ErrorKind::kInvalidConfig, "from-category target needs target_category");
  }
  if (c.checker.trials < 0) Fail(ErrorKind::kInvalidConfig, "trials must be >= 0");
}

std::unique_ptr<Oracle> MakeOracle(const OracleConfig& config, int height,
                                   int width, int channels) {
  if (config.backend == OracleBackend::kSynthetic) {
    return std::make_unique<SyntheticOracle>(config.synthetic, height, width,
                                             channels);
  }
  ExternalConfig external = config.external;
  if (external.command.empty() && external.address.empty()) {
    if (const char* env = std::getenv("SMATTR_ORACLE_CMD")) external.command = env;
  }
  auto oracle = std::make_unique<ExternalOracle>(external);
  const OracleShape& s = oracle->shape();
  if (s.height != height || s.width != width || s.channels != channels) {
    Fail(ErrorKind::kOracleInput,
         "external oracle input shape does not match the image");
  }
  return oracle;
}

}  // namespace smattr
