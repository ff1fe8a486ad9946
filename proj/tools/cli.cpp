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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "smattr/config.hpp"
#include "smattr/error.hpp"
#include "smattr/instances.hpp"
#include "smattr/io.hpp"
#include "smattr/metrics.hpp"
#include "smattr/pipeline.hpp"
#include "smattr/random.hpp"
#include "smattr/scores.hpp"
#include "smattr/search.hpp"

namespace smattr::cli {
namespace {

struct DivideFlags {
  std::string image;
  std::string saliency;
  int n = 0;
  int m = 0;
  std::string out;
};

struct AttributeFlags {
  std::string config;
  std::optional<int> k;
  bool uniform = false;
  std::optional<std::string> profile;
  std::optional<int> n;
  std::optional<int> m;
  std::optional<int> threads;
  std::optional<std::string> greedy;
  std::optional<std::string> out;
  std::optional<std::string> saliency_out;
  bool timing_in_result = false;
};

struct EvalFlags {
  std::string config;
  std::string order;
  std::string metric;
  int category = 0;
  std::string out;
  std::optional<int> threads;
};

struct DebugFlags {
  std::string config;
  int category = 0;
  std::optional<std::string> out;
  std::optional<int> k;
  bool uniform = false;
  std::optional<int> threads;
};

struct SelftestFlags {
  int trials = 1000;
  std::uint64_t seed = 7;
  std::optional<std::string> report;
};

int ExitFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo:
    case ErrorKind::kFormat:
      return kIoFailure;
    case ErrorKind::kOracleInput:
    case ErrorKind::kOracleIo:
      return kOracleFailure;
    default:
      return kBadInput;
  }
}

std::string Num(double v) {
  std::ostringstream s;
  s << std::setprecision(9) << v;
  return s.str();
}

RunConfig LoadWithOverrides(const std::string& path,
                            const std::optional<std::string>& profile,
                            const std::optional<int>& n,
                            const std::optional<int>& m,
                            const std::optional<int>& k, bool uniform,
                            const std::optional<int>& threads) {
  RunConfig config = LoadRunConfig(path);
  if (profile) {
    const Profile p = ParseProfile(*profile);
    config.profile = *profile;
    config.n = p.n;
    config.m = p.m;
  }
  if (n) config.n = *n;
  if (m) config.m = *m;
  if (k) config.k = *k;
  if (uniform) {
    config.division_mode = DivisionMode::kUniform;
    config.m = config.n * config.n;
  }
  if (threads) config.threads = *threads;
  return config;
}

void WriteTimingCsv(const AttributionResult& r, const std::string& path) {
  std::ostringstream s;
  s << "step,element,ms\n" << std::setprecision(9);
  for (std::size_t i = 0; i < r.order.size(); ++i) {
    s << i << ',' << r.order[i] << ',' << r.timing_ms[i] << '\n';
  }
  WriteTextFile(path, s.str());
}

int RunDivide(const DivideFlags& f, std::ostream& out) {
  const Image image = ReadImage(f.image);
  const RegionSet regions = Divide(image, ReadSaliency(f.saliency), f.n, f.m);
  WriteRegionSet(regions, f.out);
  out << "wrote " << regions.m << " elements of " << regions.d
      << " patches to " << f.out << "\n";
  return kOk;
}

int RunAttribute(const AttributeFlags& f, std::ostream& out, std::ostream& err) {
  RunConfig config = LoadWithOverrides(f.config, f.profile, f.n, f.m, f.k,
                                       f.uniform, f.threads);
  if (f.greedy) config.greedy_mode = ParseGreedyMode(*f.greedy);
  if (f.out) config.result_path = *f.out;
  if (f.saliency_out) config.saliency_out_path = *f.saliency_out;
  const PreparedRun run = PrepareRun(config);
  err << "attribute: m=" << run.regions.m << " d=" << run.regions.d
      << " k=" << run.config.effective_k() << " threads=" << config.threads
      << " mode=" << GreedyModeName(config.greedy_mode) << "\n";
  const ResultDocument doc = Attribute(run);
  const AttributionResult& r = doc.result;
  double total_ms = 0.0;
  for (std::size_t i = 0; i < r.order.size(); ++i) {
    total_ms += r.timing_ms[i];
    err << "step " << i << " element " << r.order[i] << " value "
        << Num(r.values[i]) << " (" << Num(r.timing_ms[i]) << " ms)\n";
  }
  err << "attribute: total " << Num(total_ms) << " ms\n";
  WriteResult(doc, config.result_path, f.timing_in_result);
  WriteTimingCsv(r, config.result_path + ".timing.csv");
  WriteFloatMap(OrderToSaliency(run.regions, r.order), config.saliency_out_path);
  if (!config.regions_path.empty()) WriteRegionSet(run.regions, config.regions_path);
  out << "result " << config.result_path << "\n";
  out << "saliency " << config.saliency_out_path << "\n";
  out << "final_value " << Num(r.values.back()) << "\n";
  return kOk;
}

// Applies the division recorded in a result document so the ordering refers
// to the same elements it was computed on.
void AdoptDivision(RunConfig& config, const nlohmann::json& echo) {
  if (!echo.is_object()) return;
  if (echo.contains("n")) config.n = echo.at("n").get<int>();
  if (echo.contains("m")) config.m = echo.at("m").get<int>();
  if (echo.contains("division_mode")) {
    config.division_mode =
        ParseDivisionMode(echo.at("division_mode").get<std::string>());
  }
  config.k = 0;
}

int RunEval(const EvalFlags& f, std::ostream& out) {
  RunConfig config = LoadWithOverrides(f.config, {}, {}, {}, {}, false, f.threads);
  const ResultDocument doc = ReadResult(f.order);
  AdoptDivision(config, doc.config);
  const CurveKind kind = ParseCurveKind(f.metric);
  const PreparedRun run = PrepareRun(config);
  const Curve curve =
      kind == CurveKind::kInsertion
          ? InsertionCurve(run.image, run.regions, doc.result.order, f.category,
                           *run.oracle, config.threads)
          : DeletionCurve(run.image, run.regions, doc.result.order, f.category,
                          *run.oracle, config.threads);
  WriteCurveCsv(curve, f.out);
  out << CurveKindName(kind) << "_auc " << Num(Auc(curve)) << "\n";
  return kOk;
}

int RunDebug(const DebugFlags& f, std::ostream& out, std::ostream& err) {
  RunConfig config =
      LoadWithOverrides(f.config, {}, {}, {}, f.k, f.uniform, f.threads);
  config.target_mode = TargetMode::kFromCategory;
  config.target_category = f.category;
  if (f.out) config.curve_path = *f.out;
  const PreparedRun run = PrepareRun(config);
  err << "debug: searching for category " << f.category << " over m="
      << run.regions.m << "\n";
  const ResultDocument doc = Attribute(run);
  const Curve curve = InsertionCurve(run.image, run.regions, doc.result.order,
                                     f.category, *run.oracle, config.threads);
  WriteCurveCsv(curve, config.curve_path);
  const RangeReport report = HighestConfidenceByRange(curve);
  out << "category " << f.category << "\n";
  for (std::size_t i = 0; i < report.best.size(); ++i) {
    out << "highest_confidence[0-" << Num(100 * RangeReport::kRanges[i])
        << "%] " << Num(report.best[i]) << "\n";
  }
  out << "insertion_auc " << Num(Auc(curve)) << "\n";
  return kOk;
}

// --- selftest -------------------------------------------------------------

nlohmann::json ReportJson(const PropertyReport& r) {
  return {{"trials", r.trials},
          {"violations", r.violations},
          {"violation_rate", r.violation_rate()},
          {"max_violation_magnitude", r.max_violation_magnitude},
          {"seed", r.seed}};
}

void PrintReport(std::ostream& out, const std::string& label,
                 const PropertyReport& r) {
  out << label << " trials=" << r.trials << " violations=" << r.violations
      << " rate=" << Num(r.violation_rate())
      << " max_violation=" << Num(r.max_violation_magnitude)
      << " seed=" << r.seed << "\n";
}

// Built-in instances: 20x20 RGB, 10x10 grid, 10 elements of 10 patches.
InstanceShape SelftestShape() {
  InstanceShape shape;
  shape.side = 20;
  shape.n = 10;
  shape.m = 10;
  shape.feature_dim = 16;
  shape.categories = 5;
  return shape;
}

int RunSelftest(const SelftestFlags& f, std::ostream& out) {
  if (f.trials < 1) Fail(ErrorKind::kInvalidConfig, "trials must be >= 1");
  bool hard_ok = true;
  nlohmann::json archive = {{"trials", f.trials}, {"seed", f.seed}};

  // Modular double: exact equality in the diminishing-returns inequality.
  Xoshiro256 rng(f.seed);
  std::vector<double> weights(10);
  for (double& w : weights) w = rng.Uniform(0.0, 1.0);
  const ModularFunction modular(weights);
  const PropertyReport mod_sub = CheckSubmodularity(modular, f.trials, f.seed);
  const PropertyReport mod_mono = CheckMonotonicity(modular, f.trials, f.seed);
  PrintReport(out, "modular submodularity", mod_sub);
  PrintReport(out, "modular monotonicity", mod_mono);
  hard_ok &= mod_sub.violations == 0 && mod_mono.violations == 0;
  archive["modular"] = {{"submodularity", ReportJson(mod_sub)},
                        {"monotonicity", ReportJson(mod_mono)}};

  // Full objective on the primary built-in instance.
  const SyntheticInstance inst = MakeSyntheticInstance(f.seed, SelftestShape());
  const AttributionObjective objective(inst.image, inst.regions, inst.target,
                                       *inst.oracle, Lambdas{});
  const PropertyReport full_sub = CheckSubmodularity(objective, f.trials, f.seed);
  const PropertyReport full_mono = CheckMonotonicity(objective, f.trials, f.seed);
  const PropertyReport min_dist =
      CheckMinDistanceMonotonicity(objective.features(), f.trials, f.seed);
  PrintReport(out, "objective submodularity", full_sub);
  PrintReport(out, "objective monotonicity", full_mono);
  PrintReport(out, "min-distance monotonicity", min_dist);
  hard_ok &= min_dist.violations == 0;
  archive["objective"] = {{"submodularity", ReportJson(full_sub)},
                          {"monotonicity", ReportJson(full_mono)},
                          {"min_distance", ReportJson(min_dist)}};

  // Greedy against exhaustive search, k = 3.
  constexpr int kInstances = 5;
  constexpr int kBudget = 3;
  const double bound = 1.0 - std::exp(-1.0);
  nlohmann::json comparisons = nlohmann::json::array();
  for (int i = 0; i < kInstances; ++i) {
    const std::uint64_t seed = f.seed + 1000 * (i + 1);
    const SyntheticInstance probe = MakeSyntheticInstance(seed, SelftestShape());
    const AttributionObjective obj(probe.image, probe.regions, probe.target,
                                   *probe.oracle, Lambdas{});
    const AttributionResult greedy = GreedyMaximize(obj, GreedyOptions{kBudget});
    const BruteForceResult best = BruteForceMaximize(obj, kBudget);
    const ReplayReport replay = ReplayGreedySteps(obj, greedy);
    const int checks = std::max(1, f.trials / 10);
    const PropertyReport sub = CheckSubmodularity(obj, checks, seed);
    const PropertyReport mono = CheckMonotonicity(obj, checks, seed);
    const bool clean = sub.violations == 0 && mono.violations == 0;
    const double ratio = greedy.values.back() / best.value.total;
    const bool meets = greedy.values.back() >= bound * best.value.total;
    out << "greedy-vs-brute seed=" << seed << " greedy=" << Num(greedy.values.back())
        << " opt=" << Num(best.value.total) << " ratio=" << Num(ratio)
        << " replay_failures=" << replay.failures
        << " checks=" << (clean ? "clean" : "violations")
        << " bound=" << (meets ? "met" : (clean ? "MISSED" : "not-asserted"))
        << "\n";
    hard_ok &= replay.failures == 0;
    if (clean) hard_ok &= meets;
    comparisons.push_back({{"seed", seed},
                           {"greedy", greedy.values.back()},
                           {"optimum", best.value.total},
                           {"ratio", ratio},
                           {"replay_failures", replay.failures},
                           {"submodularity", ReportJson(sub)},
                           {"monotonicity", ReportJson(mono)}});
  }
  archive["greedy_vs_brute_force"] = comparisons;
  archive["hard_invariants"] = hard_ok ? "pass" : "fail";
  if (f.report) WriteTextFile(*f.report, archive.dump(2) + "\n");
  out << "hard invariants: " << (hard_ok ? "pass" : "FAIL") << "\n";
  return hard_ok ? kOk : kSelftestFailure;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Submodular subset-selection image attribution"};
  app.require_subcommand(1, 1);

  DivideFlags divide;
  auto* divide_cmd = app.add_subcommand("divide", "Divide an image into elements");
  divide_cmd->add_option("--image", divide.image, "PNG image")->required();
  divide_cmd->add_option("--saliency", divide.saliency, "Prior saliency map")
      ->required();
  divide_cmd->add_option("--n", divide.n, "Patches per side")->required();
  divide_cmd->add_option("--m", divide.m, "Element count")->required();
  divide_cmd->add_option("--out", divide.out, "Region set JSON")->required();

  AttributeFlags attribute;
  auto* attribute_cmd = app.add_subcommand("attribute", "Run greedy attribution");
  attribute_cmd->add_option("--config", attribute.config, "Run config JSON")
      ->required();
  attribute_cmd->add_option("--k", attribute.k, "Elements to select");
  attribute_cmd->add_flag("--uniform", attribute.uniform,
                          "One patch per element, no prior map");
  attribute_cmd->add_option("--profile", attribute.profile, "face | fine");
  attribute_cmd->add_option("--n", attribute.n, "Patches per side");
  attribute_cmd->add_option("--m", attribute.m, "Element count");
  attribute_cmd->add_option("--threads", attribute.threads,
                            "Concurrent candidate evaluations");
  attribute_cmd->add_option("--greedy", attribute.greedy, "plain | lazy");
  attribute_cmd->add_option("--out", attribute.out, "Result JSON");
  attribute_cmd->add_option("--saliency-out", attribute.saliency_out,
                            "Rank saliency map (.smap)");
  attribute_cmd->add_flag("--timing-in-result", attribute.timing_in_result,
                          "Embed wall-clock timing in the result JSON");

  EvalFlags eval;
  auto* eval_cmd = app.add_subcommand("eval", "Deletion/insertion curve and AUC");
  eval_cmd->add_option("--config", eval.config, "Run config JSON")->required();
  eval_cmd->add_option("--order", eval.order, "Result JSON")->required();
  eval_cmd->add_option("--metric", eval.metric, "insertion | deletion")
      ->required();
  eval_cmd->add_option("--category", eval.category, "Probe category")->required();
  eval_cmd->add_option("--out", eval.out, "Curve CSV")->required();
  eval_cmd->add_option("--threads", eval.threads, "Concurrent evaluations");

  DebugFlags debug;
  auto* debug_cmd =
      app.add_subcommand("debug", "Search for evidence of a given category");
  debug_cmd->add_option("--config", debug.config, "Run config JSON")->required();
  debug_cmd->add_option("--category", debug.category, "Ground-truth category")
      ->required();
  debug_cmd->add_option("--out", debug.out, "Insertion curve CSV");
  debug_cmd->add_option("--k", debug.k, "Elements to select");
  debug_cmd->add_flag("--uniform", debug.uniform, "One patch per element");
  debug_cmd->add_option("--threads", debug.threads, "Concurrent evaluations");

  SelftestFlags selftest;
  auto* selftest_cmd =
      app.add_subcommand("selftest", "Property checks on built-in instances");
  selftest_cmd->add_option("--trials", selftest.trials, "Samples per check");
  selftest_cmd->add_option("--seed", selftest.seed, "Sampling seed");
  selftest_cmd->add_option("--report", selftest.report, "Archive reports as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*divide_cmd) return RunDivide(divide, out);
    if (*attribute_cmd) return RunAttribute(attribute, out, err);
    if (*eval_cmd) return RunEval(eval, out);
    if (*debug_cmd) return RunDebug(debug, out, err);
    if (*selftest_cmd) return RunSelftest(selftest, out);
  } catch (const Error& e) {
    err << "error (" << ErrorKindName(e.kind()) << "): " << e.what() << "\n";
    return ExitFor(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}

}  // namespace smattr::cli
