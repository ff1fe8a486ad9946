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

#include "smattr/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "smattr/error.hpp"
#include "smattr/parallel.hpp"
#include "smattr/random.hpp"

namespace smattr {
namespace {

using Clock = std::chrono::steady_clock;

double ElapsedMs(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Index of the largest total, first wins on ties; NaN never wins.
int ArgMax(const std::vector<ScoreBreakdown>& scores) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(scores.size()); ++i) {
    const double v = scores[i].total;
    if (std::isnan(v)) continue;
    if (best < 0 || v > scores[best].total) best = i;
  }
  return best;
}

std::vector<int> Remaining(const std::vector<char>& chosen) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(chosen.size()); ++i) {
    if (!chosen[i]) out.push_back(i);
  }
  return out;
}

std::vector<int> With(std::vector<int> set, int extra) {
  set.push_back(extra);
  return set;
}

std::vector<ScoreBreakdown> EvaluateCandidates(const SetFunction& objective,
                                               const std::vector<int>& base,
                                               const std::vector<int>& candidates,
                                               int threads) {
  std::vector<ScoreBreakdown> scores(candidates.size());
  ParallelFor(static_cast<int>(candidates.size()), threads, [&](int i) {
    scores[i] = objective.Evaluate(With(base, candidates[i]));
  });
  return scores;
}

void CheckK(const SetFunction& objective, int k) {
  if (k < 1 || k > objective.size()) {
    Fail(ErrorKind::kInvalidConfig,
         "k=" + std::to_string(k) + " must lie in [1, " +
             std::to_string(objective.size()) + "]");
  }
}

void Commit(AttributionResult& result, int id, const ScoreBreakdown& score,
            double& previous, Clock::time_point step_start) {
  result.order.push_back(id);
  result.gains.push_back(score.total - previous);
  result.values.push_back(score.total);
  result.breakdowns.push_back(score);
  result.timing_ms.push_back(ElapsedMs(step_start));
  previous = score.total;
}

AttributionResult PlainGreedy(const SetFunction& objective,
                              const GreedyOptions& options) {
  AttributionResult result;
  result.mode = GreedyMode::kPlain;
  result.initial_value = objective.Evaluate({}).total;
  double previous = result.initial_value;
  std::vector<char> chosen(objective.size(), 0);
  for (int step = 0; step < options.k; ++step) {
    const auto start = Clock::now();
    const std::vector<int> candidates = Remaining(chosen);
    const auto scores =
        EvaluateCandidates(objective, result.order, candidates, options.threads);
    const int best = ArgMax(scores);
    if (best < 0) Fail(ErrorKind::kInvalidArgument, "objective returned NaN");
    chosen[candidates[best]] = 1;
    Commit(result, candidates[best], scores[best], previous, start);
  }
  return result;
}

// Upper bounds are the stale gains from earlier steps; a candidate whose gain
// was refreshed this step and still tops every bound is taken.
AttributionResult LazyGreedy(const SetFunction& objective,
                             const GreedyOptions& options) {
  const int m = objective.size();
  AttributionResult result;
  result.mode = GreedyMode::kLazy;
  result.initial_value = objective.Evaluate({}).total;
  double previous = result.initial_value;
  std::vector<char> chosen(m, 0);
  std::vector<double> bound(m);
  std::vector<int> fresh_at(m, 0);
  std::vector<ScoreBreakdown> last(m);

  std::vector<int> all(m);
  std::iota(all.begin(), all.end(), 0);
  const auto start0 = Clock::now();
  last = EvaluateCandidates(objective, {}, all, options.threads);
  for (int i = 0; i < m; ++i) {
    bound[i] = std::isnan(last[i].total)
                   ? -std::numeric_limits<double>::infinity()
                   : last[i].total - previous;
  }

  for (int step = 0; step < options.k; ++step) {
    const auto start = step == 0 ? start0 : Clock::now();
    for (;;) {
      int top = -1;
      for (int i = 0; i < m; ++i) {
        if (!chosen[i] && (top < 0 || bound[i] > bound[top])) top = i;
      }
      if (fresh_at[top] == step) {
        chosen[top] = 1;
        Commit(result, top, last[top], previous, start);
        break;
      }
      last[top] = objective.Evaluate(With(result.order, top));
      bound[top] = std::isnan(last[top].total)
                       ? -std::numeric_limits<double>::infinity()
                       : last[top].total - previous;
      fresh_at[top] = step;
    }
  }
  return result;
}

}  // namespace

const char* GreedyModeName(GreedyMode mode) {
  return mode == GreedyMode::kPlain ? "plain" : "lazy";
}

GreedyMode ParseGreedyMode(const std::string& name) {
  if (name == "plain") return GreedyMode::kPlain;
  if (name == "lazy") return GreedyMode::kLazy;
  Fail(ErrorKind::kInvalidConfig, "unknown greedy mode '" + name + "'");
}

void ValidateAttributionResult(const AttributionResult& r, int m) {
  const std::size_t k = r.order.size();
  if (r.gains.size() != k || r.values.size() != k || r.breakdowns.size() != k ||
      (!r.timing_ms.empty() && r.timing_ms.size() != k)) {
    Fail(ErrorKind::kFormat, "result arrays have inconsistent lengths");
  }
  std::vector<int> seen(r.order);
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    Fail(ErrorKind::kFormat, "result order repeats an element");
  }
  if (!seen.empty() && (seen.front() < 0 || (m >= 0 && seen.back() >= m))) {
    Fail(ErrorKind::kFormat, "result order has an out-of-range element");
  }
  double previous = r.initial_value;
  for (std::size_t i = 0; i < k; ++i) {
    const double expect = previous + r.gains[i];
    const double scale = std::max(1.0, std::abs(r.values[i]));
    if (!(std::abs(expect - r.values[i]) <= 1e-6 * scale)) {
      Fail(ErrorKind::kFormat,
           "values[" + std::to_string(i) + "] != values[i-1] + gains[i]");
    }
    previous = r.values[i];
  }
}

AttributionResult GreedyMaximize(const SetFunction& objective,
                                 const GreedyOptions& options) {
  CheckK(objective, options.k);
  return options.mode == GreedyMode::kPlain ? PlainGreedy(objective, options)
                                            : LazyGreedy(objective, options);
}

std::uint64_t Binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (c > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    c = c * num / i;
  }
  return c;
}

BruteForceResult BruteForceMaximize(const SetFunction& objective, int k,
                                    std::uint64_t budget) {
  CheckK(objective, k);
  const int m = objective.size();
  const std::uint64_t count = Binomial(m, k);
  if (count > budget) {
    Fail(ErrorKind::kInvalidConfig,
         "brute force over C(" + std::to_string(m) + "," + std::to_string(k) +
             ")=" + std::to_string(count) + " subsets exceeds budget " +
             std::to_string(budget));
  }
  BruteForceResult best;
  std::vector<int> subset(k);
  std::iota(subset.begin(), subset.end(), 0);
  bool have = false;
  for (;;) {
    const ScoreBreakdown value = objective.Evaluate(subset);
    ++best.evaluated;
    if (!std::isnan(value.total) && (!have || value.total > best.value.total)) {
      best.subset = subset;
      best.value = value;
      have = true;
    }
    // Next combination in lexicographic order.
    int i = k - 1;
    while (i >= 0 && subset[i] == m - k + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
  if (!have) Fail(ErrorKind::kInvalidArgument, "objective returned only NaN");
  return best;
}

namespace {

std::vector<int> Iota(int m) {
  std::vector<int> v(m);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

struct NestedDraw {
  std::vector<int> sa;
  std::vector<int> sb;
  int alpha;
};

// |Sa| ~ U[min_a, m-2], |Sb| = |Sa| + U[1, m-1-|Sa|], members drawn without
// replacement; alpha is the next draw.
NestedDraw DrawNested(Xoshiro256& rng, int m, int min_a) {
  const int a = static_cast<int>(rng.Between(min_a, m - 2));
  const int b = a + static_cast<int>(rng.Between(1, m - 1 - a));
  const std::vector<int> draw = SampleWithoutReplacement(rng, Iota(m), b + 1);
  return NestedDraw{{draw.begin(), draw.begin() + a},
                    {draw.begin(), draw.begin() + b},
                    draw[b]};
}

void Record(PropertyReport& report, double excess, double tolerance) {
  if (excess > tolerance) {
    ++report.violations;
    report.max_violation_magnitude =
        std::max(report.max_violation_magnitude, excess);
  }
}

}  // namespace

PropertyReport CheckSubmodularity(const SetFunction& objective, int trials,
                                  std::uint64_t seed, double tolerance) {
  const int m = objective.size();
  if (m < 3) Fail(ErrorKind::kInvalidConfig, "submodularity check needs m >= 3");
  PropertyReport report;
  report.seed = seed;
  Xoshiro256 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const NestedDraw d = DrawNested(rng, m, 0);
    const double gain_a = objective.Evaluate(With(d.sa, d.alpha)).total -
                          objective.Evaluate(d.sa).total;
    const double gain_b = objective.Evaluate(With(d.sb, d.alpha)).total -
                          objective.Evaluate(d.sb).total;
    ++report.trials;
    Record(report, gain_b - gain_a, tolerance);
  }
  return report;
}

PropertyReport CheckMonotonicity(const SetFunction& objective, int trials,
                                 std::uint64_t seed, double tolerance) {
  const int m = objective.size();
  if (m < 2) Fail(ErrorKind::kInvalidConfig, "monotonicity check needs m >= 2");
  PropertyReport report;
  report.seed = seed;
  Xoshiro256 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const int s = static_cast<int>(rng.Between(0, m - 1));
    const std::vector<int> draw = SampleWithoutReplacement(rng, Iota(m), s + 1);
    const std::vector<int> base(draw.begin(), draw.begin() + s);
    const double gain =
        objective.Evaluate(draw).total - objective.Evaluate(base).total;
    ++report.trials;
    Record(report, -gain, tolerance);
  }
  return report;
}

PropertyReport CheckMinDistanceMonotonicity(const ElementFeatures& features,
                                            int trials, std::uint64_t seed,
                                            double tolerance) {
  const int m = features.size();
  if (m < 3) Fail(ErrorKind::kInvalidConfig, "min-distance check needs m >= 3");
  PropertyReport report;
  report.seed = seed;
  Xoshiro256 rng(seed);
  for (int t = 0; t < trials; ++t) {
    // The empty-set marginal is a convention, not a minimum; start at |Sa|=1.
    const NestedDraw d = DrawNested(rng, m, 1);
    const double small = EffectivenessMarginal(d.alpha, d.sa, features);
    const double large = EffectivenessMarginal(d.alpha, d.sb, features);
    ++report.trials;
    Record(report, large - small, tolerance);
  }
  return report;
}

ReplayReport ReplayGreedySteps(const SetFunction& objective,
                               const AttributionResult& result, int threads) {
  ReplayReport report;
  std::vector<char> chosen(objective.size(), 0);
  std::vector<int> prefix;
  for (std::size_t step = 0; step < result.order.size(); ++step) {
    const std::vector<int> candidates = Remaining(chosen);
    const auto scores =
        EvaluateCandidates(objective, prefix, candidates, threads);
    const int best = ArgMax(scores);
    ++report.steps;
    if (best < 0 || candidates[best] != result.order[step] ||
        scores[best].total != result.values[step]) {
      ++report.failures;
      report.failed_steps.push_back(static_cast<int>(step));
    }
    chosen[result.order[step]] = 1;
    prefix.push_back(result.order[step]);
  }
  return report;
}

ScoreBreakdown ModularFunction::Evaluate(std::span<const int> subset) const {
  ScoreBreakdown out;
  for (int id : subset) {
    if (id < 0 || id >= size()) {
      Fail(ErrorKind::kInvalidArgument, "element id out of range");
    }
    out.conf += weights_[id];
  }
  out.total = out.conf;
  return out;
}

}  // namespace smattr
