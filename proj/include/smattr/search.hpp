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

// Cardinality-constrained maximization of a set function: plain and lazy
// greedy, an exhaustive reference solver, and sampling checkers for the
// diminishing-returns and monotonicity properties.

#ifndef SMATTR_SEARCH_HPP_
#define SMATTR_SEARCH_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smattr/scores.hpp"

namespace smattr {

enum class GreedyMode { kPlain, kLazy };

const char* GreedyModeName(GreedyMode mode);
GreedyMode ParseGreedyMode(const std::string& name);

struct GreedyOptions {
  int k = 1;
  // Concurrent candidate evaluations per step. Never changes the result.
  int threads = 1;
  GreedyMode mode = GreedyMode::kPlain;
};

struct AttributionResult {
  GreedyMode mode = GreedyMode::kPlain;
  std::vector<int> order;
  // gains[i] = values[i] - values[i-1], with values[-1] = initial_value.
  std::vector<double> gains;
  std::vector<double> values;
  std::vector<ScoreBreakdown> breakdowns;
  std::vector<double> timing_ms;
  // Objective of the empty set.
  double initial_value = 0.0;
};

// Throws kFormat when the order repeats an id or the value chain breaks.
void ValidateAttributionResult(const AttributionResult& result, int m = -1);

// Each step adds the candidate with the largest F(S + a); ties go to the
// lowest id.
AttributionResult GreedyMaximize(const SetFunction& objective,
                                 const GreedyOptions& options);

struct BruteForceResult {
  std::vector<int> subset;
  ScoreBreakdown value;
  std::uint64_t evaluated = 0;
};

inline constexpr std::uint64_t kDefaultBruteForceBudget = 500000;

std::uint64_t Binomial(int n, int k);

// Exact maximizer over all size-k subsets, ties to the lexicographically
// smallest. Refuses (kInvalidConfig) when C(m, k) exceeds the budget.
BruteForceResult BruteForceMaximize(
    const SetFunction& objective, int k,
    std::uint64_t budget = kDefaultBruteForceBudget);

struct PropertyReport {
  int trials = 0;
  int violations = 0;
  double max_violation_magnitude = 0.0;
  std::uint64_t seed = 0;

  double violation_rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(violations) / trials;
  }
};

inline constexpr double kViolationTolerance = 1e-6;

// Samples Sa within Sb and a outside Sb, counting
// F(Sb + a) - F(Sb) > F(Sa + a) - F(Sa) + tolerance.
PropertyReport CheckSubmodularity(const SetFunction& objective, int trials,
                                  std::uint64_t seed,
                                  double tolerance = kViolationTolerance);

// Samples S and a outside S, counting F(S + a) - F(S) < -tolerance.
PropertyReport CheckMonotonicity(const SetFunction& objective, int trials,
                                 std::uint64_t seed,
                                 double tolerance = kViolationTolerance);

// Same sampling, applied to the min-distance term alone:
// counts marginal(a | Sb) > marginal(a | Sa) + tolerance.
PropertyReport CheckMinDistanceMonotonicity(
    const ElementFeatures& features, int trials, std::uint64_t seed,
    double tolerance = kViolationTolerance);

struct ReplayReport {
  int steps = 0;
  int failures = 0;
  // Step indices whose choice was beaten by (or tied with a lower-id)
  // candidate on re-evaluation.
  std::vector<int> failed_steps;
};

// Re-evaluates every candidate at every recorded step and checks that the
// recorded choice was the argmax under the lowest-id tie-break.
ReplayReport ReplayGreedySteps(const SetFunction& objective,
                               const AttributionResult& result,
                               int threads = 1);

// F(S) = sum of per-element constants. Exactly modular.
class ModularFunction final : public SetFunction {
 public:
  explicit ModularFunction(std::vector<double> weights)
      : weights_(std::move(weights)) {}

  int size() const override { return static_cast<int>(weights_.size()); }
  ScoreBreakdown Evaluate(std::span<const int> subset) const override;

 private:
  std::vector<double> weights_;
};

}  // namespace smattr

#endif  // SMATTR_SEARCH_HPP_
