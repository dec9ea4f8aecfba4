// Copyright 2026 The namepop Authors
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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "namepop/estimators.hpp"
#include "namepop/records.hpp"

namespace namepop {

// How "this name has a single bearer" is scored from lambda = |S| * P(x).
enum class UniquenessStrategy {
  // lambda / (e^lambda - 1): probability of exactly one bearer given at
  // least one under a Poisson occupancy model; 1 in the limit lambda -> 0.
  kPoissonConditional,
  // Indicator of |S| * P(x) < 1; yields stepped sweep curves.
  kDeterministicCount,
};

UniquenessStrategy uniqueness_strategy_from_string(std::string_view text);
std::string_view to_string(UniquenessStrategy strategy);

struct LinkageConfig {
  // Groups link when the uniqueness probability strictly exceeds this.
  double threshold = 0.5;
  UniquenessStrategy strategy = UniquenessStrategy::kPoissonConditional;
  // |S|; must be set to a positive value before linking.
  uint64_t population_size = 0;
};

struct LinkageResult {
  double threshold = 0;
  uint64_t linked_pairs = 0;
  uint64_t correct_pairs = 0;
  // correct / linked; NaN when nothing was linked.
  double precision = 0;
  // correct / total_true_pairs; NaN when the dataset has no true pairs.
  double recall = 0;
  uint64_t total_true_pairs = 0;
};

struct NameGroup {
  NameKey name;
  std::vector<uint32_t> record_indices;
};

// Partition of the records by normalized name, sorted by name.
std::vector<NameGroup> group_identical(std::span<const NormalizedRecord> records);

double uniqueness_probability(double lambda, UniquenessStrategy strategy);
double uniqueness_probability(const NameModel& model, const NameKey& name,
                              const LinkageConfig& config);

// Links every pair inside each name group whose uniqueness probability
// strictly exceeds config.threshold; a correct pair shares person_id.
LinkageResult link(std::span<const NormalizedRecord> records, const NameModel& model,
                   const LinkageConfig& config);

// One LinkageResult per threshold in ascending t_grid, computed in a single
// pass over the groups; equals an independent link() call at each t.
std::vector<LinkageResult> sweep(std::span<const NormalizedRecord> records,
                                 const NameModel& model, std::span<const double> t_grid,
                                 UniquenessStrategy strategy, uint64_t population_size);

// Ascending grid lo, lo+step, ..., up to hi inclusive (within half a step).
std::vector<double> parse_grid(std::string_view text);

// sweep CSV: header "t,linked_pairs,correct_pairs,precision,recall";
// undefined ratios print as "NA".
void write_sweep_csv(std::ostream& out, std::span<const LinkageResult> results);

}  // namespace namepop
