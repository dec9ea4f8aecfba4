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

#include "namepop/linkage.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "namepop/csv.hpp"
#include "namepop/error.hpp"

namespace namepop {

namespace {

uint64_t pairs_of(uint64_t q) { return q * (q - 1) / 2; }

// Pairs inside one group whose two records share a person_id.
uint64_t correct_pairs_in(std::span<const NormalizedRecord> records, const NameGroup& group) {
  std::unordered_map<std::string_view, uint64_t> by_person;
  for (uint32_t index : group.record_indices) {
    ++by_person[records[index].person_id];
  }
  uint64_t correct = 0;
  for (const auto& [person, count] : by_person) correct += pairs_of(count);
  return correct;
}

uint64_t true_pairs_total(std::span<const NormalizedRecord> records) {
  std::unordered_map<std::string_view, uint64_t> by_person;
  for (const NormalizedRecord& record : records) ++by_person[record.person_id];
  uint64_t total = 0;
  for (const auto& [person, count] : by_person) total += pairs_of(count);
  return total;
}

LinkageResult finish(double threshold, uint64_t linked, uint64_t correct, uint64_t total_true) {
  LinkageResult result;
  result.threshold = threshold;
  result.linked_pairs = linked;
  result.correct_pairs = correct;
  result.total_true_pairs = total_true;
  result.precision = linked == 0 ? std::nan("")
                                 : static_cast<double>(correct) / static_cast<double>(linked);
  result.recall = total_true == 0
                      ? std::nan("")
                      : static_cast<double>(correct) / static_cast<double>(total_true);
  return result;
}

struct ScoredGroup {
  double uniqueness = 0;
  uint64_t pairs = 0;
  uint64_t correct = 0;
};

std::vector<ScoredGroup> score_groups(std::span<const NormalizedRecord> records,
                                      const NameModel& model, UniquenessStrategy strategy,
                                      uint64_t population_size) {
  if (population_size < 1) throw ComputeError("linkage population size |S| is unset");
  std::vector<ScoredGroup> scored;
  for (const NameGroup& group : group_identical(records)) {
    if (group.record_indices.size() < 2) continue;
    ScoredGroup entry;
    double lambda = model.estimate_count(group.name, population_size);
    entry.uniqueness = uniqueness_probability(lambda, strategy);
    entry.pairs = pairs_of(group.record_indices.size());
    entry.correct = correct_pairs_in(records, group);
    scored.push_back(entry);
  }
  return scored;
}

}  // namespace

UniquenessStrategy uniqueness_strategy_from_string(std::string_view text) {
  if (text == "poisson") return UniquenessStrategy::kPoissonConditional;
  if (text == "count") return UniquenessStrategy::kDeterministicCount;
  throw InputError("unknown uniqueness strategy: '" + std::string(text) +
                   "' (expected poisson or count)");
}

std::string_view to_string(UniquenessStrategy strategy) {
  return strategy == UniquenessStrategy::kPoissonConditional ? "poisson" : "count";
}

std::vector<NameGroup> group_identical(std::span<const NormalizedRecord> records) {
  std::unordered_map<NameKey, std::vector<uint32_t>, NameKeyHash> groups;
  groups.reserve(records.size());
  for (uint32_t i = 0; i < records.size(); ++i) {
    groups[records[i].name].push_back(i);
  }
  std::vector<NameGroup> out;
  out.reserve(groups.size());
  for (auto& [name, indices] : groups) {
    out.push_back({name, std::move(indices)});
  }
  std::sort(out.begin(), out.end(),
            [](const NameGroup& a, const NameGroup& b) { return a.name < b.name; });
  return out;
}

double uniqueness_probability(double lambda, UniquenessStrategy strategy) {
  if (!std::isfinite(lambda)) throw ComputeError("uniqueness requires a finite lambda");
  if (strategy == UniquenessStrategy::kDeterministicCount) {
    return lambda < 1.0 ? 1.0 : 0.0;
  }
  if (lambda <= 0.0) return 1.0;
  // lambda e^-lambda / (1 - e^-lambda) = lambda / (e^lambda - 1).
  return lambda / std::expm1(lambda);
}

double uniqueness_probability(const NameModel& model, const NameKey& name,
                              const LinkageConfig& config) {
  if (config.population_size < 1) throw ComputeError("linkage population size |S| is unset");
  return uniqueness_probability(model.estimate_count(name, config.population_size),
                                config.strategy);
}

LinkageResult link(std::span<const NormalizedRecord> records, const NameModel& model,
                   const LinkageConfig& config) {
  if (!(config.threshold >= 0.0 && config.threshold <= 1.0)) {
    throw ComputeError("linkage threshold must be in [0, 1]");
  }
  uint64_t linked = 0;
  uint64_t correct = 0;
  for (const ScoredGroup& group :
       score_groups(records, model, config.strategy, config.population_size)) {
    if (group.uniqueness > config.threshold) {
      linked += group.pairs;
      correct += group.correct;
    }
  }
  return finish(config.threshold, linked, correct, true_pairs_total(records));
}

std::vector<LinkageResult> sweep(std::span<const NormalizedRecord> records,
                                 const NameModel& model, std::span<const double> t_grid,
                                 UniquenessStrategy strategy, uint64_t population_size) {
  if (t_grid.empty()) throw ComputeError("sweep requires a nonempty threshold grid");
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw ComputeError("sweep grid must be sorted ascending");
  }

  std::vector<ScoredGroup> scored = score_groups(records, model, strategy, population_size);
  std::sort(scored.begin(), scored.end(),
            [](const ScoredGroup& a, const ScoredGroup& b) { return a.uniqueness < b.uniqueness; });

  // Suffix sums: groups from index i onward are exactly those still linked
  // once the threshold rises past scored[i-1].uniqueness.
  std::vector<uint64_t> suffix_pairs(scored.size() + 1, 0);
  std::vector<uint64_t> suffix_correct(scored.size() + 1, 0);
  for (size_t i = scored.size(); i-- > 0;) {
    suffix_pairs[i] = suffix_pairs[i + 1] + scored[i].pairs;
    suffix_correct[i] = suffix_correct[i + 1] + scored[i].correct;
  }

  uint64_t total_true = true_pairs_total(records);
  std::vector<LinkageResult> results;
  results.reserve(t_grid.size());
  for (double t : t_grid) {
    auto first_linked = std::upper_bound(
        scored.begin(), scored.end(), t,
        [](double value, const ScoredGroup& group) { return value < group.uniqueness; });
    size_t index = static_cast<size_t>(first_linked - scored.begin());
    results.push_back(finish(t, suffix_pairs[index], suffix_correct[index], total_true));
  }
  return results;
}

std::vector<double> parse_grid(std::string_view text) {
  auto fields = split_delimited(text, ':');
  if (fields.size() != 3) {
    throw InputError("grid must be lo:hi:step, got '" + std::string(text) + "'");
  }
  double lo = parse_double(fields[0]);
  double hi = parse_double(fields[1]);
  double step = parse_double(fields[2]);
  if (!(step > 0.0) || hi < lo) throw InputError("grid requires hi >= lo and step > 0");
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    double t = lo + step * i;
    if (t > hi + step * 0.5) break;
    grid.push_back(std::min(t, hi));
  }
  return grid;
}

void write_sweep_csv(std::ostream& out, std::span<const LinkageResult> results) {
  out << "t,linked_pairs,correct_pairs,precision,recall\n";
  for (const LinkageResult& result : results) {
    out << format_double(result.threshold) << ',' << result.linked_pairs << ','
        << result.correct_pairs << ',';
    if (std::isnan(result.precision)) {
      out << "NA";
    } else {
      out << format_double(result.precision);
    }
    out << ',';
    if (std::isnan(result.recall)) {
      out << "NA";
    } else {
      out << format_double(result.recall);
    }
    out << '\n';
  }
}

}  // namespace namepop
