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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "namepop/counts.hpp"
#include "namepop/error.hpp"
#include "namepop/linkage.hpp"
#include "namepop/rng.hpp"

using namespace namepop;

namespace {

std::vector<NormalizedRecord> make_records(
    std::vector<std::pair<std::string, NameKey>> rows) {
  std::vector<NormalizedRecord> records;
  records.reserve(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    records.push_back({"r" + std::to_string(i), std::move(rows[i].first),
                       std::move(rows[i].second)});
  }
  return records;
}

// Persons with skewed name popularity and 1-3 records each; a few persons
// carry a second spelling so some true pairs can never be linked by name.
std::vector<NormalizedRecord> random_records(uint64_t seed, size_t persons) {
  static const char* kFirst[] = {"ann", "bo", "cy", "dee", "eli", "flo", "gus", "hal"};
  static const char* kMiddle[] = {"k", "l", "m", "n", "o"};
  static const char* kLast[] = {"reed", "shaw", "tate", "ulm", "veg", "wu"};
  SplitMix64 rng(seed);
  auto skew = [&](uint64_t bound) {
    return std::min(rng.next_below(bound), rng.next_below(bound));
  };
  std::vector<NormalizedRecord> records;
  for (size_t p = 0; p < persons; ++p) {
    NameKey name{kFirst[skew(8)], kMiddle[skew(5)], kLast[skew(6)]};
    uint64_t copies = 1 + rng.next_below(3);
    std::string person_id = "p" + std::to_string(p);
    for (uint64_t c = 0; c < copies; ++c) {
      NameKey spelled = name;
      // one record in twenty drifts to a different first name.
      if (rng.next_below(20) == 0) spelled.first = kFirst[skew(8)];
      records.push_back({"r" + std::to_string(records.size()), person_id, spelled});
    }
  }
  return records;
}

NameModel model_over(const std::vector<NormalizedRecord>& records) {
  PersonSet set;
  set.mode = NameMode::kTriple;
  for (const NormalizedRecord& record : records) {
    set.persons.push_back({record.record_id, record.name});
  }
  auto table = std::make_shared<CountTable>(CountTable::build(set));
  return NameModel::fit(ModelKind::kMleFull, table);
}

struct BruteResult {
  std::vector<std::pair<uint32_t, uint32_t>> pairs;
  uint64_t correct = 0;
  uint64_t total_true = 0;
};

BruteResult brute_force(const std::vector<NormalizedRecord>& records, const NameModel& model,
                        UniquenessStrategy strategy, uint64_t population, double threshold) {
  BruteResult out;
  for (uint32_t i = 0; i < records.size(); ++i) {
    for (uint32_t j = i + 1; j < records.size(); ++j) {
      bool same_person = records[i].person_id == records[j].person_id;
      if (same_person) ++out.total_true;
      if (records[i].name != records[j].name) continue;
      double lambda = model.estimate_count(records[i].name, population);
      if (uniqueness_probability(lambda, strategy) > threshold) {
        out.pairs.emplace_back(i, j);
        if (same_person) ++out.correct;
      }
    }
  }
  return out;
}

// The pair set link() commits to: every pair inside each group that clears
// the threshold.
std::vector<std::pair<uint32_t, uint32_t>> linked_pair_set(
    const std::vector<NormalizedRecord>& records, const NameModel& model,
    const LinkageConfig& config) {
  std::vector<std::pair<uint32_t, uint32_t>> pairs;
  for (const NameGroup& group : group_identical(records)) {
    if (group.record_indices.size() < 2) continue;
    if (uniqueness_probability(model, group.name, config) <= config.threshold) continue;
    for (size_t a = 0; a < group.record_indices.size(); ++a) {
      for (size_t b = a + 1; b < group.record_indices.size(); ++b) {
        uint32_t lo = std::min(group.record_indices[a], group.record_indices[b]);
        uint32_t hi = std::max(group.record_indices[a], group.record_indices[b]);
        pairs.emplace_back(lo, hi);
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace

TEST_CASE("uniqueness probabilities match the frozen values") {
  CHECK(uniqueness_probability(1.0, UniquenessStrategy::kPoissonConditional) ==
        doctest::Approx(0.58197670686932642).epsilon(1e-13));
  CHECK(uniqueness_probability(0.3, UniquenessStrategy::kPoissonConditional) ==
        doctest::Approx(0.85748877405302479).epsilon(1e-13));
  CHECK(uniqueness_probability(2.7, UniquenessStrategy::kPoissonConditional) ==
        doctest::Approx(0.1945282555542144).epsilon(1e-13));

  // A vanishing expected count means a certainly unique name.
  CHECK(uniqueness_probability(0.0, UniquenessStrategy::kPoissonConditional) == 1.0);
  CHECK(uniqueness_probability(-2.0, UniquenessStrategy::kPoissonConditional) == 1.0);
  CHECK(uniqueness_probability(700.0, UniquenessStrategy::kPoissonConditional) < 1e-300);
  // e^800 overflows, so the quotient collapses to an exact zero.
  CHECK(uniqueness_probability(800.0, UniquenessStrategy::kPoissonConditional) == 0.0);

  CHECK(uniqueness_probability(0.999, UniquenessStrategy::kDeterministicCount) == 1.0);
  CHECK(uniqueness_probability(1.0, UniquenessStrategy::kDeterministicCount) == 0.0);
  CHECK(uniqueness_probability(7.0, UniquenessStrategy::kDeterministicCount) == 0.0);

  CHECK_THROWS_AS(uniqueness_probability(std::nan(""), UniquenessStrategy::kPoissonConditional),
                  ComputeError);

  CHECK(uniqueness_strategy_from_string("poisson") == UniquenessStrategy::kPoissonConditional);
  CHECK(uniqueness_strategy_from_string("count") == UniquenessStrategy::kDeterministicCount);
  CHECK_THROWS_AS(uniqueness_strategy_from_string("maybe"), InputError);
  CHECK(to_string(UniquenessStrategy::kPoissonConditional) == "poisson");
  CHECK(to_string(UniquenessStrategy::kDeterministicCount) == "count");
}

TEST_CASE("grouping partitions records by identical name") {
  auto records = make_records({
      {"p1", {"ann", "b", "smith"}},
      {"p2", {"dan", "c", "jones"}},
      {"p1", {"ann", "b", "smith"}},
      {"p3", {"ann", "b", "smith"}},
      {"p4", {"zoe", "a", "adams"}},
  });
  std::vector<NameGroup> groups = group_identical(records);
  REQUIRE(groups.size() == 3);
  // Sorted by name: (ann, b, smith), (dan, c, jones), (zoe, a, adams).
  CHECK(groups[0].name == NameKey{"ann", "b", "smith"});
  CHECK(groups[0].record_indices == std::vector<uint32_t>{0, 2, 3});
  CHECK(groups[1].name == NameKey{"dan", "c", "jones"});
  CHECK(groups[1].record_indices == std::vector<uint32_t>{1});
  CHECK(groups[2].name == NameKey{"zoe", "a", "adams"});
  CHECK(groups[2].record_indices == std::vector<uint32_t>{4});
}

TEST_CASE("linking matches the exhaustive pairwise oracle") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    size_t persons = seed <= 18 ? 10 + 30 * static_cast<size_t>(seed) : 1000;
    std::vector<NormalizedRecord> records = random_records(seed, persons);
    if (records.size() > 2000) records.resize(2000);
    NameModel model = model_over(records);
    uint64_t population = records.size();

    for (UniquenessStrategy strategy :
         {UniquenessStrategy::kPoissonConditional, UniquenessStrategy::kDeterministicCount}) {
      for (double threshold : {0.0, 0.3, 0.5, 0.9, 1.0}) {
        LinkageConfig config{threshold, strategy, population};
        LinkageResult result = link(records, model, config);
        BruteResult brute = brute_force(records, model, strategy, population, threshold);

        CAPTURE(seed);
        CAPTURE(threshold);
        CAPTURE(to_string(strategy));
        CHECK(result.linked_pairs == brute.pairs.size());
        CHECK(result.correct_pairs == brute.correct);
        CHECK(result.total_true_pairs == brute.total_true);

        std::sort(brute.pairs.begin(), brute.pairs.end());
        CHECK(linked_pair_set(records, model, config) == brute.pairs);

        if (result.linked_pairs == 0) {
          CHECK(std::isnan(result.precision));
        } else {
          CHECK(result.precision == static_cast<double>(brute.correct) /
                                        static_cast<double>(brute.pairs.size()));
        }
        if (brute.total_true == 0) {
          CHECK(std::isnan(result.recall));
        } else {
          CHECK(result.recall ==
                static_cast<double>(brute.correct) / static_cast<double>(brute.total_true));
        }
      }
    }
  }
}

TEST_CASE("a sweep equals one link call per grid point") {
  std::vector<NormalizedRecord> records = random_records(77, 400);
  NameModel model = model_over(records);
  uint64_t population = records.size();
  std::vector<double> grid = parse_grid("0:1:0.05");

  for (UniquenessStrategy strategy :
       {UniquenessStrategy::kPoissonConditional, UniquenessStrategy::kDeterministicCount}) {
    std::vector<LinkageResult> swept = sweep(records, model, grid, strategy, population);
    REQUIRE(swept.size() == grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
      LinkageResult single = link(records, model, {grid[i], strategy, population});
      CHECK(swept[i].threshold == grid[i]);
      CHECK(swept[i].linked_pairs == single.linked_pairs);
      CHECK(swept[i].correct_pairs == single.correct_pairs);
      CHECK(swept[i].total_true_pairs == single.total_true_pairs);
      bool precision_match =
          (std::isnan(swept[i].precision) && std::isnan(single.precision)) ||
          swept[i].precision == single.precision;
      bool recall_match = (std::isnan(swept[i].recall) && std::isnan(single.recall)) ||
                          swept[i].recall == single.recall;
      CHECK(precision_match);
      CHECK(recall_match);
    }

    // Raising the threshold can only drop groups.
    for (size_t i = 1; i < swept.size(); ++i) {
      CHECK(swept[i].linked_pairs <= swept[i - 1].linked_pairs);
      if (!std::isnan(swept[i].recall) && !std::isnan(swept[i - 1].recall)) {
        CHECK(swept[i].recall <= swept[i - 1].recall);
      }
    }
  }

  std::vector<LinkageResult> again =
      sweep(records, model, grid, UniquenessStrategy::kPoissonConditional, population);
  std::vector<LinkageResult> first =
      sweep(records, model, grid, UniquenessStrategy::kPoissonConditional, population);
  for (size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i].linked_pairs == first[i].linked_pairs);
    CHECK(again[i].correct_pairs == first[i].correct_pairs);
  }
}

TEST_CASE("the threshold is strict") {
  auto records = make_records({
      {"p1", {"ann", "b", "smith"}},
      {"p1", {"ann", "b", "smith"}},
  });
  NameModel model = model_over(records);
  // lambda = 2 * P = 2; exactly at the uniqueness value nothing links.
  double u = uniqueness_probability(2.0, UniquenessStrategy::kPoissonConditional);
  LinkageResult at = link(records, model, {u, UniquenessStrategy::kPoissonConditional, 2});
  CHECK(at.linked_pairs == 0);
  CHECK(at.correct_pairs == 0);
  CHECK(std::isnan(at.precision));
  CHECK(at.recall == 0.0);
  CHECK(at.total_true_pairs == 1);

  double below = std::nextafter(u, 0.0);
  LinkageResult under =
      link(records, model, {below, UniquenessStrategy::kPoissonConditional, 2});
  CHECK(under.linked_pairs == 1);
  CHECK(under.correct_pairs == 1);
  CHECK(under.precision == 1.0);
  CHECK(under.recall == 1.0);
}

TEST_CASE("singleton groups and cross name persons shape the totals") {
  auto records = make_records({
      {"p1", {"ann", "b", "smith"}},
      {"p1", {"anna", "b", "smith"}},
      {"p2", {"dan", "c", "jones"}},
  });
  NameModel model = model_over(records);
  LinkageResult result = link(records, model, {0.0, UniquenessStrategy::kPoissonConditional, 3});
  // p1's two spellings sit in different groups: a true pair no identical-name
  // linker can recover.
  CHECK(result.linked_pairs == 0);
  CHECK(result.total_true_pairs == 1);
  CHECK(result.recall == 0.0);
}

TEST_CASE("invalid linkage inputs are rejected") {
  auto records = make_records({{"p1", {"ann", "b", "smith"}}});
  NameModel model = model_over(records);

  CHECK_THROWS_AS(link(records, model, {-0.1, UniquenessStrategy::kPoissonConditional, 5}),
                  ComputeError);
  CHECK_THROWS_AS(link(records, model, {1.5, UniquenessStrategy::kPoissonConditional, 5}),
                  ComputeError);
  CHECK_THROWS_AS(link(records, model, {0.5, UniquenessStrategy::kPoissonConditional, 0}),
                  ComputeError);
  CHECK_THROWS_AS(
      uniqueness_probability(model, NameKey{"ann", "b", "smith"},
                             {0.5, UniquenessStrategy::kPoissonConditional, 0}),
      ComputeError);

  std::vector<double> empty;
  CHECK_THROWS_AS(sweep(records, model, empty, UniquenessStrategy::kPoissonConditional, 5),
                  ComputeError);
  std::vector<double> unsorted = {0.5, 0.2};
  CHECK_THROWS_AS(sweep(records, model, unsorted, UniquenessStrategy::kPoissonConditional, 5),
                  ComputeError);
}

TEST_CASE("grids parse inclusively and reject malformed specs") {
  std::vector<double> quarters = parse_grid("0:1:0.25");
  REQUIRE(quarters.size() == 5);
  CHECK(quarters.front() == 0.0);
  CHECK(quarters.back() == 1.0);
  CHECK(quarters[2] == doctest::Approx(0.5).epsilon(1e-15));

  // 1.2 overshoots past the half-step slack, so the grid stops at 0.9.
  std::vector<double> thirds = parse_grid("0:1:0.3");
  REQUIRE(thirds.size() == 4);
  CHECK(thirds.back() == doctest::Approx(0.9).epsilon(1e-12));

  std::vector<double> single = parse_grid("0.5:0.5:0.1");
  REQUIRE(single.size() == 1);
  CHECK(single[0] == 0.5);

  CHECK_THROWS_AS(parse_grid("0:1"), InputError);
  CHECK_THROWS_AS(parse_grid("1:0:0.1"), InputError);
  CHECK_THROWS_AS(parse_grid("0:1:0"), InputError);
  CHECK_THROWS_AS(parse_grid("0:1:-0.5"), InputError);
  CHECK_THROWS_AS(parse_grid("a:b:c"), InputError);
}

TEST_CASE("sweep rows serialize to csv with na markers") {
  std::vector<LinkageResult> results;
  LinkageResult linked;
  linked.threshold = 0.5;
  linked.linked_pairs = 10;
  linked.correct_pairs = 9;
  linked.precision = 0.9;
  linked.recall = 0.75;
  linked.total_true_pairs = 12;
  LinkageResult nothing;
  nothing.threshold = 1.0;
  nothing.linked_pairs = 0;
  nothing.correct_pairs = 0;
  nothing.precision = std::nan("");
  nothing.recall = std::nan("");
  results = {linked, nothing};

  std::ostringstream out;
  write_sweep_csv(out, results);
  CHECK(out.str() ==
        "t,linked_pairs,correct_pairs,precision,recall\n"
        "0.5,10,9,0.9,0.75\n"
        "1,0,0,NA,NA\n");
}
