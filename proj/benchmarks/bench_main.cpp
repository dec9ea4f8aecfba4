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

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "namepop/counts.hpp"
#include "namepop/estimators.hpp"
#include "namepop/linkage.hpp"
#include "namepop/synth.hpp"

namespace {

using namespace namepop;

SynthConfig bench_config(uint64_t persons) {
  SynthConfig config;
  config.population = persons;
  config.seed = 20260819;
  return config;
}

std::vector<NormalizedRecord> bench_records(const PersonSet& persons,
                                            const SynthConfig& config) {
  RecordSet raw = generate_records(persons, config);
  return normalize_records(raw, NormalizationRules{config.mode, {}});
}

void BM_CountTableBuild(benchmark::State& state) {
  PersonSet persons = generate_population(bench_config(static_cast<uint64_t>(state.range(0))));
  for (auto _ : state) {
    CountTable table = CountTable::build(persons);
    benchmark::DoNotOptimize(table.total());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(persons.size()));
}
BENCHMARK(BM_CountTableBuild)->Arg(10000)->Arg(100000);

void BM_ModelProbability(benchmark::State& state) {
  PersonSet persons = generate_population(bench_config(50000));
  auto table = std::make_shared<CountTable>(CountTable::build(persons));
  ModelKind kind = static_cast<ModelKind>(state.range(0));
  NameModel model = NameModel::fit(kind, table);
  size_t i = 0;
  for (auto _ : state) {
    const Person& p = persons.persons[i % persons.size()];
    benchmark::DoNotOptimize(model.probability(p.name));
    ++i;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ModelProbability)
    ->Arg(static_cast<int>(ModelKind::kMleFull))
    ->Arg(static_cast<int>(ModelKind::kMleChain))
    ->Arg(static_cast<int>(ModelKind::kLaplaceChain))
    ->Arg(static_cast<int>(ModelKind::kGoodTuringChain));

void BM_SweepThresholds(benchmark::State& state) {
  SynthConfig config = bench_config(static_cast<uint64_t>(state.range(0)));
  PersonSet persons = generate_population(config);
  std::vector<NormalizedRecord> records = bench_records(persons, config);
  auto table = std::make_shared<CountTable>(CountTable::build(persons));
  NameModel model = NameModel::fit(ModelKind::kMleFull, table);
  std::vector<double> grid = parse_grid("0:1:0.01");
  for (auto _ : state) {
    auto results = sweep(records, model, grid, UniquenessStrategy::kPoissonConditional,
                         records.size());
    benchmark::DoNotOptimize(results.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(records.size()));
}
BENCHMARK(BM_SweepThresholds)->Arg(10000)->Arg(50000);

}  // namespace

BENCHMARK_MAIN();
