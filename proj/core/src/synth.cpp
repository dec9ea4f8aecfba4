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

#include "namepop/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <vector>

#include "namepop/csv.hpp"
#include "namepop/error.hpp"
#include "namepop/rng.hpp"

namespace namepop {

namespace {

// Inverse-CDF sampler over ranks 1..types with weight i^-exponent.
class ZipfSampler {
 public:
  explicit ZipfSampler(const ZipfComponent& component) {
    cdf_.reserve(component.types);
    double total = 0;
    for (uint64_t i = 1; i <= component.types; ++i) {
      total += std::pow(static_cast<double>(i), -component.exponent);
      cdf_.push_back(total);
    }
    for (double& value : cdf_) value /= total;
    cdf_.back() = 1.0;
  }

  // Rank in [0, types) for u in [0, 1).
  uint64_t sample(double u) const {
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<uint64_t>(it - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

std::string component_name(char prefix, uint64_t index) {
  return prefix + std::to_string(index + 1);
}

// Fixed pseudo-random map between component ranks, used for the coupled
// branch; stable across platforms.
uint64_t coupled_rank(uint64_t source_rank, uint64_t domain, uint64_t map_seed) {
  SplitMix64 mix(map_seed ^ (source_rank + 1) * 0x9E3779B97F4A7C15ull);
  return mix.next() % domain;
}

uint64_t parse_config_u64(const std::string& value, const std::string& key) {
  try {
    return parse_u64(value);
  } catch (const InputError&) {
    throw InputError("config key '" + key + "': not a count: '" + value + "'");
  }
}

double parse_config_double(const std::string& value, const std::string& key) {
  try {
    return parse_double(value);
  } catch (const InputError&) {
    throw InputError("config key '" + key + "': not a number: '" + value + "'");
  }
}

}  // namespace

void SynthConfig::validate() const {
  if (population < 1) throw InputError("population must be >= 1");
  if (first.types < 1 || middle.types < 1 || last.types < 1) {
    throw InputError("every component needs at least one type");
  }
  if (!(first.exponent > 0.0) || !(middle.exponent > 0.0) || !(last.exponent > 0.0)) {
    throw InputError("component exponents must be > 0");
  }
  if (!(coupling >= 0.0 && coupling <= 1.0)) throw InputError("coupling must be in [0, 1]");
  if (!(duplication_p > 0.0 && duplication_p <= 1.0)) {
    throw InputError("duplication_p must be in (0, 1]");
  }
}

SynthConfig SynthConfig::parse(std::istream& in) {
  SynthConfig config;
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::string trimmed = collapse_whitespace(line);
    if (trimmed.empty()) continue;
    size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw InputError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = collapse_whitespace(trimmed.substr(0, eq));
    std::string value = collapse_whitespace(trimmed.substr(eq + 1));
    if (key == "population") {
      config.population = parse_config_u64(value, key);
    } else if (key == "mode") {
      config.mode = name_mode_from_string(value);
    } else if (key == "first_types") {
      config.first.types = parse_config_u64(value, key);
    } else if (key == "first_exponent") {
      config.first.exponent = parse_config_double(value, key);
    } else if (key == "middle_types") {
      config.middle.types = parse_config_u64(value, key);
    } else if (key == "middle_exponent") {
      config.middle.exponent = parse_config_double(value, key);
    } else if (key == "last_types") {
      config.last.types = parse_config_u64(value, key);
    } else if (key == "last_exponent") {
      config.last.exponent = parse_config_double(value, key);
    } else if (key == "coupling") {
      config.coupling = parse_config_double(value, key);
    } else if (key == "duplication_p") {
      config.duplication_p = parse_config_double(value, key);
    } else if (key == "seed") {
      config.seed = parse_config_u64(value, key);
    } else {
      throw InputError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  config.validate();
  return config;
}

SynthConfig SynthConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  return parse(in);
}

PersonSet generate_population(const SynthConfig& config) {
  config.validate();
  ZipfSampler first(config.first);
  ZipfSampler last(config.last);
  ZipfSampler middle(config.mode == NameMode::kTriple ? config.middle
                                                      : ZipfComponent{1, 1.0});
  uint64_t map_seed_ml = mix64(config.seed ^ 0x8BADF00D5EEDull);
  uint64_t map_seed_fm = mix64(config.seed ^ 0xFACEFEED1234ull);

  PersonSet persons;
  persons.mode = config.mode;
  persons.persons.reserve(config.population);
  for (uint64_t i = 0; i < config.population; ++i) {
    SplitMix64 rng(derive_stream(config.seed, i));
    Person person;
    person.person_id = "p" + std::to_string(i + 1);

    uint64_t last_rank = last.sample(rng.next_double());
    person.name.last = component_name('l', last_rank);

    if (config.mode == NameMode::kTriple) {
      uint64_t middle_rank;
      if (rng.next_double() < config.coupling) {
        middle_rank = coupled_rank(last_rank, config.middle.types, map_seed_ml);
      } else {
        middle_rank = middle.sample(rng.next_double());
      }
      person.name.middle = component_name('m', middle_rank);

      uint64_t first_rank;
      if (rng.next_double() < config.coupling) {
        first_rank = coupled_rank(middle_rank, config.first.types, map_seed_fm);
      } else {
        first_rank = first.sample(rng.next_double());
      }
      person.name.first = component_name('f', first_rank);
    } else {
      uint64_t first_rank;
      if (rng.next_double() < config.coupling) {
        first_rank = coupled_rank(last_rank, config.first.types, map_seed_fm);
      } else {
        first_rank = first.sample(rng.next_double());
      }
      person.name.first = component_name('f', first_rank);
    }
    persons.persons.push_back(std::move(person));
  }
  return persons;
}

RecordSet generate_records(const PersonSet& persons, const SynthConfig& config) {
  config.validate();
  RecordSet set;
  set.records.reserve(persons.size());
  double log_q = config.duplication_p < 1.0 ? std::log1p(-config.duplication_p) : 0.0;
  for (uint64_t i = 0; i < persons.size(); ++i) {
    const Person& person = persons.persons[i];
    uint64_t k = 1;
    if (config.duplication_p < 1.0) {
      SplitMix64 rng(derive_stream(config.seed ^ 0xD6E8FEB86659FD93ull, i));
      double u = 1.0 - rng.next_double();  // (0, 1], keeps log(u) finite
      k = 1 + static_cast<uint64_t>(std::log(u) / log_q);
    }
    for (uint64_t j = 0; j < k; ++j) {
      RawRecord record;
      record.record_id = "r" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
      record.person_id = person.person_id;
      record.first = person.name.first;
      record.middle = person.name.middle;
      record.last = person.name.last;
      set.records.push_back(std::move(record));
    }
  }
  set.stats.rows_total = set.records.size();
  set.stats.rows_kept = set.records.size();
  return set;
}

}  // namespace namepop
