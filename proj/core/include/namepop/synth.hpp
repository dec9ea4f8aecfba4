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
#include <string>

#include "namepop/records.hpp"

namespace namepop {

// Rank-frequency law for one name component: weight(i) = i^-exponent for
// ranks i = 1..types. Exponents above 1 keep the sampled spectra in the
// many-rare-types regime the estimators target.
struct ZipfComponent {
  uint64_t types = 1000;
  double exponent = 1.1;
};

struct SynthConfig {
  uint64_t population = 100000;
  NameMode mode = NameMode::kTriple;
  ZipfComponent first{20000, 1.10};
  ZipfComponent middle{15000, 1.15};
  ZipfComponent last{50000, 1.05};
  // With probability `coupling` the middle name is a fixed function of the
  // last name and the first a fixed function of the middle (the chain
  // direction the conditional models factorize along); 0 = independent
  // components, 1 = fully deterministic dependency.
  double coupling = 0.5;
  // Records per person are geometric starting at 1 with this parameter;
  // 1.0 means exactly one record per person. Mean is 1/duplication_p.
  double duplication_p = 0.65;
  uint64_t seed = 1;

  void validate() const;
  // Config file: "key = value" lines, '#' comments. Keys: population, mode,
  // first_types, first_exponent, middle_types, middle_exponent, last_types,
  // last_exponent, coupling, duplication_p, seed.
  static SynthConfig parse(std::istream& in);
  static SynthConfig load(const std::string& path);
};

// Deterministic for a given config: person i is generated from an
// independent stream derived from (seed, i), so output does not depend on
// generation order or block size.
PersonSet generate_population(const SynthConfig& config);

// Emits k >= 1 records per person with fresh record ids ("r<i>_<j>");
// person_id is preserved as ground truth.
RecordSet generate_records(const PersonSet& persons, const SynthConfig& config);

}  // namespace namepop
