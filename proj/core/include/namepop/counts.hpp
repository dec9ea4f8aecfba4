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
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "namepop/records.hpp"

namespace namepop {

// The count distributions a table can hold. Triple mode keeps kFull plus the
// three unigram and two adjacent pair distributions; double mode keeps kFull,
// kFirst and kLast (the full distribution already is the first/last pair).
enum class Distribution {
  kFull,
  kFirst,
  kMiddle,
  kLast,
  kFirstMiddle,
  kMiddleLast,
};

std::string_view to_string(Distribution dist);

using CountMap = std::unordered_map<std::string, uint64_t>;

// Token counts over one person set. Composite keys are components joined by
// '\t', which normalization guarantees never occurs inside a component.
class CountTable {
 public:
  static CountTable build(const PersonSet& persons);
  // Rebuilds a table (marginals included) from full-name counts alone.
  static CountTable from_full_counts(const std::vector<std::pair<NameKey, uint64_t>>& counts,
                                     NameMode mode);

  NameMode mode() const { return mode_; }
  // Token total N; every distribution in the table sums to this.
  uint64_t total() const { return total_; }

  uint64_t full(const NameKey& name) const;
  uint64_t unigram(Distribution dist, std::string_view component) const;
  uint64_t pair(Distribution dist, std::string_view a, std::string_view b) const;

  // Distinct keys |V| in one distribution.
  uint64_t vocab(Distribution dist) const { return map_for(dist).size(); }
  const CountMap& map_for(Distribution dist) const;
  bool has(Distribution dist) const;

  static std::string join_key(std::string_view a, std::string_view b);
  static std::string full_key(const NameKey& name, NameMode mode);
  static NameKey split_full_key(std::string_view key, NameMode mode);

 private:
  NameMode mode_ = NameMode::kTriple;
  uint64_t total_ = 0;
  CountMap full_;
  CountMap first_;
  CountMap middle_;
  CountMap last_;
  CountMap first_middle_;
  CountMap middle_last_;
};

// Frequency spectrum: N_r = number of types occurring exactly r times.
class FrequencySpectrum {
 public:
  FrequencySpectrum() = default;
  static FrequencySpectrum from_counts(const CountMap& counts);
  static FrequencySpectrum from_classes(std::map<uint64_t, uint64_t> classes);

  // N_r, zero for any r absent from the spectrum.
  uint64_t at(uint64_t r) const;
  // V = sum_r N_r.
  uint64_t types() const { return types_; }
  // N = sum_r r * N_r.
  uint64_t tokens() const { return tokens_; }
  uint64_t max_class() const;
  const std::map<uint64_t, uint64_t>& classes() const { return classes_; }
  bool empty() const { return classes_.empty(); }
  // Stable content hash over the (r, N_r) pairs.
  uint64_t fingerprint() const;

 private:
  std::map<uint64_t, uint64_t> classes_;
  uint64_t types_ = 0;
  uint64_t tokens_ = 0;
};

FrequencySpectrum spectrum(const CountTable& table, Distribution dist);

// counts export: header "key,count", keys sorted, composite keys tab-joined.
void write_counts_csv(std::ostream& out, const CountTable& table, Distribution dist);

// spectrum CSV: header "r,N_r", ascending r.
void write_spectrum_csv(std::ostream& out, const FrequencySpectrum& spectrum);
FrequencySpectrum read_spectrum_csv(std::istream& in);

// Full-name count sidecar: "first\tmiddle\tlast\tcount", keys sorted.
void write_full_counts_tsv(std::ostream& out, const CountTable& table);
std::vector<std::pair<NameKey, uint64_t>> read_full_counts_tsv(std::istream& in, NameMode mode);

}  // namespace namepop
