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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "namepop/rng.hpp"

namespace namepop {

// Names are either (first, middle, last) triples or (first, last) doubles.
// In double mode every middle field is stored and compared as "".
enum class NameMode { kTriple, kDouble };

NameMode name_mode_from_string(std::string_view text);
std::string_view to_string(NameMode mode);

struct RawRecord {
  std::string record_id;
  std::string person_id;
  std::string first;
  std::string middle;
  std::string last;
};

struct ParseStats {
  uint64_t rows_total = 0;
  uint64_t rows_kept = 0;
  uint64_t rows_skipped = 0;
  // First few skip reasons, each "line <n>: <why>".
  std::vector<std::string> issues;
};

struct RecordSet {
  std::vector<RawRecord> records;
  ParseStats stats;
};

// Input column layout. With a header row, columns are located by name; without
// one, by zero-based index. A column name or index of -1 marks the middle
// column absent (double mode).
struct FormatConfig {
  char delimiter = '\t';
  bool has_header = true;
  // strict: any malformed row aborts with InputError. Otherwise malformed
  // rows are counted in rows_skipped and parsing continues.
  bool strict = true;
  NameMode mode = NameMode::kTriple;
  std::string record_id_col = "record_id";
  std::string person_id_col = "person_id";
  std::string first_col = "first";
  std::string middle_col = "middle";
  std::string last_col = "last";
  int record_id_idx = 0;
  int person_id_idx = 1;
  int first_idx = 2;
  int middle_idx = 3;
  int last_idx = 4;
};

RecordSet parse_records(std::istream& in, const FormatConfig& config);
RecordSet parse_records_file(const std::string& path, const FormatConfig& config);

// Normalized name. Components are already case-folded and suffix-reduced, so
// equality is plain string equality.
struct NameKey {
  std::string first;
  std::string middle;
  std::string last;

  bool operator==(const NameKey&) const = default;
  auto operator<=>(const NameKey&) const = default;
};

struct NameKeyHash {
  size_t operator()(const NameKey& key) const {
    uint64_t h = fnv1a64(key.first);
    h = h * 0x100000001B3ull ^ fnv1a64(key.middle);
    h = h * 0x100000001B3ull ^ fnv1a64(key.last);
    return static_cast<size_t>(h);
  }
};

// One ordered rewrite: a name component ending in `suffix` has that ending
// replaced by `replacement`. Rules apply to middle and last components only;
// first names carry no inflectional endings worth unifying.
struct SuffixRule {
  std::string suffix;
  std::string replacement;
};

struct NormalizationRules {
  NameMode mode = NameMode::kTriple;
  std::vector<SuffixRule> rules;

  // Rule file: one rule per line, "suffix -> replacement" (or a U+2192
  // arrow); '#' starts a comment; blank lines are ignored.
  static NormalizationRules parse(std::istream& in, NameMode mode);
  static NormalizationRules load(const std::string& path, NameMode mode);
};

// Lowercases ASCII A-Z and Cyrillic U+0410..U+042F plus U+0401 in UTF-8
// input; all other bytes pass through unchanged.
std::string fold_case(std::string_view text);

// Trims ASCII whitespace at both ends and collapses internal runs to one ' '.
std::string collapse_whitespace(std::string_view text);

// collapse_whitespace + fold_case + (optionally) the first matching suffix
// rule. Idempotent for any rule list whose replacements are not themselves
// suffixes of other rules' patterns.
std::string normalize_component(std::string_view text, std::span<const SuffixRule> rules,
                                bool apply_suffix_rules);

NameKey normalize(const RawRecord& record, const NormalizationRules& rules);

struct NormalizedRecord {
  std::string record_id;
  std::string person_id;
  NameKey name;
};

std::vector<NormalizedRecord> normalize_records(const RecordSet& raw,
                                                const NormalizationRules& rules);

struct Person {
  std::string person_id;
  NameKey name;
};

struct PersonSet {
  NameMode mode = NameMode::kTriple;
  std::vector<Person> persons;
  // Persons whose records disagreed on the normalized name after majority
  // resolution (ties broken toward the lexicographically smallest name).
  uint64_t name_conflicts = 0;

  size_t size() const { return persons.size(); }
};

// Groups records by person_id and assigns each person one name by majority
// vote over that person's records. Output is sorted by person_id.
PersonSet dedupe_persons(std::span<const NormalizedRecord> records, NameMode mode);

// Seeded, order-independent split: persons are ranked by
// mix(hash(person_id), seed) and the first round(fraction * n) become the
// training half. The same (persons, fraction, seed) always yields the same
// split regardless of input order.
std::pair<PersonSet, PersonSet> split_train_test(const PersonSet& persons, double fraction,
                                                 uint64_t seed);

void write_persons_tsv(std::ostream& out, const PersonSet& persons);
PersonSet read_persons_tsv(std::istream& in, NameMode mode);

void write_records_tsv(std::ostream& out, std::span<const NormalizedRecord> records);
std::vector<NormalizedRecord> read_records_tsv(std::istream& in, NameMode mode);

}  // namespace namepop
