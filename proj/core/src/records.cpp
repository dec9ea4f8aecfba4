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

#include "namepop/records.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "namepop/csv.hpp"
#include "namepop/error.hpp"

namespace namepop {

namespace {

constexpr size_t kMaxIssues = 10;

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

void note_issue(ParseStats& stats, uint64_t line_no, const std::string& why, bool strict) {
  if (strict) throw InputError("line " + std::to_string(line_no) + ": " + why);
  ++stats.rows_skipped;
  if (stats.issues.size() < kMaxIssues) {
    stats.issues.push_back("line " + std::to_string(line_no) + ": " + why);
  }
}

int find_column(const std::vector<std::string>& header, const std::string& name) {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

NameMode name_mode_from_string(std::string_view text) {
  if (text == "triple") return NameMode::kTriple;
  if (text == "double") return NameMode::kDouble;
  throw InputError("unknown name mode: '" + std::string(text) + "' (expected triple or double)");
}

std::string_view to_string(NameMode mode) {
  return mode == NameMode::kTriple ? "triple" : "double";
}

RecordSet parse_records(std::istream& in, const FormatConfig& config) {
  RecordSet set;
  std::string line;
  uint64_t line_no = 0;

  int record_id_idx = config.record_id_idx;
  int person_id_idx = config.person_id_idx;
  int first_idx = config.first_idx;
  int middle_idx = config.mode == NameMode::kTriple ? config.middle_idx : -1;
  int last_idx = config.last_idx;

  if (config.has_header) {
    if (!read_line(in, line)) throw InputError("empty input, expected a header row");
    ++line_no;
    auto header = split_delimited(line, config.delimiter);
    record_id_idx = find_column(header, config.record_id_col);
    person_id_idx = find_column(header, config.person_id_col);
    first_idx = find_column(header, config.first_col);
    middle_idx = config.mode == NameMode::kTriple ? find_column(header, config.middle_col) : -1;
    last_idx = find_column(header, config.last_col);
    if (record_id_idx < 0) throw InputError("missing column '" + config.record_id_col + "'");
    if (person_id_idx < 0) throw InputError("missing column '" + config.person_id_col + "'");
    if (first_idx < 0) throw InputError("missing column '" + config.first_col + "'");
    if (config.mode == NameMode::kTriple && middle_idx < 0) {
      throw InputError("missing column '" + config.middle_col + "'");
    }
    if (last_idx < 0) throw InputError("missing column '" + config.last_col + "'");
  }

  int needed = std::max({record_id_idx, person_id_idx, first_idx, middle_idx, last_idx});

  while (read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ++set.stats.rows_total;
    auto fields = split_delimited(line, config.delimiter);
    if (static_cast<int>(fields.size()) <= needed) {
      note_issue(set.stats,
                 line_no,
                 "expected at least " + std::to_string(needed + 1) + " fields, got " +
                     std::to_string(fields.size()),
                 config.strict);
      continue;
    }
    RawRecord record;
    record.record_id = fields[static_cast<size_t>(record_id_idx)];
    record.person_id = fields[static_cast<size_t>(person_id_idx)];
    record.first = fields[static_cast<size_t>(first_idx)];
    if (middle_idx >= 0) record.middle = fields[static_cast<size_t>(middle_idx)];
    record.last = fields[static_cast<size_t>(last_idx)];
    if (record.person_id.empty()) {
      note_issue(set.stats, line_no, "empty person_id", config.strict);
      continue;
    }
    ++set.stats.rows_kept;
    set.records.push_back(std::move(record));
  }
  return set;
}

RecordSet parse_records_file(const std::string& path, const FormatConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_records(in, config);
}

NormalizationRules NormalizationRules::parse(std::istream& in, NameMode mode) {
  NormalizationRules rules;
  rules.mode = mode;
  std::string line;
  uint64_t line_no = 0;
  while (read_line(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::string trimmed = collapse_whitespace(line);
    if (trimmed.empty()) continue;
    size_t arrow = trimmed.find("->");
    size_t arrow_len = 2;
    if (arrow == std::string::npos) {
      arrow = trimmed.find("\xE2\x86\x92");  // U+2192
      arrow_len = 3;
    }
    if (arrow == std::string::npos) {
      throw InputError("rule line " + std::to_string(line_no) + ": expected 'suffix -> replacement'");
    }
    SuffixRule rule;
    rule.suffix = collapse_whitespace(trimmed.substr(0, arrow));
    rule.replacement = collapse_whitespace(trimmed.substr(arrow + arrow_len));
    if (rule.suffix.empty()) {
      throw InputError("rule line " + std::to_string(line_no) + ": empty suffix");
    }
    rules.rules.push_back(std::move(rule));
  }
  return rules;
}

NormalizationRules NormalizationRules::load(const std::string& path, NameMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open rules file '" + path + "'");
  return parse(in, mode);
}

std::string fold_case(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(c + 0x20));
      continue;
    }
    // Cyrillic uppercase in UTF-8: U+0410..U+042F is D0 90..D0 AF, and
    // U+0401 is D0 81. Lowercase adds 0x20 to the code point.
    if (c == 0xD0 && i + 1 < text.size()) {
      unsigned char d = static_cast<unsigned char>(text[i + 1]);
      if (d >= 0x90 && d <= 0x9F) {  // U+0410..U+041F -> U+0430..U+043F
        out.push_back(static_cast<char>(0xD0));
        out.push_back(static_cast<char>(d + 0x20));
        ++i;
        continue;
      }
      if (d >= 0xA0 && d <= 0xAF) {  // U+0420..U+042F -> U+0440..U+044F
        out.push_back(static_cast<char>(0xD1));
        out.push_back(static_cast<char>(d - 0x20));
        ++i;
        continue;
      }
      if (d == 0x81) {  // U+0401 -> U+0451
        out.push_back(static_cast<char>(0xD1));
        out.push_back(static_cast<char>(0x91));
        ++i;
        continue;
      }
    }
    out.push_back(static_cast<char>(c));
  }
  return out;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

std::string normalize_component(std::string_view text, std::span<const SuffixRule> rules,
                                bool apply_suffix_rules) {
  std::string out = fold_case(collapse_whitespace(text));
  if (!apply_suffix_rules) return out;
  for (const SuffixRule& rule : rules) {
    if (out.size() >= rule.suffix.size() && out.ends_with(rule.suffix)) {
      out.resize(out.size() - rule.suffix.size());
      out += rule.replacement;
      break;
    }
  }
  return out;
}

NameKey normalize(const RawRecord& record, const NormalizationRules& rules) {
  NameKey key;
  key.first = normalize_component(record.first, rules.rules, false);
  if (rules.mode == NameMode::kTriple) {
    key.middle = normalize_component(record.middle, rules.rules, true);
  }
  key.last = normalize_component(record.last, rules.rules, true);
  return key;
}

std::vector<NormalizedRecord> normalize_records(const RecordSet& raw,
                                                const NormalizationRules& rules) {
  std::vector<NormalizedRecord> out;
  out.reserve(raw.records.size());
  for (const RawRecord& record : raw.records) {
    out.push_back({record.record_id, record.person_id, normalize(record, rules)});
  }
  return out;
}

PersonSet dedupe_persons(std::span<const NormalizedRecord> records, NameMode mode) {
  // person_id -> (name -> multiplicity)
  std::unordered_map<std::string, std::map<NameKey, uint64_t>> by_person;
  for (const NormalizedRecord& record : records) {
    ++by_person[record.person_id][record.name];
  }

  PersonSet set;
  set.mode = mode;
  set.persons.reserve(by_person.size());
  for (auto& [person_id, names] : by_person) {
    const NameKey* best = nullptr;
    uint64_t best_count = 0;
    // std::map iteration is ordered, so ties resolve to the smallest name.
    for (const auto& [name, count] : names) {
      if (count > best_count) {
        best = &name;
        best_count = count;
      }
    }
    if (names.size() > 1) ++set.name_conflicts;
    set.persons.push_back({person_id, *best});
  }
  std::sort(set.persons.begin(), set.persons.end(),
            [](const Person& a, const Person& b) { return a.person_id < b.person_id; });
  return set;
}

std::pair<PersonSet, PersonSet> split_train_test(const PersonSet& persons, double fraction,
                                                 uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw InputError("split fraction must be in [0, 1], got " + format_double(fraction));
  }
  struct Ranked {
    uint64_t rank;
    const Person* person;
  };
  uint64_t salt = mix64(seed);
  std::vector<Ranked> ranked;
  ranked.reserve(persons.size());
  for (const Person& person : persons.persons) {
    ranked.push_back({mix64(fnv1a64(person.person_id) ^ salt), &person});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    return a.person->person_id < b.person->person_id;
  });

  size_t train_size = static_cast<size_t>(
      std::llround(fraction * static_cast<double>(persons.size())));
  train_size = std::min(train_size, persons.size());

  PersonSet train;
  PersonSet test;
  train.mode = persons.mode;
  test.mode = persons.mode;
  train.persons.reserve(train_size);
  test.persons.reserve(persons.size() - train_size);
  for (size_t i = 0; i < ranked.size(); ++i) {
    (i < train_size ? train : test).persons.push_back(*ranked[i].person);
  }
  auto by_id = [](const Person& a, const Person& b) { return a.person_id < b.person_id; };
  std::sort(train.persons.begin(), train.persons.end(), by_id);
  std::sort(test.persons.begin(), test.persons.end(), by_id);
  return {std::move(train), std::move(test)};
}

void write_persons_tsv(std::ostream& out, const PersonSet& persons) {
  out << "person_id\tfirst\tmiddle\tlast\n";
  for (const Person& person : persons.persons) {
    out << person.person_id << '\t' << person.name.first << '\t' << person.name.middle << '\t'
        << person.name.last << '\n';
  }
}

PersonSet read_persons_tsv(std::istream& in, NameMode mode) {
  PersonSet set;
  set.mode = mode;
  std::string line;
  if (!read_line(in, line) || line != "person_id\tfirst\tmiddle\tlast") {
    throw InputError("expected person table header 'person_id\\tfirst\\tmiddle\\tlast'");
  }
  uint64_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_delimited(line, '\t');
    if (fields.size() != 4) {
      throw InputError("person table line " + std::to_string(line_no) + ": expected 4 fields");
    }
    Person person;
    person.person_id = std::move(fields[0]);
    person.name.first = std::move(fields[1]);
    person.name.middle = mode == NameMode::kTriple ? std::move(fields[2]) : std::string();
    person.name.last = std::move(fields[3]);
    set.persons.push_back(std::move(person));
  }
  return set;
}

void write_records_tsv(std::ostream& out, std::span<const NormalizedRecord> records) {
  out << "record_id\tperson_id\tfirst\tmiddle\tlast\n";
  for (const NormalizedRecord& record : records) {
    out << record.record_id << '\t' << record.person_id << '\t' << record.name.first << '\t'
        << record.name.middle << '\t' << record.name.last << '\n';
  }
}

std::vector<NormalizedRecord> read_records_tsv(std::istream& in, NameMode mode) {
  std::vector<NormalizedRecord> records;
  std::string line;
  if (!read_line(in, line) || line != "record_id\tperson_id\tfirst\tmiddle\tlast") {
    throw InputError("expected record table header 'record_id\\tperson_id\\tfirst\\tmiddle\\tlast'");
  }
  uint64_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_delimited(line, '\t');
    if (fields.size() != 5) {
      throw InputError("record table line " + std::to_string(line_no) + ": expected 5 fields");
    }
    NormalizedRecord record;
    record.record_id = std::move(fields[0]);
    record.person_id = std::move(fields[1]);
    record.name.first = std::move(fields[2]);
    record.name.middle = mode == NameMode::kTriple ? std::move(fields[3]) : std::string();
    record.name.last = std::move(fields[4]);
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace namepop
