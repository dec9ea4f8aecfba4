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

#include "namepop/counts.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "namepop/csv.hpp"
#include "namepop/error.hpp"
#include "namepop/rng.hpp"

namespace namepop {

namespace {

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::vector<const std::string*> sorted_keys(const CountMap& map) {
  std::vector<const std::string*> keys;
  keys.reserve(map.size());
  for (const auto& [key, count] : map) keys.push_back(&key);
  std::sort(keys.begin(), keys.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });
  return keys;
}

}  // namespace

std::string_view to_string(Distribution dist) {
  switch (dist) {
    case Distribution::kFull: return "full";
    case Distribution::kFirst: return "first";
    case Distribution::kMiddle: return "middle";
    case Distribution::kLast: return "last";
    case Distribution::kFirstMiddle: return "first_middle";
    case Distribution::kMiddleLast: return "middle_last";
  }
  return "unknown";
}

std::string CountTable::join_key(std::string_view a, std::string_view b) {
  std::string key;
  key.reserve(a.size() + b.size() + 1);
  key.append(a);
  key.push_back('\t');
  key.append(b);
  return key;
}

std::string CountTable::full_key(const NameKey& name, NameMode mode) {
  if (mode == NameMode::kDouble) return join_key(name.first, name.last);
  std::string key;
  key.reserve(name.first.size() + name.middle.size() + name.last.size() + 2);
  key.append(name.first);
  key.push_back('\t');
  key.append(name.middle);
  key.push_back('\t');
  key.append(name.last);
  return key;
}

NameKey CountTable::split_full_key(std::string_view key, NameMode mode) {
  NameKey name;
  size_t first_tab = key.find('\t');
  if (first_tab == std::string_view::npos) throw ComputeError("malformed full-name key");
  name.first = std::string(key.substr(0, first_tab));
  if (mode == NameMode::kDouble) {
    std::string_view rest = key.substr(first_tab + 1);
    if (rest.find('\t') != std::string_view::npos) {
      throw ComputeError("malformed full-name key");
    }
    name.last = std::string(rest);
    return name;
  }
  size_t second_tab = key.find('\t', first_tab + 1);
  if (second_tab == std::string_view::npos) throw ComputeError("malformed full-name key");
  std::string_view rest = key.substr(second_tab + 1);
  if (rest.find('\t') != std::string_view::npos) {
    throw ComputeError("malformed full-name key");
  }
  name.middle = std::string(key.substr(first_tab + 1, second_tab - first_tab - 1));
  name.last = std::string(rest);
  return name;
}

CountTable CountTable::build(const PersonSet& persons) {
  CountTable table;
  table.mode_ = persons.mode;
  table.total_ = persons.size();
  size_t n = persons.size();
  table.full_.reserve(n);
  table.first_.reserve(n / 4 + 16);
  table.last_.reserve(n / 4 + 16);
  if (persons.mode == NameMode::kTriple) {
    table.middle_.reserve(n / 4 + 16);
    table.first_middle_.reserve(n / 2 + 16);
    table.middle_last_.reserve(n / 2 + 16);
  }
  for (const Person& person : persons.persons) {
    const NameKey& name = person.name;
    ++table.full_[full_key(name, persons.mode)];
    ++table.first_[name.first];
    ++table.last_[name.last];
    if (persons.mode == NameMode::kTriple) {
      ++table.middle_[name.middle];
      ++table.first_middle_[join_key(name.first, name.middle)];
      ++table.middle_last_[join_key(name.middle, name.last)];
    }
  }
  return table;
}

CountTable CountTable::from_full_counts(const std::vector<std::pair<NameKey, uint64_t>>& counts,
                                        NameMode mode) {
  CountTable table;
  table.mode_ = mode;
  for (const auto& [name, count] : counts) {
    if (count == 0) continue;
    table.total_ += count;
    table.full_[full_key(name, mode)] += count;
    table.first_[name.first] += count;
    table.last_[name.last] += count;
    if (mode == NameMode::kTriple) {
      table.middle_[name.middle] += count;
      table.first_middle_[join_key(name.first, name.middle)] += count;
      table.middle_last_[join_key(name.middle, name.last)] += count;
    }
  }
  return table;
}

uint64_t CountTable::full(const NameKey& name) const {
  auto it = full_.find(full_key(name, mode_));
  return it == full_.end() ? 0 : it->second;
}

uint64_t CountTable::unigram(Distribution dist, std::string_view component) const {
  const CountMap& map = map_for(dist);
  auto it = map.find(std::string(component));
  return it == map.end() ? 0 : it->second;
}

uint64_t CountTable::pair(Distribution dist, std::string_view a, std::string_view b) const {
  const CountMap& map = map_for(dist);
  auto it = map.find(join_key(a, b));
  return it == map.end() ? 0 : it->second;
}

const CountMap& CountTable::map_for(Distribution dist) const {
  if (!has(dist)) {
    throw ComputeError("the " + std::string(to_string(dist)) +
                       " distribution is not tracked in double mode");
  }
  switch (dist) {
    case Distribution::kFull: return full_;
    case Distribution::kFirst: return first_;
    case Distribution::kMiddle: return middle_;
    case Distribution::kLast: return last_;
    case Distribution::kFirstMiddle: return first_middle_;
    case Distribution::kMiddleLast: return middle_last_;
  }
  throw ComputeError("invalid distribution");
}

bool CountTable::has(Distribution dist) const {
  if (mode_ == NameMode::kTriple) return true;
  return dist == Distribution::kFull || dist == Distribution::kFirst ||
         dist == Distribution::kLast;
}

FrequencySpectrum FrequencySpectrum::from_counts(const CountMap& counts) {
  std::map<uint64_t, uint64_t> classes;
  for (const auto& [key, count] : counts) {
    if (count > 0) ++classes[count];
  }
  return from_classes(std::move(classes));
}

FrequencySpectrum FrequencySpectrum::from_classes(std::map<uint64_t, uint64_t> classes) {
  FrequencySpectrum spectrum;
  spectrum.classes_ = std::move(classes);
  for (const auto& [r, n_r] : spectrum.classes_) {
    if (r == 0) throw ComputeError("spectrum class r = 0 is meaningless");
    spectrum.types_ += n_r;
    spectrum.tokens_ += r * n_r;
  }
  return spectrum;
}

uint64_t FrequencySpectrum::at(uint64_t r) const {
  auto it = classes_.find(r);
  return it == classes_.end() ? 0 : it->second;
}

uint64_t FrequencySpectrum::fingerprint() const {
  std::string bytes;
  bytes.reserve(classes_.size() * 16);
  for (const auto& [r, n_r] : classes_) {
    bytes += std::to_string(r);
    bytes.push_back(':');
    bytes += std::to_string(n_r);
    bytes.push_back(';');
  }
  return fnv1a64(bytes);
}

uint64_t FrequencySpectrum::max_class() const {
  return classes_.empty() ? 0 : classes_.rbegin()->first;
}

FrequencySpectrum spectrum(const CountTable& table, Distribution dist) {
  return FrequencySpectrum::from_counts(table.map_for(dist));
}

void write_counts_csv(std::ostream& out, const CountTable& table, Distribution dist) {
  out << "key,count\n";
  const CountMap& map = table.map_for(dist);
  for (const std::string* key : sorted_keys(map)) {
    out << csv_escape(*key, ',') << ',' << map.at(*key) << '\n';
  }
}

void write_spectrum_csv(std::ostream& out, const FrequencySpectrum& spectrum) {
  out << "r,N_r\n";
  for (const auto& [r, n_r] : spectrum.classes()) {
    out << r << ',' << n_r << '\n';
  }
}

FrequencySpectrum read_spectrum_csv(std::istream& in) {
  std::string line;
  if (!read_line(in, line) || line != "r,N_r") {
    throw InputError("expected spectrum header 'r,N_r'");
  }
  std::map<uint64_t, uint64_t> classes;
  uint64_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_delimited(line, ',');
    if (fields.size() != 2) {
      throw InputError("spectrum line " + std::to_string(line_no) + ": expected 'r,n_r'");
    }
    uint64_t r = parse_u64(fields[0]);
    uint64_t n_r = parse_u64(fields[1]);
    if (r == 0) throw InputError("spectrum line " + std::to_string(line_no) + ": r must be >= 1");
    if (n_r > 0) classes[r] += n_r;
  }
  return FrequencySpectrum::from_classes(std::move(classes));
}

void write_full_counts_tsv(std::ostream& out, const CountTable& table) {
  out << "first\tmiddle\tlast\tcount\n";
  const CountMap& map = table.map_for(Distribution::kFull);
  for (const std::string* key : sorted_keys(map)) {
    if (table.mode() == NameMode::kDouble) {
      size_t tab = key->find('\t');
      out << key->substr(0, tab) << "\t\t" << key->substr(tab + 1);
    } else {
      out << *key;
    }
    out << '\t' << map.at(*key) << '\n';
  }
}

std::vector<std::pair<NameKey, uint64_t>> read_full_counts_tsv(std::istream& in, NameMode mode) {
  std::string line;
  if (!read_line(in, line) || line != "first\tmiddle\tlast\tcount") {
    throw InputError("expected counts header 'first\\tmiddle\\tlast\\tcount'");
  }
  std::vector<std::pair<NameKey, uint64_t>> counts;
  uint64_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_delimited(line, '\t');
    if (fields.size() != 4) {
      throw InputError("counts line " + std::to_string(line_no) + ": expected 4 fields");
    }
    NameKey name;
    name.first = std::move(fields[0]);
    name.middle = mode == NameMode::kTriple ? std::move(fields[1]) : std::string();
    name.last = std::move(fields[2]);
    counts.emplace_back(std::move(name), parse_u64(fields[3]));
  }
  return counts;
}

}  // namespace namepop
