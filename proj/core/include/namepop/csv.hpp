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

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "namepop/error.hpp"

namespace namepop {

// Splits one line into fields. For ',' the RFC 4180 quoting rules apply
// (double quotes, "" as escape); for '\t' fields are split verbatim since
// tabs never occur inside normalized values.
std::vector<std::string> split_delimited(std::string_view line, char delimiter);

// Quotes a field if it contains the delimiter, a quote, or a newline.
std::string csv_escape(std::string_view field, char delimiter);

// Shortest decimal string that round-trips to the same double. Output is a
// pure function of the bit pattern, so reruns emit byte-identical files.
std::string format_double(double value);

inline double parse_double(std::string_view text) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

inline uint64_t parse_u64(std::string_view text) {
  uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError("not a count: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace namepop
