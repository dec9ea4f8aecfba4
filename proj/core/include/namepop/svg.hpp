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

#include <ostream>
#include <string>
#include <vector>

namespace namepop {

// Minimal deterministic line-chart writer. Identical inputs produce
// byte-identical SVG documents; points with non-finite coordinates break the
// polyline instead of being drawn.
class LineChart {
 public:
  LineChart(std::string title, std::string x_label, std::string y_label);

  // Series are drawn in insertion order; colors cycle through a fixed palette.
  void add_series(std::string name, std::vector<std::pair<double, double>> points);
  // Plot the x axis on a log10 scale (all finite x must be positive).
  void set_log_x(bool log_x) { log_x_ = log_x; }

  void render(std::ostream& out) const;
  void save(const std::string& path) const;

 private:
  struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
  };

  std::string title_;
  std::string x_label_;
  std::string y_label_;
  std::vector<Series> series_;
  bool log_x_ = false;
};

}  // namespace namepop
