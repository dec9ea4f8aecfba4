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

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace namepop {

struct NelderMeadOptions {
  int max_iterations = 2000;
  // Stop when the simplex function values span less than this relative width.
  double tolerance = 1e-12;
  // Initial simplex edge along each coordinate.
  double step = 0.5;
};

struct NelderMeadResult {
  std::vector<double> point;
  double value = 0;
  int iterations = 0;
  bool converged = false;
};

// Downhill simplex minimization (Nelder and Mead 1965) with the standard
// coefficients: reflect 1, expand 2, contract 1/2, shrink 1/2. Fully
// deterministic for a given start point.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& cost,
                                    std::vector<double> start,
                                    const NelderMeadOptions& options = {}) {
  const size_t n = start.size();
  std::vector<std::vector<double>> simplex(n + 1, start);
  for (size_t i = 0; i < n; ++i) simplex[i + 1][i] += options.step;
  std::vector<double> values(n + 1);
  for (size_t i = 0; i <= n; ++i) values[i] = cost(simplex[i]);

  NelderMeadResult result;
  std::vector<double> centroid(n), reflected(n), candidate(n);
  int iteration = 0;
  for (; iteration < options.max_iterations; ++iteration) {
    std::vector<size_t> order(n + 1);
    for (size_t i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return values[a] < values[b]; });
    size_t best = order[0], worst = order[n], second_worst = order[n - 1];

    double span = std::fabs(values[worst] - values[best]);
    double scale = std::fabs(values[best]) + std::fabs(values[worst]) + options.tolerance;
    if (span <= options.tolerance * scale) {
      result.converged = true;
      break;
    }

    for (size_t j = 0; j < n; ++j) {
      double sum = 0;
      for (size_t i = 0; i <= n; ++i) {
        if (i != worst) sum += simplex[i][j];
      }
      centroid[j] = sum / static_cast<double>(n);
    }

    for (size_t j = 0; j < n; ++j) reflected[j] = centroid[j] + (centroid[j] - simplex[worst][j]);
    double reflected_value = cost(reflected);

    if (reflected_value < values[best]) {
      for (size_t j = 0; j < n; ++j) candidate[j] = centroid[j] + 2.0 * (centroid[j] - simplex[worst][j]);
      double expanded_value = cost(candidate);
      if (expanded_value < reflected_value) {
        simplex[worst] = candidate;
        values[worst] = expanded_value;
      } else {
        simplex[worst] = reflected;
        values[worst] = reflected_value;
      }
      continue;
    }
    if (reflected_value < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = reflected_value;
      continue;
    }
    for (size_t j = 0; j < n; ++j) candidate[j] = centroid[j] + 0.5 * (simplex[worst][j] - centroid[j]);
    double contracted_value = cost(candidate);
    if (contracted_value < values[worst]) {
      simplex[worst] = candidate;
      values[worst] = contracted_value;
      continue;
    }
    for (size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (size_t j = 0; j < n; ++j) {
        simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
      }
      values[i] = cost(simplex[i]);
    }
  }

  size_t best = 0;
  for (size_t i = 1; i <= n; ++i) {
    if (values[i] < values[best]) best = i;
  }
  result.point = simplex[best];
  result.value = values[best];
  result.iterations = iteration;
  return result;
}

}  // namespace namepop
