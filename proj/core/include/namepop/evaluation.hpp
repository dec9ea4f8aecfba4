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
#include <vector>

#include "namepop/estimators.hpp"

namespace namepop {

// Inclusive count range [lo, hi]; hi = UINT64_MAX marks an open-ended bucket.
struct Bucket {
  uint64_t lo = 1;
  uint64_t hi = UINT64_MAX;
};

// Ordered, disjoint, contiguous buckets covering [1, inf).
struct BucketSpec {
  std::vector<Bucket> buckets;

  // [1,1], [2,5], [6,20], [21,100], [101,inf).
  static BucketSpec defaults();
  void validate() const;
  size_t bucket_of(uint64_t count) const;
};

struct BucketReport {
  uint64_t lo = 0;
  uint64_t hi = 0;
  // Root-mean-square error over the unique names in this bucket; NaN when
  // the bucket holds no names (undefined, never a fake zero).
  double sigma = 0;
  uint64_t n_names = 0;
};

struct EvalReport {
  ModelKind kind = ModelKind::kMleFull;
  // |S|: the population the estimates were scaled to (the test set size).
  uint64_t population = 0;
  std::vector<BucketReport> buckets;
};

// For every unique name x in `test`, the error is |S| * P(x) - C(x) with
// C(x) the bearer count inside `test` and |S| = test.size(); sigma per
// bucket is the RMSE over the names whose C(x) falls in that bucket.
EvalReport rmse_by_bucket(const NameModel& model, const PersonSet& test,
                          const BucketSpec& spec = BucketSpec::defaults());

// One report per model, in the given order. All models must share the mode.
std::vector<EvalReport> compare_models(std::span<const NameModel> models, const PersonSet& test,
                                       const BucketSpec& spec = BucketSpec::defaults());

// eval CSV: header "model,bucket_lo,bucket_hi,sigma,n_names"; open-ended hi
// prints as "inf", undefined sigma as "NA".
void write_eval_csv(std::ostream& out, std::span<const EvalReport> reports);

// Aligned text table, one row per model, the best (lowest) sigma per bucket
// marked with '*'.
std::string render_eval_table(std::span<const EvalReport> reports);

}  // namespace namepop
