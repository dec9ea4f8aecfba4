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

#include "namepop/evaluation.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "namepop/csv.hpp"
#include "namepop/error.hpp"

namespace namepop {

BucketSpec BucketSpec::defaults() {
  BucketSpec spec;
  spec.buckets = {{1, 1}, {2, 5}, {6, 20}, {21, 100}, {101, UINT64_MAX}};
  return spec;
}

void BucketSpec::validate() const {
  if (buckets.empty()) throw ComputeError("bucket spec must hold at least one bucket");
  uint64_t expected_lo = 1;
  for (const Bucket& bucket : buckets) {
    if (bucket.lo != expected_lo) {
      throw ComputeError("buckets must be contiguous from 1; got lo = " +
                         std::to_string(bucket.lo) + ", expected " +
                         std::to_string(expected_lo));
    }
    if (bucket.hi < bucket.lo) throw ComputeError("bucket hi must be >= lo");
    if (bucket.hi == UINT64_MAX) break;
    expected_lo = bucket.hi + 1;
  }
  if (buckets.back().hi != UINT64_MAX) {
    throw ComputeError("the last bucket must be open-ended to cover [1, inf)");
  }
}

size_t BucketSpec::bucket_of(uint64_t count) const {
  if (count < 1) throw ComputeError("bucket lookup requires count >= 1");
  for (size_t i = 0; i < buckets.size(); ++i) {
    if (count >= buckets[i].lo && count <= buckets[i].hi) return i;
  }
  throw ComputeError("count " + std::to_string(count) + " not covered by the bucket spec");
}

EvalReport rmse_by_bucket(const NameModel& model, const PersonSet& test, const BucketSpec& spec) {
  if (test.persons.empty()) throw ComputeError("cannot evaluate on an empty test set");
  if (test.mode != model.mode()) throw ComputeError("test set and model modes differ");
  spec.validate();

  CountTable test_counts = CountTable::build(test);
  uint64_t population = test.size();

  std::vector<double> sum_sq(spec.buckets.size(), 0.0);
  std::vector<uint64_t> n_names(spec.buckets.size(), 0);
  for (const auto& [key, count] : test_counts.map_for(Distribution::kFull)) {
    NameKey name = CountTable::split_full_key(key, test.mode);
    size_t bucket = spec.bucket_of(count);
    double error = model.estimate_count(name, population) - static_cast<double>(count);
    sum_sq[bucket] += error * error;
    ++n_names[bucket];
  }

  EvalReport report;
  report.kind = model.kind();
  report.population = population;
  report.buckets.reserve(spec.buckets.size());
  for (size_t i = 0; i < spec.buckets.size(); ++i) {
    BucketReport bucket;
    bucket.lo = spec.buckets[i].lo;
    bucket.hi = spec.buckets[i].hi;
    bucket.n_names = n_names[i];
    bucket.sigma = n_names[i] == 0 ? std::nan("")
                                   : std::sqrt(sum_sq[i] / static_cast<double>(n_names[i]));
    report.buckets.push_back(bucket);
  }
  return report;
}

std::vector<EvalReport> compare_models(std::span<const NameModel> models, const PersonSet& test,
                                       const BucketSpec& spec) {
  if (models.empty()) throw ComputeError("no models to compare");
  for (const NameModel& model : models) {
    if (model.mode() != models.front().mode()) {
      throw ComputeError("models in a comparison must share the name mode");
    }
  }
  std::vector<EvalReport> reports;
  reports.reserve(models.size());
  for (const NameModel& model : models) {
    reports.push_back(rmse_by_bucket(model, test, spec));
  }
  return reports;
}

void write_eval_csv(std::ostream& out, std::span<const EvalReport> reports) {
  out << "model,bucket_lo,bucket_hi,sigma,n_names\n";
  for (const EvalReport& report : reports) {
    for (const BucketReport& bucket : report.buckets) {
      out << model_id(report.kind) << ',' << bucket.lo << ',';
      if (bucket.hi == UINT64_MAX) {
        out << "inf";
      } else {
        out << bucket.hi;
      }
      out << ',';
      if (std::isnan(bucket.sigma)) {
        out << "NA";
      } else {
        out << format_double(bucket.sigma);
      }
      out << ',' << bucket.n_names << '\n';
    }
  }
}

std::string render_eval_table(std::span<const EvalReport> reports) {
  if (reports.empty()) return "";
  const std::vector<BucketReport>& buckets = reports.front().buckets;
  size_t n_buckets = buckets.size();

  std::vector<double> best(n_buckets, std::numeric_limits<double>::infinity());
  for (const EvalReport& report : reports) {
    for (size_t i = 0; i < n_buckets && i < report.buckets.size(); ++i) {
      double s = report.buckets[i].sigma;
      if (!std::isnan(s) && s < best[i]) best[i] = s;
    }
  }

  std::ostringstream out;
  out << std::left << std::setw(6) << "model";
  for (const BucketReport& bucket : buckets) {
    std::string label = std::to_string(bucket.lo);
    if (bucket.hi == UINT64_MAX) {
      label = ">" + std::to_string(bucket.lo - 1);
    } else if (bucket.hi != bucket.lo) {
      label += "-" + std::to_string(bucket.hi);
    }
    out << std::right << std::setw(12) << label;
  }
  out << '\n';
  for (const EvalReport& report : reports) {
    out << std::left << std::setw(6) << model_id(report.kind);
    for (size_t i = 0; i < report.buckets.size(); ++i) {
      const BucketReport& bucket = report.buckets[i];
      std::ostringstream cell;
      if (std::isnan(bucket.sigma)) {
        cell << "NA";
      } else {
        cell << std::fixed << std::setprecision(3) << bucket.sigma;
        if (bucket.sigma == best[i]) cell << '*';
      }
      out << std::right << std::setw(12) << cell.str();
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace namepop
