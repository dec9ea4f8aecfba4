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
#include <vector>

#include "namepop/counts.hpp"

namespace namepop {

// Finite Zipf-Mandelbrot population: type density g(p) = c * p^(-shape-1)
// on [lo, hi], 0 < shape < 1, 0 < lo < hi, with c chosen so that
// integral of p * g(p) over [lo, hi] equals 1.
struct FzmParams {
  double shape = 0.5;
  double lo = 1e-8;
  double hi = 0.01;
};

// Normalization constant c = (1 - shape) / (hi^(1-shape) - lo^(1-shape)).
double fzm_norm(const FzmParams& params);

class LnreModel {
 public:
  LnreModel() = default;
  LnreModel(const FzmParams& params, double fitted_tokens, double fitted_types, double cost,
            int spectrum_classes, bool converged, uint64_t spectrum_fingerprint = 0);

  // E[V(n)]: expected distinct types in a sample of n tokens.
  double expected_types(double n) const;
  // E[V_m(n)]: expected types occurring exactly m times in n tokens.
  double expected_class(double n, uint64_t m) const;
  // S: total types in the population (limit of expected_types).
  double population_types() const;

  const FzmParams& params() const { return params_; }
  double fitted_tokens() const { return fitted_tokens_; }
  double fitted_types() const { return fitted_types_; }
  // Chi-squared style discrepancy over the fitted spectrum classes.
  double cost() const { return cost_; }
  // Upper tail probability of a chi-squared with (classes - 2) degrees of
  // freedom at the fitted cost; near zero means the population does not
  // look finite Zipf-Mandelbrot.
  double goodness_of_fit() const;
  bool converged() const { return converged_; }
  bool fitted() const { return fitted_; }
  // Fingerprint of the spectrum the fit consumed.
  uint64_t spectrum_fingerprint() const { return spectrum_fingerprint_; }

 private:
  FzmParams params_;
  double norm_ = 0;
  double fitted_tokens_ = 0;
  double fitted_types_ = 0;
  double cost_ = 0;
  int spectrum_classes_ = 0;
  uint64_t spectrum_fingerprint_ = 0;
  bool converged_ = false;
  bool fitted_ = false;
};

struct LnreFitConfig {
  // Spectrum classes 1..classes entering the cost alongside the type total.
  int classes = 15;
  int max_iterations = 2000;
  double tolerance = 1e-12;
};

// Fits by minimizing sum over m of (N_m - E[V_m])^2 / max(E[V_m], 1) plus the
// matching term for V, using downhill simplex from three deterministic
// starts. Throws ComputeError for spectra with fewer than two frequency
// classes, where the three parameters are not identifiable.
LnreModel fit_lnre(const FrequencySpectrum& spectrum, const LnreFitConfig& config = {});

// E[V_m(n0)] for a subsample of n0 <= N tokens, computed exactly from the
// spectrum: sum_r N_r * Binom(r, m) p^m (1-p)^(r-m) with p = n0 / N.
double binomial_interpolate(const FrequencySpectrum& spectrum, uint64_t subsample_tokens,
                            uint64_t m);

// E[V(n0)] for a subsample: sum_r N_r * (1 - (1-p)^r).
double binomial_interpolate_types(const FrequencySpectrum& spectrum, uint64_t subsample_tokens);

struct GrowthPrediction {
  uint64_t target_tokens = 0;
  double expected_types = 0;
  double expected_hapaxes = 0;
  // expected_types minus the observed type count, floored at zero.
  double expected_unseen = 0;
};

GrowthPrediction predict_growth(const LnreModel& model, uint64_t observed_types,
                                uint64_t target_tokens);

// growth CSV: header "target_N,expected_V,expected_V1,expected_unseen".
void write_growth_csv(std::ostream& out, std::span<const GrowthPrediction> rows);

}  // namespace namepop
