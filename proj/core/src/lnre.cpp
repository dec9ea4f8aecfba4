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

#include "namepop/lnre.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "namepop/csv.hpp"
#include "namepop/error.hpp"
#include "namepop/nelder_mead.hpp"
#include "namepop/special.hpp"

namespace namepop {

namespace {

void check_params(const FzmParams& p) {
  if (!(p.shape > 0.0 && p.shape < 1.0)) throw ComputeError("fzm shape must be in (0, 1)");
  if (!(p.lo > 0.0 && p.lo < p.hi)) throw ComputeError("fzm requires 0 < lo < hi");
}

// Transformed coordinates keep the simplex inside the valid region:
// shape = logistic(t0), lo = exp(t1), hi = lo * (1 + exp(t2)).
FzmParams decode(const std::vector<double>& t) {
  FzmParams p;
  p.shape = 1.0 / (1.0 + std::exp(-t[0]));
  p.lo = std::exp(t[1]);
  p.hi = p.lo * (1.0 + std::exp(t[2]));
  return p;
}

std::vector<double> encode(const FzmParams& p) {
  return {std::log(p.shape / (1.0 - p.shape)), std::log(p.lo), std::log(p.hi / p.lo - 1.0)};
}

}  // namespace

double fzm_norm(const FzmParams& params) {
  check_params(params);
  double e = 1.0 - params.shape;
  return e / (std::pow(params.hi, e) - std::pow(params.lo, e));
}

LnreModel::LnreModel(const FzmParams& params, double fitted_tokens, double fitted_types,
                     double cost, int spectrum_classes, bool converged,
                     uint64_t spectrum_fingerprint)
    : params_(params),
      norm_(fzm_norm(params)),
      fitted_tokens_(fitted_tokens),
      fitted_types_(fitted_types),
      cost_(cost),
      spectrum_classes_(spectrum_classes),
      spectrum_fingerprint_(spectrum_fingerprint),
      converged_(converged),
      fitted_(true) {}

double LnreModel::population_types() const {
  if (!fitted_) throw ComputeError("model is not fitted");
  double a = params_.shape;
  return norm_ / a * (std::pow(params_.lo, -a) - std::pow(params_.hi, -a));
}

// E[V(n)] = (c/shape) * [lo^-shape (1 - e^(-n lo)) - hi^-shape (1 - e^(-n hi))
//           + n^shape Gamma(1-shape) (Q(1-shape, n lo) - Q(1-shape, n hi))].
double LnreModel::expected_types(double n) const {
  if (!fitted_) throw ComputeError("model is not fitted");
  if (n <= 0.0) return 0.0;
  double a = params_.shape;
  double xlo = n * params_.lo;
  double xhi = n * params_.hi;
  double edge = std::pow(params_.lo, -a) * -std::expm1(-xlo) -
                std::pow(params_.hi, -a) * -std::expm1(-xhi);
  double tail = std::pow(n, a) * std::exp(std::lgamma(1.0 - a)) *
                (regularized_gamma_q(1.0 - a, xlo) - regularized_gamma_q(1.0 - a, xhi));
  return norm_ / a * (edge + tail);
}

// E[V_m(n)] = c * n^shape * Gamma(m-shape)/m! * (Q(m-shape, n lo) - Q(m-shape, n hi)).
double LnreModel::expected_class(double n, uint64_t m) const {
  if (!fitted_) throw ComputeError("model is not fitted");
  if (m == 0) throw ComputeError("spectrum class m must be >= 1");
  if (n <= 0.0) return 0.0;
  double a = params_.shape;
  double md = static_cast<double>(m);
  double xlo = n * params_.lo;
  double xhi = n * params_.hi;
  double coeff = std::exp(a * std::log(n) + std::lgamma(md - a) - std::lgamma(md + 1.0));
  return norm_ * coeff *
         (regularized_gamma_q(md - a, xlo) - regularized_gamma_q(md - a, xhi));
}

double LnreModel::goodness_of_fit() const {
  if (!fitted_) throw ComputeError("model is not fitted");
  // classes + 1 observations (spectrum classes and V) minus 3 parameters.
  int df = spectrum_classes_ - 2;
  if (df < 1) return 0.0;
  return regularized_gamma_q(0.5 * df, 0.5 * cost_);
}

LnreModel fit_lnre(const FrequencySpectrum& spectrum, const LnreFitConfig& config) {
  if (spectrum.tokens() == 0) throw ComputeError("cannot fit an empty spectrum");
  if (spectrum.classes().size() < 2) {
    throw ComputeError(
        "degenerate spectrum: a single frequency class cannot identify the three "
        "population parameters");
  }
  double n = static_cast<double>(spectrum.tokens());
  double v = static_cast<double>(spectrum.types());
  int classes = config.classes;

  auto cost = [&](const std::vector<double>& t) -> double {
    FzmParams p = decode(t);
    if (!(p.hi > p.lo) || !std::isfinite(p.lo) || !std::isfinite(p.hi)) return 1e300;
    LnreModel trial(p, n, v, 0, classes, false);
    double total = 0;
    for (int m = 1; m <= classes; ++m) {
      double expected = trial.expected_class(n, static_cast<uint64_t>(m));
      double observed = static_cast<double>(spectrum.at(static_cast<uint64_t>(m)));
      double diff = observed - expected;
      total += diff * diff / std::max(expected, 1.0);
    }
    double expected_v = trial.expected_types(n);
    double diff_v = v - expected_v;
    total += diff_v * diff_v / std::max(expected_v, 1.0);
    return std::isfinite(total) ? total : 1e300;
  };

  // shape from the hapax/dis ratio: E[V_2]/E[V_1] = (1 - shape) / 2.
  double ratio = spectrum.at(1) > 0
                     ? static_cast<double>(spectrum.at(2)) / static_cast<double>(spectrum.at(1))
                     : 0.25;
  double shape0 = std::clamp(1.0 - 2.0 * ratio, 0.05, 0.95);
  double hi0 = std::max(static_cast<double>(spectrum.max_class()) / n, 8.0 / n);
  FzmParams start1{shape0, 0.1 / n, hi0};
  FzmParams start2{0.35, 1.0 / n, std::max(0.1, 2.0 * hi0)};
  FzmParams start3{0.75, 0.01 / n, std::max(0.01, 1.5 * hi0)};

  NelderMeadOptions options;
  options.max_iterations = config.max_iterations;
  options.tolerance = config.tolerance;

  NelderMeadResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (const FzmParams& start : {start1, start2, start3}) {
    NelderMeadResult result = nelder_mead(cost, encode(start), options);
    if (result.value < best.value) best = result;
  }
  if (!std::isfinite(best.value) || best.value >= 1e300) {
    throw ComputeError("population fit failed: no finite cost reached");
  }
  return LnreModel(decode(best.point), n, v, best.value, classes, best.converged,
                   spectrum.fingerprint());
}

double binomial_interpolate(const FrequencySpectrum& spectrum, uint64_t subsample_tokens,
                            uint64_t m) {
  uint64_t total = spectrum.tokens();
  if (subsample_tokens > total) {
    throw ComputeError("subsample size exceeds the spectrum token total");
  }
  if (m == 0) throw ComputeError("spectrum class m must be >= 1");
  if (subsample_tokens == total) return static_cast<double>(spectrum.at(m));
  if (subsample_tokens == 0) return 0.0;
  double p = static_cast<double>(subsample_tokens) / static_cast<double>(total);
  double log_p = std::log(p);
  double log_q = std::log1p(-p);
  double md = static_cast<double>(m);
  double sum = 0;
  for (const auto& [r, n_r] : spectrum.classes()) {
    if (r < m) continue;
    double rd = static_cast<double>(r);
    double log_term = std::lgamma(rd + 1.0) - std::lgamma(md + 1.0) - std::lgamma(rd - md + 1.0) +
                      md * log_p + (rd - md) * log_q;
    sum += static_cast<double>(n_r) * std::exp(log_term);
  }
  return sum;
}

double binomial_interpolate_types(const FrequencySpectrum& spectrum, uint64_t subsample_tokens) {
  uint64_t total = spectrum.tokens();
  if (subsample_tokens > total) {
    throw ComputeError("subsample size exceeds the spectrum token total");
  }
  if (subsample_tokens == total) return static_cast<double>(spectrum.types());
  if (subsample_tokens == 0) return 0.0;
  double p = static_cast<double>(subsample_tokens) / static_cast<double>(total);
  double log_q = std::log1p(-p);
  double sum = 0;
  for (const auto& [r, n_r] : spectrum.classes()) {
    sum += static_cast<double>(n_r) * -std::expm1(static_cast<double>(r) * log_q);
  }
  return sum;
}

GrowthPrediction predict_growth(const LnreModel& model, uint64_t observed_types,
                                uint64_t target_tokens) {
  GrowthPrediction out;
  out.target_tokens = target_tokens;
  double n = static_cast<double>(target_tokens);
  out.expected_types = model.expected_types(n);
  out.expected_hapaxes = model.expected_class(n, 1);
  out.expected_unseen = std::max(out.expected_types - static_cast<double>(observed_types), 0.0);
  return out;
}

void write_growth_csv(std::ostream& out, std::span<const GrowthPrediction> rows) {
  out << "target_N,expected_V,expected_V1,expected_unseen\n";
  for (const GrowthPrediction& row : rows) {
    out << row.target_tokens << ',' << format_double(row.expected_types) << ','
        << format_double(row.expected_hapaxes) << ',' << format_double(row.expected_unseen)
        << '\n';
  }
}

}  // namespace namepop
