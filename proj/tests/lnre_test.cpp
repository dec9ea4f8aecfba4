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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <vector>

#include "namepop/counts.hpp"
#include "namepop/error.hpp"
#include "namepop/lnre.hpp"
#include "namepop/rng.hpp"

using namespace namepop;

namespace {

LnreModel reference_model(const FzmParams& params) {
  return LnreModel(params, 0.0, 0.0, 0.0, 15, true);
}

// Draws `tokens` samples from the discretized population: type i of S gets
// the probability whose upper tail type count G(p) = (c/a)(p^-a - hi^-a)
// equals i + 1/2, then counts are histogrammed into a spectrum.
FrequencySpectrum sample_spectrum(const FzmParams& params, uint64_t tokens, uint64_t seed) {
  double a = params.shape;
  double c = fzm_norm(params);
  double s_real = c / a * (std::pow(params.lo, -a) - std::pow(params.hi, -a));
  auto s = static_cast<size_t>(std::llround(s_real));
  std::vector<double> cdf(s);
  double total = 0;
  for (size_t i = 0; i < s; ++i) {
    double tail = (a / c) * (static_cast<double>(i) + 0.5) + std::pow(params.hi, -a);
    total += std::pow(tail, -1.0 / a);
    cdf[i] = total;
  }
  SplitMix64 rng(seed);
  std::vector<uint64_t> counts(s, 0);
  for (uint64_t t = 0; t < tokens; ++t) {
    double u = rng.next_double() * total;
    size_t idx = static_cast<size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (idx >= s) idx = s - 1;
    ++counts[idx];
  }
  std::map<uint64_t, uint64_t> classes;
  for (uint64_t count : counts) {
    if (count > 0) ++classes[count];
  }
  return FrequencySpectrum::from_classes(std::move(classes));
}

// Noise-free counterpart of sample_spectrum: classes 1..15 carry the rounded
// expectations, and the remainder is packed into two adjacent tail classes
// that restore the exact expected type and token totals.
FrequencySpectrum idealized_spectrum(const FzmParams& params, uint64_t tokens) {
  LnreModel model = reference_model(params);
  double n = static_cast<double>(tokens);
  std::map<uint64_t, uint64_t> classes;
  uint64_t head_types = 0;
  uint64_t head_tokens = 0;
  for (uint64_t m = 1; m <= 15; ++m) {
    auto n_m = static_cast<uint64_t>(std::llround(model.expected_class(n, m)));
    classes[m] = n_m;
    head_types += n_m;
    head_tokens += m * n_m;
  }
  auto total_types = static_cast<uint64_t>(std::llround(model.expected_types(n)));
  uint64_t rest_types = total_types - head_types;
  uint64_t rest_tokens = tokens - head_tokens;
  uint64_t base = rest_tokens / rest_types;
  uint64_t leftover = rest_tokens - base * rest_types;
  classes[base] += rest_types - leftover;
  if (leftover > 0) classes[base + 1] += leftover;
  return FrequencySpectrum::from_classes(std::move(classes));
}

FrequencySpectrum small_spectrum() {
  return FrequencySpectrum::from_classes({{1, 5}, {2, 3}, {7, 2}});
}

}  // namespace

TEST_CASE("normalization constant and population size match quadrature") {
  FzmParams a{0.4, 1e-6, 0.01};
  CHECK(fzm_norm(a) == doctest::Approx(9.547367911019572).epsilon(1e-12));
  CHECK(reference_model(a).population_types() ==
        doctest::Approx(5844.8764304822004).epsilon(1e-12));

  FzmParams b{0.72, 1e-7, 0.05};
  CHECK(reference_model(b).population_types() ==
        doctest::Approx(101213.64911465856).epsilon(1e-12));
}

TEST_CASE("expected type and class counts match quadrature of the defining integrals") {
  LnreModel a = reference_model({0.4, 1e-6, 0.01});
  CHECK(a.expected_types(1e3) == doctest::Approx(408.74944721917186).epsilon(1e-10));
  CHECK(a.expected_types(1e4) == doctest::Approx(1224.5640325156149).epsilon(1e-10));
  CHECK(a.expected_types(1e5) == doctest::Approx(3011.5119739219849).epsilon(1e-10));
  CHECK(a.expected_class(1e4, 1) == doctest::Approx(526.20303895146306).epsilon(1e-10));
  CHECK(a.expected_class(1e4, 2) == doctest::Approx(169.7325516761294).epsilon(1e-10));
  CHECK(a.expected_class(1e4, 5) == doctest::Approx(42.383836084447984).epsilon(1e-10));

  LnreModel b = reference_model({0.72, 1e-7, 0.05});
  CHECK(b.expected_types(5e4) == doctest::Approx(5868.6374394657089).epsilon(1e-10));
  CHECK(b.expected_class(5e4, 1) == doctest::Approx(3867.6763281886421).epsilon(1e-10));
  CHECK(b.expected_class(5e4, 3) == doctest::Approx(308.68184007347727).epsilon(1e-10));
}

TEST_CASE("expected counts satisfy the internal identities") {
  LnreModel model = reference_model({0.4, 1e-6, 0.01});

  // Summing the class expectations recovers the type expectation, and the
  // count-weighted sum recovers the token total.
  double class_sum = 0;
  double token_sum = 0;
  for (uint64_t m = 1; m <= 500; ++m) {
    double v_m = model.expected_class(1e4, m);
    CHECK(v_m >= 0.0);
    class_sum += v_m;
    token_sum += static_cast<double>(m) * v_m;
  }
  CHECK(class_sum == doctest::Approx(model.expected_types(1e4)).epsilon(1e-10));
  CHECK(token_sum == doctest::Approx(1e4).epsilon(1e-10));

  double s = model.population_types();
  double previous = 0;
  for (double n : {10.0, 100.0, 1e3, 1e4, 1e5, 1e6, 1e7}) {
    double v = model.expected_types(n);
    CHECK(v > previous);
    CHECK(v < s);
    previous = v;
  }
  CHECK(model.expected_types(1e12) == doctest::Approx(s).epsilon(1e-6));
  CHECK(model.expected_types(0.0) == 0.0);
  CHECK(model.expected_class(0.0, 1) == 0.0);
}

TEST_CASE("unfitted models and invalid parameters are rejected") {
  LnreModel blank;
  CHECK_FALSE(blank.fitted());
  CHECK_THROWS_AS(blank.expected_types(10.0), ComputeError);
  CHECK_THROWS_AS(blank.expected_class(10.0, 1), ComputeError);
  CHECK_THROWS_AS(blank.population_types(), ComputeError);

  CHECK_THROWS_AS(fzm_norm(FzmParams{0.0, 1e-6, 0.01}), ComputeError);
  CHECK_THROWS_AS(fzm_norm(FzmParams{1.0, 1e-6, 0.01}), ComputeError);
  CHECK_THROWS_AS(fzm_norm(FzmParams{0.5, 0.0, 0.01}), ComputeError);
  CHECK_THROWS_AS(fzm_norm(FzmParams{0.5, 0.02, 0.01}), ComputeError);

  LnreModel model = reference_model({0.4, 1e-6, 0.01});
  CHECK_THROWS_AS(model.expected_class(10.0, 0), ComputeError);
}

TEST_CASE("fit recovers the generating population from an exact expected spectrum") {
  // Noise-free inversion: the fitted statistics equal their expectations, so
  // the doubled-sample prediction has to land within optimizer error alone.
  FzmParams truth{0.4, 1e-6, 0.01};
  const uint64_t tokens = 100000;
  FrequencySpectrum spectrum = idealized_spectrum(truth, tokens);
  CHECK(spectrum.tokens() == tokens);

  LnreModel fitted = fit_lnre(spectrum);
  CHECK(fitted.converged());
  LnreModel reference = reference_model(truth);
  double predicted = fitted.expected_types(2.0 * static_cast<double>(tokens));
  double actual = reference.expected_types(2.0 * static_cast<double>(tokens));
  CHECK(std::abs(predicted - actual) / actual < 0.01);
}

TEST_CASE("fit recovers the generating population from a sampled spectrum") {
  FzmParams truth{0.4, 1e-6, 0.01};
  const uint64_t tokens = 100000;
  FrequencySpectrum spectrum = sample_spectrum(truth, tokens, 12);
  CHECK(spectrum.tokens() == tokens);

  LnreModel fitted = fit_lnre(spectrum);
  CHECK(fitted.fitted());
  CHECK(fitted.converged());
  CHECK(fitted.fitted_tokens() == static_cast<double>(tokens));
  CHECK(fitted.fitted_types() == static_cast<double>(spectrum.types()));
  CHECK(fitted.spectrum_fingerprint() == spectrum.fingerprint());
  CHECK(fitted.goodness_of_fit() >= 0.0);
  CHECK(fitted.goodness_of_fit() <= 1.0);

  LnreModel reference = reference_model(truth);
  double predicted = fitted.expected_types(2.0 * static_cast<double>(tokens));
  double actual = reference.expected_types(2.0 * static_cast<double>(tokens));
  CHECK(std::abs(predicted - actual) / actual < 0.02);

  // The fitted expectation also has to track the spectrum it consumed.
  double in_sample = fitted.expected_types(static_cast<double>(tokens));
  CHECK(std::abs(in_sample - static_cast<double>(spectrum.types())) /
            static_cast<double>(spectrum.types()) <
        0.02);
}

TEST_CASE("fit is deterministic") {
  FrequencySpectrum spectrum = sample_spectrum({0.5, 1e-5, 0.02}, 20000, 99);
  LnreModel first = fit_lnre(spectrum);
  LnreModel second = fit_lnre(spectrum);
  CHECK(first.params().shape == second.params().shape);
  CHECK(first.params().lo == second.params().lo);
  CHECK(first.params().hi == second.params().hi);
  CHECK(first.cost() == second.cost());
}

TEST_CASE("fit rejects spectra that cannot identify the parameters") {
  CHECK_THROWS_WITH_AS(fit_lnre(FrequencySpectrum::from_classes({})),
                       "cannot fit an empty spectrum", ComputeError);
  CHECK_THROWS_WITH_AS(
      fit_lnre(FrequencySpectrum::from_classes({{200, 50}})),
      "degenerate spectrum: a single frequency class cannot identify the three "
      "population parameters",
      ComputeError);
}

TEST_CASE("goodness of fit reflects cost and degrees of freedom") {
  FzmParams params{0.4, 1e-6, 0.01};
  LnreModel zero_cost(params, 1e4, 1e3, 0.0, 15, true);
  CHECK(zero_cost.goodness_of_fit() == 1.0);

  LnreModel low(params, 1e4, 1e3, 10.0, 15, true);
  LnreModel high(params, 1e4, 1e3, 30.0, 15, true);
  CHECK(low.goodness_of_fit() > high.goodness_of_fit());
  CHECK(high.goodness_of_fit() > 0.0);

  // classes - 2 degrees of freedom; two classes leave nothing to test.
  LnreModel no_df(params, 1e4, 1e3, 10.0, 2, true);
  CHECK(no_df.goodness_of_fit() == 0.0);
}

TEST_CASE("binomial interpolation reproduces the subsample expectations") {
  FrequencySpectrum spectrum = small_spectrum();
  CHECK(spectrum.tokens() == 25);

  CHECK(binomial_interpolate(spectrum, 10, 1) == doctest::Approx(3.7012736).epsilon(1e-12));
  CHECK(binomial_interpolate(spectrum, 10, 2) == doctest::Approx(1.0025472).epsilon(1e-12));
  CHECK(binomial_interpolate(spectrum, 10, 3) == doctest::Approx(0.580608).epsilon(1e-12));
  // only the r = 7 class reaches m = 4: 2 * C(7,4) 0.4^4 0.6^3.
  CHECK(binomial_interpolate(spectrum, 10, 4) == doctest::Approx(0.387072).epsilon(1e-12));
  CHECK(binomial_interpolate(spectrum, 10, 8) == 0.0);
  CHECK(binomial_interpolate_types(spectrum, 10) == doctest::Approx(5.8640128).epsilon(1e-12));

  // Subsampling everything returns the spectrum itself.
  CHECK(binomial_interpolate(spectrum, 25, 1) == 5.0);
  CHECK(binomial_interpolate(spectrum, 25, 7) == 2.0);
  CHECK(binomial_interpolate_types(spectrum, 25) == 10.0);

  CHECK(binomial_interpolate(spectrum, 0, 1) == 0.0);
  CHECK(binomial_interpolate_types(spectrum, 0) == 0.0);

  CHECK_THROWS_AS(binomial_interpolate(spectrum, 26, 1), ComputeError);
  CHECK_THROWS_AS(binomial_interpolate_types(spectrum, 26), ComputeError);
  CHECK_THROWS_AS(binomial_interpolate(spectrum, 10, 0), ComputeError);
}

TEST_CASE("binomial interpolation is internally consistent on random spectra") {
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    SplitMix64 rng(seed);
    std::map<uint64_t, uint64_t> classes;
    uint64_t class_count = 1 + rng.next_below(8);
    for (uint64_t i = 0; i < class_count; ++i) {
      classes[1 + rng.next_below(12)] = 1 + rng.next_below(20);
    }
    FrequencySpectrum spectrum = FrequencySpectrum::from_classes(std::move(classes));
    uint64_t subsample = 1 + rng.next_below(spectrum.tokens());

    double class_sum = 0;
    for (uint64_t m = 1; m <= spectrum.max_class(); ++m) {
      class_sum += binomial_interpolate(spectrum, subsample, m);
    }
    double types = binomial_interpolate_types(spectrum, subsample);
    CAPTURE(seed);
    CHECK(class_sum == doctest::Approx(types).epsilon(1e-10));
    CHECK(types <= static_cast<double>(spectrum.types()) + 1e-9);

    // More tokens can only reveal more types.
    uint64_t half = subsample / 2;
    if (half >= 1) {
      CHECK(binomial_interpolate_types(spectrum, half) <= types + 1e-12);
    }
  }
}

TEST_CASE("growth predictions floor unseen mass at zero") {
  LnreModel model = reference_model({0.4, 1e-6, 0.01});

  GrowthPrediction scarce = predict_growth(model, 1000, 100000);
  CHECK(scarce.target_tokens == 100000);
  CHECK(scarce.expected_types == model.expected_types(1e5));
  CHECK(scarce.expected_hapaxes == model.expected_class(1e5, 1));
  CHECK(scarce.expected_unseen ==
        doctest::Approx(model.expected_types(1e5) - 1000.0).epsilon(1e-12));

  GrowthPrediction saturated = predict_growth(model, 4000, 100000);
  CHECK(saturated.expected_unseen == 0.0);
}

TEST_CASE("growth table serializes to csv") {
  std::vector<GrowthPrediction> rows = {
      {1000, 408.75, 526.25, 10.5},
      {2000, 0.125, 3.0, 0.0},
  };
  std::ostringstream out;
  write_growth_csv(out, rows);
  CHECK(out.str() ==
        "target_N,expected_V,expected_V1,expected_unseen\n"
        "1000,408.75,526.25,10.5\n"
        "2000,0.125,3,0\n");
}
