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
#include <map>
#include <memory>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "namepop/counts.hpp"
#include "namepop/lnre.hpp"
#include "namepop/records.hpp"

namespace namepop {

// The nine estimation models, by construction. The conventional short ids
// are the roman numerals I..IX in this order.
enum class ModelKind {
  kAlwaysOne,           // I: every name is assumed unique
  kMleFull,             // II: full-name MLE, zero for unseen names
  kIndependence,        // III: product of independent component MLEs
  kMleChain,            // IV: chain of MLE conditionals
  kLaplaceChain,        // V: chain of Laplace conditionals, alpha = 1
  kLaplaceScaledChain,  // VI: chain of Laplace conditionals, alpha = 1/N
  kGoodTuringChain,     // VII: chain of Good-Turing smoothed factors
  kKatzChain,           // VIII: chain of Katz mixed MLE/Good-Turing factors
  kPseudoLaplaceChain,  // IX: chain of pseudo-Laplace factors (a score)
};

std::string_view model_id(ModelKind kind);  // "I".."IX"
ModelKind model_from_id(std::string_view id);
std::span<const ModelKind> all_models();

// What happens to the adjusted count when N_{r+1} = 0.
enum class GtFallback {
  kKeepCount,    // return r unadjusted (default)
  kInterpolate,  // fill N_{r+1} by log-log interpolation between neighbors
  kStrictZero,   // honor the formula; the adjusted count becomes 0
};

GtFallback gt_fallback_from_string(std::string_view text);
std::string_view to_string(GtFallback fallback);

// How the unseen-type total E is read off a population fit.
enum class UnseenSemantics {
  kUnseenTypes,  // E = E[V(g.N)] - V_observed
  kHapaxes,      // E = E[V_1(g.N)]
};

UnseenSemantics unseen_semantics_from_string(std::string_view text);
std::string_view to_string(UnseenSemantics semantics);

struct SmoothingConfig {
  // Laplace and pseudo-Laplace additive constant.
  double alpha = 1.0;
  // Counts above the cutoff keep their MLE in Katz mixing.
  uint64_t katz_cutoff = 3;
  GtFallback gt_fallback = GtFallback::kKeepCount;
  UnseenSemantics unseen_semantics = UnseenSemantics::kUnseenTypes;
  // E is evaluated at growth_factor * N tokens.
  double growth_factor = 2.0;
  // When positive, use this E for every distribution instead of fitting.
  double e_override = 0.0;
  LnreFitConfig lnre;
};

// ---- Distribution-level smoothing operations ----

inline double prob_always_one(uint64_t population_size) {
  return 1.0 / static_cast<double>(population_size);
}

inline double prob_mle(uint64_t count, uint64_t total) {
  return static_cast<double>(count) / static_cast<double>(total);
}

// (C + alpha) / (total + alpha * vocab).
double laplace_prob(uint64_t count, uint64_t total, uint64_t vocab, double alpha);

// C / (total + alpha) when seen, alpha / (total + alpha) when unseen.
// Scores, not probabilities: they do not sum to one.
double pseudo_laplace_prob(uint64_t count, uint64_t total, double alpha);

// Good-Turing adjusted counts and probabilities for one distribution.
// Seen: C*(r)/N with C*(r) = (r+1) N_{r+1} / N_r (fallback per mode when
// N_{r+1} = 0). Unseen: the hapax mass N_1/N split evenly over unseen_types
// types. With kStrictZero and a gap-free spectrum the mass identity
// sum_r N_r C*(r)/N + N_1/N = 1 is exact.
class GtEstimator {
 public:
  GtEstimator() = default;
  GtEstimator(const FrequencySpectrum& spectrum, double unseen_types, GtFallback fallback);

  double adjusted_count(uint64_t r) const;
  double seen_prob(uint64_t count) const;
  double unseen_prob() const { return unseen_prob_; }
  // seen_prob for positive counts, unseen_prob otherwise.
  double prob(uint64_t count) const;

  double unseen_types() const { return unseen_types_; }
  uint64_t tokens() const { return spectrum_.tokens(); }
  const FrequencySpectrum& spectrum() const { return spectrum_; }

 private:
  FrequencySpectrum spectrum_;
  std::unordered_map<uint64_t, double> adjusted_;
  double unseen_types_ = 1.0;
  double unseen_prob_ = 0.0;
  GtFallback fallback_ = GtFallback::kKeepCount;
};

// MLE above the cutoff, Good-Turing at or below, unseen mass otherwise.
double katz_prob(uint64_t count, const GtEstimator& gt, uint64_t cutoff);

// Smoothed conditionals P(a | b). The Laplace and pseudo-Laplace forms apply
// their formula inside the context b; the Good-Turing and Katz forms divide
// the smoothed joint by the smoothed marginal and clamp into [0, 1], since
// per-context count-of-count tables are too sparse to smooth directly.
double laplace_conditional(uint64_t pair_count, uint64_t context_count, uint64_t vocab,
                           double alpha);
double pseudo_laplace_conditional(uint64_t pair_count, uint64_t context_count, double alpha);
double gt_conditional(uint64_t pair_count, uint64_t context_count, const GtEstimator& joint,
                      const GtEstimator& marginal);
double katz_conditional(uint64_t pair_count, uint64_t context_count, const GtEstimator& joint,
                        const GtEstimator& marginal, uint64_t cutoff);

// ---- Shared smoothing state ----

// Population fits and Good-Turing tables for every distribution the smoothed
// chains consume: pairs (first,middle) and (middle,last) plus the middle and
// last unigrams in triple mode, the full pair plus the last unigram in double
// mode. Built once and shared by models VII and VIII.
class SmoothingBundle {
 public:
  static std::shared_ptr<const SmoothingBundle> build(const CountTable& table,
                                                      const SmoothingConfig& config);
  // Rebuild from stored E values without refitting (model reload path).
  static std::shared_ptr<const SmoothingBundle> from_unseen_types(
      const CountTable& table, const SmoothingConfig& config,
      const std::map<Distribution, double>& unseen_types);

  static std::vector<Distribution> required(NameMode mode);

  const GtEstimator& gt(Distribution dist) const;
  double unseen_types(Distribution dist) const;
  // Fitted population model, absent when E was overridden or restored.
  const LnreModel* lnre(Distribution dist) const;
  const std::map<Distribution, double>& unseen_types_map() const { return unseen_types_; }

 private:
  std::map<Distribution, GtEstimator> gt_;
  std::map<Distribution, LnreModel> lnre_;
  std::map<Distribution, double> unseen_types_;
};

// ---- The model facade ----

class NameModel {
 public:
  NameModel() = default;

  // Builds the model state for `kind` over `table`. A bundle is built on
  // demand for the Good-Turing and Katz chains; pass a shared one to avoid
  // refitting when several models run over the same table.
  static NameModel fit(ModelKind kind, std::shared_ptr<const CountTable> table,
                       const SmoothingConfig& config = {},
                       std::shared_ptr<const SmoothingBundle> bundle = nullptr);

  // P(name) under the model; for kAlwaysOne this is 1/N relative to the
  // training total and for kPseudoLaplaceChain a score, not a probability.
  double probability(const NameKey& name) const;

  // Expected bearers among `population_size` people: population * P(name).
  // kAlwaysOne returns exactly 1.0; kMleFull computes (population * C) / N,
  // which is exact when the population equals the training total.
  double estimate_count(const NameKey& name, uint64_t population_size) const;

  ModelKind kind() const { return kind_; }
  NameMode mode() const { return table_->mode(); }
  const CountTable& table() const { return *table_; }
  std::shared_ptr<const CountTable> table_ptr() const { return table_; }
  const SmoothingConfig& smoothing() const { return config_; }
  std::shared_ptr<const SmoothingBundle> bundle() const { return bundle_; }
  // Laplace constant after model resolution: config.alpha for V and IX,
  // 1/N for VI.
  double resolved_alpha() const { return alpha_; }

 private:
  ModelKind kind_ = ModelKind::kMleFull;
  SmoothingConfig config_;
  std::shared_ptr<const CountTable> table_;
  std::shared_ptr<const SmoothingBundle> bundle_;
  double alpha_ = 1.0;
};

}  // namespace namepop
