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

#include "namepop/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "namepop/error.hpp"

namespace namepop {

namespace {

constexpr std::array<ModelKind, 9> kAllModels = {
    ModelKind::kAlwaysOne,   ModelKind::kMleFull,
    ModelKind::kIndependence, ModelKind::kMleChain,
    ModelKind::kLaplaceChain, ModelKind::kLaplaceScaledChain,
    ModelKind::kGoodTuringChain, ModelKind::kKatzChain,
    ModelKind::kPseudoLaplaceChain,
};

constexpr std::array<std::string_view, 9> kModelIds = {"I",  "II",  "III", "IV", "V",
                                                       "VI", "VII", "VIII", "IX"};

void validate(const SmoothingConfig& config) {
  if (!(config.alpha > 0.0)) throw ComputeError("smoothing alpha must be > 0");
  if (config.katz_cutoff < 1) throw ComputeError("katz cutoff must be >= 1");
  if (!(config.growth_factor > 0.0)) throw ComputeError("growth factor must be > 0");
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

std::string_view model_id(ModelKind kind) {
  return kModelIds[static_cast<size_t>(kind)];
}

ModelKind model_from_id(std::string_view id) {
  for (size_t i = 0; i < kModelIds.size(); ++i) {
    if (kModelIds[i] == id) return kAllModels[i];
  }
  throw InputError("unknown model id: '" + std::string(id) + "' (expected I..IX)");
}

std::span<const ModelKind> all_models() { return kAllModels; }

GtFallback gt_fallback_from_string(std::string_view text) {
  if (text == "keep") return GtFallback::kKeepCount;
  if (text == "interpolate") return GtFallback::kInterpolate;
  if (text == "strict") return GtFallback::kStrictZero;
  throw InputError("unknown spectrum fallback: '" + std::string(text) +
                   "' (expected keep, interpolate or strict)");
}

std::string_view to_string(GtFallback fallback) {
  switch (fallback) {
    case GtFallback::kKeepCount: return "keep";
    case GtFallback::kInterpolate: return "interpolate";
    case GtFallback::kStrictZero: return "strict";
  }
  return "unknown";
}

UnseenSemantics unseen_semantics_from_string(std::string_view text) {
  if (text == "unseen") return UnseenSemantics::kUnseenTypes;
  if (text == "hapax") return UnseenSemantics::kHapaxes;
  throw InputError("unknown unseen semantics: '" + std::string(text) +
                   "' (expected unseen or hapax)");
}

std::string_view to_string(UnseenSemantics semantics) {
  return semantics == UnseenSemantics::kUnseenTypes ? "unseen" : "hapax";
}

double laplace_prob(uint64_t count, uint64_t total, uint64_t vocab, double alpha) {
  if (!(alpha > 0.0)) throw ComputeError("laplace alpha must be > 0");
  return (static_cast<double>(count) + alpha) /
         (static_cast<double>(total) + alpha * static_cast<double>(vocab));
}

double pseudo_laplace_prob(uint64_t count, uint64_t total, double alpha) {
  if (!(alpha > 0.0)) throw ComputeError("pseudo-laplace alpha must be > 0");
  double denom = static_cast<double>(total) + alpha;
  return count > 0 ? static_cast<double>(count) / denom : alpha / denom;
}

GtEstimator::GtEstimator(const FrequencySpectrum& spectrum, double unseen_types,
                         GtFallback fallback)
    : spectrum_(spectrum), unseen_types_(unseen_types), fallback_(fallback) {
  if (!(unseen_types > 0.0)) throw ComputeError("unseen type total E must be > 0");
  if (spectrum_.tokens() == 0) throw ComputeError("cannot smooth an empty spectrum");
  double n = static_cast<double>(spectrum_.tokens());
  for (const auto& [r, n_r] : spectrum_.classes()) {
    adjusted_.emplace(r, adjusted_count(r));
  }
  unseen_prob_ = static_cast<double>(spectrum_.at(1)) / n / unseen_types_;
}

double GtEstimator::adjusted_count(uint64_t r) const {
  if (r == 0) throw ComputeError("adjusted count requires r >= 1");
  uint64_t n_r = spectrum_.at(r);
  if (n_r == 0) throw ComputeError("adjusted count requires N_r > 0");
  uint64_t n_next = spectrum_.at(r + 1);
  double rd = static_cast<double>(r);
  if (n_next > 0) {
    return (rd + 1.0) * static_cast<double>(n_next) / static_cast<double>(n_r);
  }
  switch (fallback_) {
    case GtFallback::kKeepCount:
      return rd;
    case GtFallback::kStrictZero:
      return 0.0;
    case GtFallback::kInterpolate: {
      auto above = spectrum_.classes().upper_bound(r + 1);
      if (above == spectrum_.classes().end()) return rd;
      // Log-log interpolation of the missing class size between r and the
      // next populated class.
      double lr = std::log(rd);
      double ls = std::log(static_cast<double>(above->first));
      double ln_r = std::log(static_cast<double>(n_r));
      double ln_s = std::log(static_cast<double>(above->second));
      double filled =
          std::exp(ln_r + (ln_s - ln_r) * (std::log(rd + 1.0) - lr) / (ls - lr));
      return (rd + 1.0) * filled / static_cast<double>(n_r);
    }
  }
  throw ComputeError("invalid spectrum fallback");
}

double GtEstimator::seen_prob(uint64_t count) const {
  auto it = adjusted_.find(count);
  double adjusted = it != adjusted_.end() ? it->second : adjusted_count(count);
  return adjusted / static_cast<double>(spectrum_.tokens());
}

double GtEstimator::prob(uint64_t count) const {
  return count > 0 ? seen_prob(count) : unseen_prob_;
}

double katz_prob(uint64_t count, const GtEstimator& gt, uint64_t cutoff) {
  if (count > cutoff) {
    return static_cast<double>(count) / static_cast<double>(gt.tokens());
  }
  return gt.prob(count);
}

double laplace_conditional(uint64_t pair_count, uint64_t context_count, uint64_t vocab,
                           double alpha) {
  return laplace_prob(pair_count, context_count, vocab, alpha);
}

double pseudo_laplace_conditional(uint64_t pair_count, uint64_t context_count, double alpha) {
  return pseudo_laplace_prob(pair_count, context_count, alpha);
}

double gt_conditional(uint64_t pair_count, uint64_t context_count, const GtEstimator& joint,
                      const GtEstimator& marginal) {
  double denom = marginal.prob(context_count);
  if (!(denom > 0.0)) return 0.0;
  return clamp01(joint.prob(pair_count) / denom);
}

double katz_conditional(uint64_t pair_count, uint64_t context_count, const GtEstimator& joint,
                        const GtEstimator& marginal, uint64_t cutoff) {
  double denom = katz_prob(context_count, marginal, cutoff);
  if (!(denom > 0.0)) return 0.0;
  return clamp01(katz_prob(pair_count, joint, cutoff) / denom);
}

std::vector<Distribution> SmoothingBundle::required(NameMode mode) {
  if (mode == NameMode::kTriple) {
    return {Distribution::kFirstMiddle, Distribution::kMiddleLast, Distribution::kMiddle,
            Distribution::kLast};
  }
  return {Distribution::kFull, Distribution::kLast};
}

std::shared_ptr<const SmoothingBundle> SmoothingBundle::build(const CountTable& table,
                                                              const SmoothingConfig& config) {
  validate(config);
  auto bundle = std::make_shared<SmoothingBundle>();
  for (Distribution dist : required(table.mode())) {
    FrequencySpectrum spec = spectrum(table, dist);
    double e = config.e_override;
    if (e <= 0.0) {
      LnreModel fit;
      try {
        fit = fit_lnre(spec, config.lnre);
      } catch (const ComputeError& error) {
        throw ComputeError("population fit over the " + std::string(to_string(dist)) +
                           " distribution failed: " + error.what());
      }
      double target = config.growth_factor * static_cast<double>(spec.tokens());
      if (config.unseen_semantics == UnseenSemantics::kUnseenTypes) {
        e = fit.expected_types(target) - static_cast<double>(spec.types());
      } else {
        e = fit.expected_class(target, 1);
      }
      e = std::max(e, 1.0);
      bundle->lnre_.emplace(dist, fit);
    }
    bundle->unseen_types_.emplace(dist, e);
    bundle->gt_.emplace(dist, GtEstimator(spec, e, config.gt_fallback));
  }
  return bundle;
}

std::shared_ptr<const SmoothingBundle> SmoothingBundle::from_unseen_types(
    const CountTable& table, const SmoothingConfig& config,
    const std::map<Distribution, double>& unseen_types) {
  validate(config);
  auto bundle = std::make_shared<SmoothingBundle>();
  for (Distribution dist : required(table.mode())) {
    auto it = unseen_types.find(dist);
    if (it == unseen_types.end()) {
      throw ComputeError("missing unseen type total for the " + std::string(to_string(dist)) +
                         " distribution");
    }
    bundle->unseen_types_.emplace(dist, it->second);
    bundle->gt_.emplace(dist, GtEstimator(spectrum(table, dist), it->second, config.gt_fallback));
  }
  return bundle;
}

const GtEstimator& SmoothingBundle::gt(Distribution dist) const {
  auto it = gt_.find(dist);
  if (it == gt_.end()) {
    throw ComputeError("no smoothing state for the " + std::string(to_string(dist)) +
                       " distribution");
  }
  return it->second;
}

double SmoothingBundle::unseen_types(Distribution dist) const {
  auto it = unseen_types_.find(dist);
  if (it == unseen_types_.end()) {
    throw ComputeError("no unseen type total for the " + std::string(to_string(dist)) +
                       " distribution");
  }
  return it->second;
}

const LnreModel* SmoothingBundle::lnre(Distribution dist) const {
  auto it = lnre_.find(dist);
  return it == lnre_.end() ? nullptr : &it->second;
}

NameModel NameModel::fit(ModelKind kind, std::shared_ptr<const CountTable> table,
                         const SmoothingConfig& config,
                         std::shared_ptr<const SmoothingBundle> bundle) {
  if (!table) throw ComputeError("model requires a count table");
  if (table->total() == 0) throw ComputeError("model requires a nonempty count table");
  validate(config);
  NameModel model;
  model.kind_ = kind;
  model.config_ = config;
  model.table_ = std::move(table);
  model.alpha_ = kind == ModelKind::kLaplaceScaledChain
                     ? 1.0 / static_cast<double>(model.table_->total())
                     : config.alpha;
  if (kind == ModelKind::kGoodTuringChain || kind == ModelKind::kKatzChain) {
    model.bundle_ = bundle ? std::move(bundle) : SmoothingBundle::build(*model.table_, config);
  }
  return model;
}

double NameModel::probability(const NameKey& name) const {
  if (!table_) throw ComputeError("model is not fitted");
  const CountTable& t = *table_;
  uint64_t n = t.total();
  bool triple = t.mode() == NameMode::kTriple;

  switch (kind_) {
    case ModelKind::kAlwaysOne:
      return prob_always_one(n);

    case ModelKind::kMleFull:
      return prob_mle(t.full(name), n);

    case ModelKind::kIndependence: {
      double p = prob_mle(t.unigram(Distribution::kFirst, name.first), n) *
                 prob_mle(t.unigram(Distribution::kLast, name.last), n);
      if (triple) p *= prob_mle(t.unigram(Distribution::kMiddle, name.middle), n);
      return p;
    }

    case ModelKind::kMleChain: {
      if (triple) {
        uint64_t c_m = t.unigram(Distribution::kMiddle, name.middle);
        uint64_t c_l = t.unigram(Distribution::kLast, name.last);
        uint64_t c_fm = t.pair(Distribution::kFirstMiddle, name.first, name.middle);
        uint64_t c_ml = t.pair(Distribution::kMiddleLast, name.middle, name.last);
        if (c_fm == 0 || c_ml == 0 || c_l == 0) return 0.0;
        return prob_mle(c_fm, c_m) * prob_mle(c_ml, c_l) * prob_mle(c_l, n);
      }
      uint64_t c_l = t.unigram(Distribution::kLast, name.last);
      uint64_t c_fl = t.full(name);
      if (c_fl == 0 || c_l == 0) return 0.0;
      return prob_mle(c_fl, c_l) * prob_mle(c_l, n);
    }

    case ModelKind::kLaplaceChain:
    case ModelKind::kLaplaceScaledChain: {
      if (triple) {
        return laplace_conditional(t.pair(Distribution::kFirstMiddle, name.first, name.middle),
                                   t.unigram(Distribution::kMiddle, name.middle),
                                   t.vocab(Distribution::kFirst), alpha_) *
               laplace_conditional(t.pair(Distribution::kMiddleLast, name.middle, name.last),
                                   t.unigram(Distribution::kLast, name.last),
                                   t.vocab(Distribution::kMiddle), alpha_) *
               laplace_prob(t.unigram(Distribution::kLast, name.last), n,
                            t.vocab(Distribution::kLast), alpha_);
      }
      return laplace_conditional(t.full(name), t.unigram(Distribution::kLast, name.last),
                                 t.vocab(Distribution::kFirst), alpha_) *
             laplace_prob(t.unigram(Distribution::kLast, name.last), n,
                          t.vocab(Distribution::kLast), alpha_);
    }

    case ModelKind::kGoodTuringChain: {
      if (triple) {
        return gt_conditional(t.pair(Distribution::kFirstMiddle, name.first, name.middle),
                              t.unigram(Distribution::kMiddle, name.middle),
                              bundle_->gt(Distribution::kFirstMiddle),
                              bundle_->gt(Distribution::kMiddle)) *
               gt_conditional(t.pair(Distribution::kMiddleLast, name.middle, name.last),
                              t.unigram(Distribution::kLast, name.last),
                              bundle_->gt(Distribution::kMiddleLast),
                              bundle_->gt(Distribution::kLast)) *
               bundle_->gt(Distribution::kLast).prob(t.unigram(Distribution::kLast, name.last));
      }
      return gt_conditional(t.full(name), t.unigram(Distribution::kLast, name.last),
                            bundle_->gt(Distribution::kFull), bundle_->gt(Distribution::kLast)) *
             bundle_->gt(Distribution::kLast).prob(t.unigram(Distribution::kLast, name.last));
    }

    case ModelKind::kKatzChain: {
      uint64_t cutoff = config_.katz_cutoff;
      if (triple) {
        return katz_conditional(t.pair(Distribution::kFirstMiddle, name.first, name.middle),
                                t.unigram(Distribution::kMiddle, name.middle),
                                bundle_->gt(Distribution::kFirstMiddle),
                                bundle_->gt(Distribution::kMiddle), cutoff) *
               katz_conditional(t.pair(Distribution::kMiddleLast, name.middle, name.last),
                                t.unigram(Distribution::kLast, name.last),
                                bundle_->gt(Distribution::kMiddleLast),
                                bundle_->gt(Distribution::kLast), cutoff) *
               katz_prob(t.unigram(Distribution::kLast, name.last),
                         bundle_->gt(Distribution::kLast), cutoff);
      }
      return katz_conditional(t.full(name), t.unigram(Distribution::kLast, name.last),
                              bundle_->gt(Distribution::kFull), bundle_->gt(Distribution::kLast),
                              cutoff) *
             katz_prob(t.unigram(Distribution::kLast, name.last),
                       bundle_->gt(Distribution::kLast), cutoff);
    }

    case ModelKind::kPseudoLaplaceChain: {
      if (triple) {
        return pseudo_laplace_conditional(
                   t.pair(Distribution::kFirstMiddle, name.first, name.middle),
                   t.unigram(Distribution::kMiddle, name.middle), alpha_) *
               pseudo_laplace_conditional(t.pair(Distribution::kMiddleLast, name.middle, name.last),
                                          t.unigram(Distribution::kLast, name.last), alpha_) *
               pseudo_laplace_prob(t.unigram(Distribution::kLast, name.last), n, alpha_);
      }
      return pseudo_laplace_conditional(t.full(name), t.unigram(Distribution::kLast, name.last),
                                        alpha_) *
             pseudo_laplace_prob(t.unigram(Distribution::kLast, name.last), n, alpha_);
    }
  }
  throw ComputeError("invalid model kind");
}

double NameModel::estimate_count(const NameKey& name, uint64_t population_size) const {
  if (population_size < 1) throw ComputeError("population size must be >= 1");
  if (!table_) throw ComputeError("model is not fitted");
  if (kind_ == ModelKind::kAlwaysOne) return 1.0;
  if (kind_ == ModelKind::kMleFull) {
    // (population * C) / N keeps the estimate exact when population == N:
    // population * C is below 2^53 for any realistic table.
    return static_cast<double>(population_size) * static_cast<double>(table_->full(name)) /
           static_cast<double>(table_->total());
  }
  return static_cast<double>(population_size) * probability(name);
}

}  // namespace namepop
