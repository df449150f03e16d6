// Copyright 2026 The priorsam Authors
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

#ifndef PRIORSAM_SAMPLING_HPP
#define PRIORSAM_SAMPLING_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "priorsam/engine.hpp"
#include "priorsam/errors.hpp"
#include "priorsam/model.hpp"
#include "priorsam/types.hpp"

namespace priorsam {

inline constexpr std::uint64_t kDefaultMaxCopies = 50'000'000;

/// log(sum(exp(values))) with the max subtracted first; -inf entries
/// contribute zero. Throws TotalUnderflowError when every entry is -inf.
/// The inner sum uses the fixed-shape pairwise reduction.
double logsumexp(std::span<const double> values);

/// n IID draws from the model prior. Deterministic given (seed, n, model):
/// draw i is keyed by its index, so any shard layout yields the same bits.
DrawBatch draw_prior(const ModelSpec& model, std::uint64_t n, std::uint64_t seed,
                     std::size_t shards = 1);

/// Per-draw log-likelihoods, aligned with batch order. NaN or +inf from the
/// model evaluator is a hard error naming the offending index.
LogLikelihoods evaluate_log_likelihood(const ModelSpec& model, const DrawBatch& batch);

/// Normalized importance weights w_i = exp(ll_i) / sum_j exp(ll_j), computed
/// from the likelihood ratios exp(ll_i - max(ll)) and their pairwise sum so
/// that sum(w) = 1 within 1e-12 and adding one constant to every entry leaves
/// the weights unchanged. Throws TotalUnderflowError if all entries are -inf.
std::vector<double> normalize_weights(const LogLikelihoods& ll);

/// Weighted posterior approximation from an already-drawn batch.
WeightedPosterior weight_posterior(DrawBatch batch, LogLikelihoods ll);

/// Draw from the prior, score, normalize: the weighted sampler.
WeightedPosterior lips(const ModelSpec& model, std::uint64_t n, std::uint64_t seed,
                       std::size_t shards = 1);

/// Copy-amplification on a fixed batch: draw i is copied ceil(c * fr_i) times,
/// where fr_i = exp(ll_i - max(ll)) is the likelihood rescaled so the best
/// draw has ratio 1 and c reads as "copies of the best draw". Draws with zero
/// likelihood contribute no copies. Throws CopyExplosionError if the total
/// copy count would exceed max_copies.
UnweightedPosterior laps_from(const DrawBatch& batch, const LogLikelihoods& ll,
                              double c, std::uint64_t max_copies = kDefaultMaxCopies);

UnweightedPosterior laps(const ModelSpec& model, std::uint64_t n, double c,
                         std::uint64_t seed, std::size_t shards = 1,
                         std::uint64_t max_copies = kDefaultMaxCopies);

/// Multinomial resampling on a fixed batch: m draws with replacement,
/// probabilities proportional to likelihood. Pinned algorithm: inverse CDF
/// with sorted uniforms over the cumulative weight vector, ties broken toward
/// the lower draw index; uniforms come from the dedicated resampling stream
/// of `seed`, so they are independent of the prior draws.
UnweightedPosterior slips_from(const DrawBatch& batch, const LogLikelihoods& ll,
                               std::uint64_t m, std::uint64_t seed);

UnweightedPosterior slips(const ModelSpec& model, std::uint64_t n, std::uint64_t m,
                          std::uint64_t seed, std::size_t shards = 1);

namespace detail {

// Shared kernel: weighted fraction / weighted mean with the fixed-shape
// reduction, computed as a ratio so that the all-true indicator is exactly 1.
double weighted_fraction(std::span<const double> weights,
                         const std::vector<double>& masked);

}  // namespace detail

/// Posterior probability of a set A given by an indicator over draws.
/// Computed as sum_{i in A} w_i / sum_i w_i (uniform weights for unweighted
/// posteriors), so A = everything gives exactly 1 and A = nothing exactly 0.
template <class Pred>
double posterior_probability(const WeightedPosterior& post, Pred&& in_set) {
  std::vector<double> masked(post.size());
  for (std::size_t i = 0; i < post.size(); ++i) {
    masked[i] = in_set(post.draws.draw(i)) ? post.weights[i] : 0.0;
  }
  return detail::weighted_fraction(post.weights, masked);
}

template <class Pred>
double posterior_probability(const UnweightedPosterior& post, Pred&& in_set) {
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < post.size(); ++i) {
    if (in_set(post.draw(i))) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(post.size());
}

/// Posterior expectation of a scalar function of the parameter.
/// Throws InvalidIntegrandError (with the draw index) if g returns NaN.
template <class G>
double posterior_expectation(const WeightedPosterior& post, G&& g) {
  std::vector<double> terms(post.size());
  for (std::size_t i = 0; i < post.size(); ++i) {
    const double v = g(post.draws.draw(i));
    if (std::isnan(v)) throw InvalidIntegrandError(i);
    terms[i] = post.weights[i] * v;
  }
  return detail::weighted_fraction(post.weights, terms);
}

template <class G>
double posterior_expectation(const UnweightedPosterior& post, G&& g) {
  std::vector<double> terms(post.size());
  for (std::size_t i = 0; i < post.size(); ++i) {
    const double v = g(post.draw(i));
    if (std::isnan(v)) throw InvalidIntegrandError(i);
    terms[i] = v;
  }
  return engine::reduce_sum(terms) / static_cast<double>(post.size());
}

/// Vector-valued posterior expectation: g fills out_dim values per draw.
template <class Post, class G>
std::vector<double> posterior_expectation_vec(const Post& post, G&& g,
                                              std::size_t out_dim) {
  std::vector<double> result(out_dim);
  std::vector<double> values(out_dim);
  for (std::size_t k = 0; k < out_dim; ++k) {
    result[k] = posterior_expectation(post, [&](ParameterView theta) {
      g(theta, std::span<double>(values));
      return values[k];
    });
  }
  return result;
}

}  // namespace priorsam

#endif  // PRIORSAM_SAMPLING_HPP
