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

#include "priorsam/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace priorsam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_value(std::span<const double> values) {
  double m = -kInf;
  for (const double v : values) {
    if (v > m) m = v;
  }
  return m;
}

// Likelihood ratios exp(ll - max(ll)) and their weights. Working relative to
// the max rather than to logsumexp makes a constant shift of ll cancel inside
// the subtraction, so weights depend only on likelihood ratios; the pairwise
// sum then normalizes them to add to 1.
struct RelativeWeights {
  std::vector<double> ratios;
  double max_ll = 0.0;
  double total = 0.0;  // pairwise sum of ratios
};

RelativeWeights relative_weights(std::span<const double> ll) {
  RelativeWeights r;
  r.max_ll = max_value(ll);
  if (r.max_ll == -kInf) throw TotalUnderflowError();
  r.ratios.resize(ll.size());
  for (std::size_t i = 0; i < ll.size(); ++i) {
    r.ratios[i] = std::exp(ll[i] - r.max_ll);
  }
  r.total = engine::reduce_sum(r.ratios);
  return r;
}

}  // namespace

DrawBatch::DrawBatch(std::size_t dim, std::vector<double> coords, SeedInfo seed_info)
    : dim_(dim), coords_(std::move(coords)), seed_info_(seed_info) {
  if (dim_ == 0) throw std::invalid_argument("DrawBatch: dim must be >= 1");
  if (coords_.empty() || coords_.size() % dim_ != 0) {
    throw std::invalid_argument("DrawBatch: coords must hold a positive multiple of dim values");
  }
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i])) {
      throw std::invalid_argument("DrawBatch: non-finite coordinate at draw " +
                                  std::to_string(i / dim_));
    }
  }
}

double logsumexp(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("logsumexp: empty input");
  const double m = max_value(values);
  if (m == -kInf) throw TotalUnderflowError();
  std::vector<double> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    terms[i] = std::exp(values[i] - m);
  }
  return m + std::log(engine::reduce_sum(terms));
}

DrawBatch draw_prior(const ModelSpec& model, std::uint64_t n, std::uint64_t seed,
                     std::size_t shards) {
  return engine::sample_sharded(model, n, shards, seed);
}

LogLikelihoods evaluate_log_likelihood(const ModelSpec& model, const DrawBatch& batch) {
  if (!model.log_likelihood) {
    throw std::invalid_argument("evaluate_log_likelihood: model has no log_likelihood");
  }
  LogLikelihoods ll;
  ll.values.resize(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double v = model.log_likelihood(batch.draw(i));
    if (std::isnan(v) || v == kInf) throw InvalidLogLikelihoodError(i, v);
    ll.values[i] = v;
  }
  return ll;
}

std::vector<double> normalize_weights(const LogLikelihoods& ll) {
  RelativeWeights r = relative_weights(ll.values);
  std::vector<double> w = std::move(r.ratios);
  for (double& x : w) x /= r.total;
  return w;
}

WeightedPosterior weight_posterior(DrawBatch batch, LogLikelihoods ll) {
  if (ll.size() != batch.size()) {
    throw std::invalid_argument("weight_posterior: batch and log-likelihoods disagree on n");
  }
  RelativeWeights r = relative_weights(ll.values);
  const double lse = r.max_ll + std::log(r.total);
  std::vector<double> weights = std::move(r.ratios);
  for (double& x : weights) x /= r.total;
  return WeightedPosterior{std::move(batch), std::move(ll), std::move(weights), lse};
}

WeightedPosterior lips(const ModelSpec& model, std::uint64_t n, std::uint64_t seed,
                       std::size_t shards) {
  auto [batch, ll] = engine::run_sharded(model, n, shards, seed);
  return weight_posterior(std::move(batch), std::move(ll));
}

UnweightedPosterior laps_from(const DrawBatch& batch, const LogLikelihoods& ll,
                              double c, std::uint64_t max_copies) {
  if (ll.size() != batch.size()) {
    throw std::invalid_argument("laps_from: batch and log-likelihoods disagree on n");
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("laps_from: c must be a positive finite number");
  }
  const double m = max_value(ll.values);
  if (m == -kInf) throw TotalUnderflowError();

  // Copy counts first, in floating point, so the budget check happens before
  // any allocation. ceil(c * r) with r in (0, 1] is at most c rounded up, so
  // per-draw counts stay well inside uint64 whenever the total passes the cap.
  const std::size_t n = batch.size();
  std::vector<double> copies(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    copies[i] = std::ceil(c * std::exp(ll.values[i] - m));
    total += copies[i];
  }
  if (total > static_cast<double>(max_copies)) {
    const double bytes = total * static_cast<double>(batch.dim()) * sizeof(double);
    const double u64_max = static_cast<double>(std::numeric_limits<std::uint64_t>::max());
    throw CopyExplosionError(static_cast<std::uint64_t>(std::min(total, u64_max)),
                             max_copies,
                             static_cast<std::uint64_t>(std::min(bytes, u64_max)));
  }

  UnweightedPosterior out;
  out.dim = batch.dim();
  out.coords.reserve(static_cast<std::size_t>(total) * batch.dim());
  out.source_indices.reserve(static_cast<std::size_t>(total));
  for (std::size_t i = 0; i < n; ++i) {
    const auto reps = static_cast<std::uint64_t>(copies[i]);
    const ParameterView theta = batch.draw(i);
    for (std::uint64_t r = 0; r < reps; ++r) {
      out.coords.insert(out.coords.end(), theta.begin(), theta.end());
      out.source_indices.push_back(i);
    }
  }
  return out;
}

UnweightedPosterior laps(const ModelSpec& model, std::uint64_t n, double c,
                         std::uint64_t seed, std::size_t shards,
                         std::uint64_t max_copies) {
  auto [batch, ll] = engine::run_sharded(model, n, shards, seed);
  return laps_from(batch, ll, c, max_copies);
}

UnweightedPosterior slips_from(const DrawBatch& batch, const LogLikelihoods& ll,
                               std::uint64_t m, std::uint64_t seed) {
  if (ll.size() != batch.size()) {
    throw std::invalid_argument("slips_from: batch and log-likelihoods disagree on n");
  }
  if (m == 0) throw std::invalid_argument("slips_from: m must be >= 1");
  const double max_ll = max_value(ll.values);
  if (max_ll == -kInf) throw TotalUnderflowError();

  // Cumulative unnormalized weights, rescaled by the max for stability.
  // The running sum is sequential on purpose: one fixed evaluation order.
  const std::size_t n = batch.size();
  std::vector<double> cumulative(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += std::exp(ll.values[i] - max_ll);
    cumulative[i] = acc;
  }
  const double total = cumulative[n - 1];

  // Resampling positions come from their own stream, keyed by resample index,
  // so they are independent of the prior draws under the same seed.
  const CounterRng rng(seed, stream::kResample);
  std::vector<double> positions(m);
  for (std::uint64_t j = 0; j < m; ++j) {
    positions[j] = rng.uniform_open(j, 0) * total;
  }
  std::sort(positions.begin(), positions.end());

  // Single merge pass: position x selects the smallest k with cumulative[k]
  // >= x. A zero-likelihood draw spans an empty interval, so it can never be
  // selected; an exact boundary hit goes to the lower draw index.
  UnweightedPosterior out;
  out.dim = batch.dim();
  out.coords.reserve(m * batch.dim());
  out.source_indices.reserve(m);
  std::size_t k = 0;
  for (const double x : positions) {
    while (k + 1 < n && cumulative[k] < x) ++k;
    const ParameterView theta = batch.draw(k);
    out.coords.insert(out.coords.end(), theta.begin(), theta.end());
    out.source_indices.push_back(k);
  }
  return out;
}

UnweightedPosterior slips(const ModelSpec& model, std::uint64_t n, std::uint64_t m,
                          std::uint64_t seed, std::size_t shards) {
  auto [batch, ll] = engine::run_sharded(model, n, shards, seed);
  return slips_from(batch, ll, m, seed);
}

namespace detail {

double weighted_fraction(std::span<const double> weights,
                         const std::vector<double>& masked) {
  const double num = engine::reduce_sum(masked);
  const double den = engine::reduce_sum(weights);
  return num / den;
}

}  // namespace detail

}  // namespace priorsam
