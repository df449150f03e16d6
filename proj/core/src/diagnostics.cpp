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

#include "priorsam/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "priorsam/engine.hpp"
#include "priorsam/errors.hpp"
#include "priorsam/sampling.hpp"

namespace priorsam::diagnostics {

double ess(std::span<const double> weights) {
  if (weights.empty()) throw std::invalid_argument("ess: empty weight vector");
  std::vector<double> sq(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) sq[i] = weights[i] * weights[i];
  return 1.0 / engine::reduce_sum(sq);
}

double d2_hat(const LogLikelihoods& ll) {
  if (ll.values.empty()) throw std::invalid_argument("d2_hat: empty log-likelihoods");
  // log(n · Σ exp(2ll - 2lse)) regrouped around the max log-likelihood, so a
  // constant shift of ll cancels inside the subtraction instead of rippling
  // through two logsumexp passes. Ratios live in (0, 1]; nothing overflows.
  const std::size_t n = ll.values.size();
  double m = -std::numeric_limits<double>::infinity();
  for (const double v : ll.values) {
    if (v > m) m = v;
  }
  if (m == -std::numeric_limits<double>::infinity()) throw TotalUnderflowError();
  std::vector<double> ratios(n);
  std::vector<double> squares(n);
  for (std::size_t i = 0; i < n; ++i) {
    ratios[i] = std::exp(ll.values[i] - m);
    squares[i] = ratios[i] * ratios[i];
  }
  const double s1 = engine::reduce_sum(ratios);
  const double s2 = engine::reduce_sum(squares);
  return std::log(static_cast<double>(n)) + std::log(s2) - 2.0 * std::log(s1);
}

double variance_bound(double d2) { return 2.0 * std::exp(d2); }

double asymptotic_variance_hat(const LogLikelihoods& ll,
                               const std::vector<bool>& in_A, bool* clamped) {
  if (in_A.size() != ll.size()) {
    throw std::invalid_argument("asymptotic_variance_hat: mask and ll disagree on n");
  }
  const std::vector<double> w = normalize_weights(ll);
  const std::size_t n = w.size();

  std::vector<double> sq(n), sq_in(n), w_in(n);
  for (std::size_t i = 0; i < n; ++i) {
    sq[i] = w[i] * w[i];
    sq_in[i] = in_A[i] ? sq[i] : 0.0;
    w_in[i] = in_A[i] ? w[i] : 0.0;
  }
  const double s2 = engine::reduce_sum(sq);
  const double s2_in = engine::reduce_sum(sq_in);
  const double p = engine::reduce_sum(w_in) / engine::reduce_sum(w);

  // Algebraically equal to n·[s2·p² + s2_in·(1 − 2p)], the direct plug-in of
  // the limiting-variance formula, but grouped as a sum of two nonnegative
  // products. A = everything gives exactly 0: p == 1 and s2_in == s2 bit for
  // bit because the masked reductions see identical inputs.
  double v = static_cast<double>(n) *
             (s2_in * (1.0 - p) * (1.0 - p) + (s2 - s2_in) * p * p);
  if (clamped) *clamped = false;
  if (v < 0.0) {
    v = 0.0;
    if (clamped) *clamped = true;
  }
  return v;
}

double replication_variance_study(const ModelSpec& model, std::uint64_t n,
                                  const std::function<bool(ParameterView)>& in_A,
                                  std::uint32_t reps, std::uint64_t seed) {
  if (reps < 30) {
    throw std::invalid_argument("replication_variance_study: reps must be >= 30");
  }
  std::vector<double> estimates(reps);
  std::vector<std::exception_ptr> errors(reps);

  std::atomic<std::uint32_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::uint32_t r = next.fetch_add(1);
      if (r >= reps) return;
      try {
        const std::uint64_t rep_seed = derive_seed(seed, purpose::kReplication, r);
        const WeightedPosterior post = lips(model, n, rep_seed);
        estimates[r] = posterior_probability(post, in_A);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(engine::max_workers(), reps);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const double mean = engine::reduce_sum(estimates) / static_cast<double>(reps);
  std::vector<double> dev_sq(reps);
  for (std::uint32_t r = 0; r < reps; ++r) {
    const double d = estimates[r] - mean;
    dev_sq[r] = d * d;
  }
  const double var =
      engine::reduce_sum(dev_sq) / static_cast<double>(reps - 1);
  return static_cast<double>(n) * var;
}

namespace {

// Shared KS core over (value, weight) pairs with weights summing to ~1.
double ks_core(std::vector<std::pair<double, double>> points,
               const std::function<double(double)>& cdf) {
  if (points.empty()) throw std::invalid_argument("ks_distance: empty posterior");
  // Sort by value, then by original position (encoded in the weight pair
  // order via stable_sort) so tied values accumulate deterministically.
  std::stable_sort(points.begin(), points.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  double sup = 0.0;
  double below = 0.0;  // ECDF just left of the current jump
  std::size_t i = 0;
  while (i < points.size()) {
    const double x = points[i].first;
    double jump = 0.0;
    while (i < points.size() && points[i].first == x) {
      jump += points[i].second;
      ++i;
    }
    const double above = below + jump;
    const double ref = cdf(x);
    sup = std::max(sup, std::abs(ref - below));
    sup = std::max(sup, std::abs(above - ref));
    below = above;
  }
  return sup;
}

std::string format_half_line(double a) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), a);
  return "theta0<=" + std::string(buf, res.ptr);
}

}  // namespace

double ks_distance(const WeightedPosterior& post,
                   const std::function<double(double)>& cdf,
                   std::size_t coordinate) {
  if (coordinate >= post.dim()) {
    throw std::invalid_argument("ks_distance: coordinate out of range");
  }
  std::vector<std::pair<double, double>> points(post.size());
  for (std::size_t i = 0; i < post.size(); ++i) {
    points[i] = {post.draws.draw(i)[coordinate], post.weights[i]};
  }
  return ks_core(std::move(points), cdf);
}

double ks_distance(const UnweightedPosterior& post,
                   const std::function<double(double)>& cdf,
                   std::size_t coordinate) {
  if (coordinate >= post.dim) {
    throw std::invalid_argument("ks_distance: coordinate out of range");
  }
  const double w = 1.0 / static_cast<double>(post.size());
  std::vector<std::pair<double, double>> points(post.size());
  for (std::size_t i = 0; i < post.size(); ++i) {
    points[i] = {post.draw(i)[coordinate], w};
  }
  return ks_core(std::move(points), cdf);
}

DiagnosticsReport make_report(const WeightedPosterior& post, const ModelSpec& model,
                              std::span<const double> half_lines,
                              bool* any_clamped) {
  DiagnosticsReport report;
  report.n = post.size();
  report.ess = std::min(ess(post.weights), static_cast<double>(post.size()));
  report.d2_hat = std::max(0.0, d2_hat(post.log_likelihoods));
  report.variance_bound = variance_bound(report.d2_hat);

  if (any_clamped) *any_clamped = false;
  if (!half_lines.empty()) {
    std::vector<SetVariance> entries;
    entries.reserve(half_lines.size());
    std::vector<bool> mask(post.size());
    for (const double a : half_lines) {
      for (std::size_t i = 0; i < post.size(); ++i) {
        mask[i] = post.draws.draw(i)[0] <= a;
      }
      bool clamped = false;
      const double v = asymptotic_variance_hat(post.log_likelihoods, mask, &clamped);
      if (clamped && any_clamped) *any_clamped = true;
      entries.push_back({format_half_line(a), v});
    }
    report.per_set_variance = std::move(entries);
  }

  if (model.posterior_cdf) {
    const auto& cdf = *model.posterior_cdf;
    report.ks = ks_distance(
        post, [&cdf](double v) { return cdf(v, 0); }, 0);
  }
  return report;
}

std::vector<SweepRow> high_information_sweep(
    const std::function<ModelSpec(double)>& family, std::span<const double> t_grid,
    std::uint64_t n, std::uint64_t seed, std::size_t shards) {
  if (t_grid.empty()) {
    throw std::invalid_argument("high_information_sweep: empty t grid");
  }
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
    if (!(t_grid[i] < t_grid[i + 1])) {
      throw std::invalid_argument("high_information_sweep: t grid must be strictly increasing");
    }
  }

  std::vector<SweepRow> rows;
  rows.reserve(t_grid.size());
  for (const double t : t_grid) {
    SweepRow row;
    row.t = t;
    try {
      const ModelSpec model = family(t);
      const WeightedPosterior post = lips(model, n, seed, shards);
      row.d2_hat = d2_hat(post.log_likelihoods);
      row.ess_ratio = ess(post.weights) / static_cast<double>(post.size());
    } catch (const TotalUnderflowError& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace priorsam::diagnostics
