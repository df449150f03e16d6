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

#ifndef PRIORSAM_DIAGNOSTICS_HPP
#define PRIORSAM_DIAGNOSTICS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "priorsam/model.hpp"
#include "priorsam/types.hpp"

namespace priorsam::diagnostics {

/// Effective sample size 1/sum(w^2) of a normalized weight vector: the
/// equivalent number of unweighted draws. Raw formula, no clamping; rounding
/// can put it a few ulps above n for uniform weights.
double ess(std::span<const double> weights);

/// Plug-in estimate of the order-2 Renyi divergence between posterior and
/// prior: log(n) + logsumexp(2·ll) - 2·logsumexp(ll). Equals log(n/ess) up
/// to rounding, is invariant under adding a constant to ll, and throws
/// TotalUnderflowError when every entry is -inf.
double d2_hat(const LogLikelihoods& ll);

/// The asymptotic variance bound 2·exp(d2) implied by the divergence.
double variance_bound(double d2);

/// Plug-in estimate of lim n·Var of the posterior probability of A: Monte
/// Carlo averages replace the prior integrals of the likelihood and its
/// square, and the estimated probability replaces the true one. Evaluated in
/// a form with no catastrophic cancellation, so it is nonnegative by
/// construction; the clamp (reported through `clamped`) is a guard only.
/// A given as a per-draw membership mask aligned with ll.
double asymptotic_variance_hat(const LogLikelihoods& ll,
                               const std::vector<bool>& in_A,
                               bool* clamped = nullptr);

/// Brute-force check of the same limit: n times the sample variance of the
/// estimated probability of A over `reps` independent weighted runs, each
/// with a seed derived from (seed, replication index). Replicates fan out
/// across threads; the result does not depend on scheduling.
double replication_variance_study(const ModelSpec& model, std::uint64_t n,
                                  const std::function<bool(ParameterView)>& in_A,
                                  std::uint32_t reps, std::uint64_t seed);

/// Kolmogorov distance between the (weighted) empirical CDF of one draw
/// coordinate and a reference CDF: the supremum is attained at a jump, so
/// both sides of every jump are checked.
double ks_distance(const WeightedPosterior& post,
                   const std::function<double(double)>& cdf,
                   std::size_t coordinate = 0);
double ks_distance(const UnweightedPosterior& post,
                   const std::function<double(double)>& cdf,
                   std::size_t coordinate = 0);

/// Asymptotic variance estimate for one named parameter set.
struct SetVariance {
  std::string set;
  double variance = 0.0;
};

/// Summary of one weighted run. Invariants: ess <= n, d2_hat >= 0,
/// variance_bound == 2·exp(d2_hat) bit for bit.
struct DiagnosticsReport {
  std::uint64_t n = 0;
  double ess = 0.0;
  double d2_hat = 0.0;
  double variance_bound = 0.0;
  std::optional<std::vector<SetVariance>> per_set_variance;
  std::optional<double> ks;
};

/// Assembles the report for a run: ESS and D2 always; one variance entry per
/// half-line (-inf, a] over the first coordinate; KS against the model's
/// analytic posterior CDF when it has one. `any_clamped` reports whether any
/// variance estimate hit the nonnegativity guard.
DiagnosticsReport make_report(const WeightedPosterior& post, const ModelSpec& model,
                              std::span<const double> half_lines = {},
                              bool* any_clamped = nullptr);

/// One grid point of a high-information sweep. `error` is empty on success;
/// a TotalUnderflow at large t is recorded here and the sweep continues.
struct SweepRow {
  double t = 0.0;
  std::optional<double> d2_hat;
  std::optional<double> ess_ratio;
  std::string error;
};

/// Runs the same-seed weighted sampler across a sharpening-likelihood family
/// and tabulates the divergence estimate against t. t_grid must be strictly
/// increasing.
std::vector<SweepRow> high_information_sweep(
    const std::function<ModelSpec(double)>& family, std::span<const double> t_grid,
    std::uint64_t n, std::uint64_t seed, std::size_t shards = 1);

}  // namespace priorsam::diagnostics

#endif  // PRIORSAM_DIAGNOSTICS_HPP
