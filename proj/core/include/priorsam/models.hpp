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

#ifndef PRIORSAM_MODELS_HPP
#define PRIORSAM_MODELS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "priorsam/model.hpp"

namespace priorsam::models {

/// Gaussian prior N(prior_mean, prior_sd²), Gaussian likelihood for t
/// observations with known sd obs_sd summarized by their mean xbar.
/// Conjugate: the posterior is N(post_mean, post_var) with
/// post_var = 1/(1/prior_sd² + t/obs_sd²) and
/// post_mean = post_var·(prior_mean/prior_sd² + t·xbar/obs_sd²).
ModelSpec make_gaussian_gaussian(double prior_mean, double prior_sd,
                                 double obs_sd, double t, double xbar);

/// Beta(alpha, beta) prior on a success probability, Bernoulli likelihood
/// with `successes` hits in `trials` attempts. Conjugate: posterior is
/// Beta(alpha + successes, beta + trials - successes). Exercises a bounded
/// parameter space and -inf log-likelihoods at the endpoints.
ModelSpec make_beta_bernoulli(double alpha, double beta, std::uint64_t successes,
                              std::uint64_t trials);

/// Flat prior on [-half_width, half_width], same Gaussian likelihood as
/// make_gaussian_gaussian. The posterior is that likelihood's normal
/// truncated to the support; the prior density at the likelihood peak is
/// 1/(2·half_width), which the high-information limit is proportional to.
ModelSpec make_uniform_gaussian(double half_width, double obs_sd, double t,
                                double xbar);

/// Standard normal prior in `dim` coordinates with likelihood identically 1.
/// The posterior equals the prior; every weight is 1/n.
ModelSpec make_constant(std::size_t dim);

/// Ingredients for a model whose likelihood is tractable only given a latent
/// variable: draws live on the product space (theta, y).
struct LatentExpansion {
  std::string id;
  /// Prior over theta. Its log_likelihood is ignored.
  ModelSpec base;
  std::size_t latent_dim = 1;
  /// Draws y | theta. Must be a pure function of (rng, index, theta); the rng
  /// passed in is on the dedicated latent stream.
  std::function<void(const CounterRng& rng, std::uint64_t index,
                     ParameterView theta, std::span<double> latent)>
      sample_latent;
  /// log f(x | theta, y) with the observation baked in.
  std::function<double(ParameterView theta, ParameterView latent)>
      conditional_log_likelihood;
};

/// ModelSpec over the product space: draws are (theta, y) with y from the
/// latent stream, the likelihood is the conditional one, and marginal_dim
/// restricts posterior queries to theta so y is marginalized by being
/// ignored. The theta coordinates are bit-identical to draws from `base`
/// under the same seed.
ModelSpec expand_latent(LatentExpansion expansion);

/// Two-level Gaussian chain: theta ~ N(0,1), latent y | theta ~ N(theta, 1),
/// observation x | y ~ N(y, 1). Marginally x | theta ~ N(theta, 2), so the
/// theta-posterior matches make_gaussian_gaussian(0, 1, sqrt(2), 1, x):
/// N(x/3, 2/3). Built via expand_latent; the analytic marginal CDF is
/// attached for tests.
ModelSpec make_gaussian_chain(double x);

/// Prior integrals of likelihood powers, the brute-force oracle used by
/// tests and diagnostics and never by the samplers themselves.
/// With f the likelihood and A the half-line (-inf, a]:
///   f   = integral of prior_pdf * f
///   f2  = integral of prior_pdf * f^2
///   fA  = same as f restricted to A (0 when no half-line was given)
///   f2A = same as f2 restricted to A
struct PriorIntegrals {
  double f = 0.0;
  double f2 = 0.0;
  double fA = 0.0;
  double f2A = 0.0;
};

/// Adaptive quadrature at relative tolerance 1e-8 over the model's 1-D prior
/// density. Requires dim == 1 and a prior_density; throws QuadratureError if
/// the error estimate cannot be brought under tolerance.
PriorIntegrals oracle_prior_integrals(const ModelSpec& model,
                                      std::optional<double> half_line_a = std::nullopt);

/// The ids accepted by make_model, in stable order.
std::vector<std::string> model_ids();

/// Build a bundled model from its id and a key=value parameter map.
/// Missing keys take model-specific defaults; unknown keys are an error so
/// typos do not silently fall back to defaults.
///
///   gaussian-gaussian: prior-mean=0, prior-sd=1, obs-sd=1, t=1, x=1
///   beta-bernoulli:    alpha=1, beta=1, successes=1, trials=1
///   uniform-gaussian:  half-width=10, obs-sd=1, t=1, x=1
///   gaussian-chain:    x=1
///   constant:          dim=1
ModelSpec make_model(const std::string& id,
                     const std::map<std::string, double>& params);

}  // namespace priorsam::models

#endif  // PRIORSAM_MODELS_HPP
