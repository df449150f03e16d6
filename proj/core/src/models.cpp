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

#include "priorsam/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "priorsam/errors.hpp"

namespace priorsam::models {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const boost::math::normal_distribution<double>& std_normal() {
  static const boost::math::normal_distribution<double> dist(0.0, 1.0);
  return dist;
}

double normal_quantile(double u) { return boost::math::quantile(std_normal(), u); }
double normal_cdf_std(double z) { return boost::math::cdf(std_normal(), z); }
double normal_pdf_std(double z) { return boost::math::pdf(std_normal(), z); }

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// log N(xbar; theta, obs_sd^2 / t): the likelihood of t observations with
// known sd reduced to their sufficient statistic.
std::function<double(ParameterView)> gaussian_loglik(double obs_sd, double t,
                                                     double xbar) {
  const double var_bar = obs_sd * obs_sd / t;
  const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi * var_bar);
  return [var_bar, log_norm, xbar](ParameterView theta) {
    const double d = xbar - theta[0];
    return log_norm - d * d / (2.0 * var_bar);
  };
}

}  // namespace

ModelSpec make_gaussian_gaussian(double prior_mean, double prior_sd,
                                 double obs_sd, double t, double xbar) {
  require(std::isfinite(prior_mean) && std::isfinite(xbar),
          "make_gaussian_gaussian: prior_mean and xbar must be finite");
  require(prior_sd > 0.0 && obs_sd > 0.0,
          "make_gaussian_gaussian: prior_sd and obs_sd must be > 0");
  require(t >= 1.0 && std::isfinite(t), "make_gaussian_gaussian: t must be >= 1");

  ModelSpec m;
  m.id = "gaussian-gaussian";
  m.dim = 1;
  m.marginal_dim = 1;
  m.sample_draw = [prior_mean, prior_sd](const CounterRng& rng, std::uint64_t i,
                                         std::span<double> out) {
    out[0] = prior_mean + prior_sd * normal_quantile(rng.uniform_open(i, 0));
  };
  m.log_likelihood = gaussian_loglik(obs_sd, t, xbar);

  const double prior_var = prior_sd * prior_sd;
  const double post_var = 1.0 / (1.0 / prior_var + t / (obs_sd * obs_sd));
  const double post_mean =
      post_var * (prior_mean / prior_var + t * xbar / (obs_sd * obs_sd));
  const double post_sd = std::sqrt(post_var);
  m.posterior_mean = {{post_mean}};
  m.posterior_variance = {{post_var}};
  m.posterior_cdf = [post_mean, post_sd](double v, std::size_t) {
    return normal_cdf_std((v - post_mean) / post_sd);
  };

  PriorDensity1D pd;
  pd.pdf = [prior_mean, prior_sd](double theta) {
    return normal_pdf_std((theta - prior_mean) / prior_sd) / prior_sd;
  };
  pd.split_points = {prior_mean, xbar, post_mean};
  m.prior_density = std::move(pd);
  return m;
}

ModelSpec make_beta_bernoulli(double alpha, double beta, std::uint64_t successes,
                              std::uint64_t trials) {
  require(alpha > 0.0 && beta > 0.0,
          "make_beta_bernoulli: alpha and beta must be > 0");
  require(successes <= trials,
          "make_beta_bernoulli: successes must be <= trials");

  ModelSpec m;
  m.id = "beta-bernoulli";
  m.dim = 1;
  m.marginal_dim = 1;
  m.sample_draw = [alpha, beta](const CounterRng& rng, std::uint64_t i,
                                std::span<double> out) {
    out[0] = boost::math::ibeta_inv(alpha, beta, rng.uniform_open(i, 0));
  };

  const double s = static_cast<double>(successes);
  const double f = static_cast<double>(trials - successes);
  m.log_likelihood = [s, f](ParameterView theta) {
    const double p = theta[0];
    if (p < 0.0 || p > 1.0) return -kInf;
    double ll = 0.0;
    if (s > 0.0) {
      if (p == 0.0) return -kInf;
      ll += s * std::log(p);
    }
    if (f > 0.0) {
      if (p == 1.0) return -kInf;
      ll += f * std::log1p(-p);
    }
    return ll;
  };

  const double pa = alpha + s;
  const double pb = beta + f;
  m.posterior_mean = {{pa / (pa + pb)}};
  m.posterior_variance = {{pa * pb / ((pa + pb) * (pa + pb) * (pa + pb + 1.0))}};
  m.posterior_cdf = [pa, pb](double v, std::size_t) {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    return boost::math::ibeta(pa, pb, v);
  };

  PriorDensity1D pd;
  const boost::math::beta_distribution<double> prior(alpha, beta);
  pd.pdf = [prior](double theta) {
    if (theta <= 0.0 || theta >= 1.0) return 0.0;
    return boost::math::pdf(prior, theta);
  };
  pd.lo = 0.0;
  pd.hi = 1.0;
  if (trials > 0) pd.split_points = {s / static_cast<double>(trials)};
  m.prior_density = std::move(pd);
  return m;
}

ModelSpec make_uniform_gaussian(double half_width, double obs_sd, double t,
                                double xbar) {
  require(half_width > 0.0 && std::isfinite(half_width),
          "make_uniform_gaussian: half_width must be > 0");
  require(obs_sd > 0.0, "make_uniform_gaussian: obs_sd must be > 0");
  require(t >= 1.0 && std::isfinite(t), "make_uniform_gaussian: t must be >= 1");
  require(std::isfinite(xbar), "make_uniform_gaussian: xbar must be finite");

  ModelSpec m;
  m.id = "uniform-gaussian";
  m.dim = 1;
  m.marginal_dim = 1;
  const double w = half_width;
  m.sample_draw = [w](const CounterRng& rng, std::uint64_t i, std::span<double> out) {
    out[0] = -w + 2.0 * w * rng.uniform_open(i, 0);
  };
  m.log_likelihood = gaussian_loglik(obs_sd, t, xbar);

  // Posterior: N(xbar, obs_sd^2/t) truncated to [-w, w].
  const double s_t = obs_sd / std::sqrt(t);
  const double lo_z = (-w - xbar) / s_t;
  const double hi_z = (w - xbar) / s_t;
  const double mass = normal_cdf_std(hi_z) - normal_cdf_std(lo_z);
  require(mass > 0.0,
          "make_uniform_gaussian: likelihood mass inside the support underflows; "
          "widen half_width or move xbar");
  m.posterior_cdf = [w, xbar, s_t, lo_z, mass](double v, std::size_t) {
    if (v <= -w) return 0.0;
    if (v >= w) return 1.0;
    const double p = (normal_cdf_std((v - xbar) / s_t) - normal_cdf_std(lo_z)) / mass;
    return std::clamp(p, 0.0, 1.0);
  };
  const double ratio = (normal_pdf_std(lo_z) - normal_pdf_std(hi_z)) / mass;
  m.posterior_mean = {{xbar + s_t * ratio}};
  m.posterior_variance = {
      {s_t * s_t *
       (1.0 + (lo_z * normal_pdf_std(lo_z) - hi_z * normal_pdf_std(hi_z)) / mass -
        ratio * ratio)}};

  PriorDensity1D pd;
  pd.pdf = [w](double theta) { return (theta < -w || theta > w) ? 0.0 : 1.0 / (2.0 * w); };
  pd.lo = -w;
  pd.hi = w;
  if (xbar > -w && xbar < w) pd.split_points = {xbar};
  m.prior_density = std::move(pd);
  return m;
}

ModelSpec make_constant(std::size_t dim) {
  require(dim >= 1, "make_constant: dim must be >= 1");
  ModelSpec m;
  m.id = "constant";
  m.dim = dim;
  m.marginal_dim = dim;
  m.sample_draw = [dim](const CounterRng& rng, std::uint64_t i, std::span<double> out) {
    for (std::size_t k = 0; k < dim; ++k) {
      out[k] = normal_quantile(rng.uniform_open(i, static_cast<std::uint32_t>(k)));
    }
  };
  m.log_likelihood = [](ParameterView) { return 0.0; };
  m.posterior_cdf = [](double v, std::size_t) { return normal_cdf_std(v); };
  m.posterior_mean = std::vector<double>(dim, 0.0);
  m.posterior_variance = std::vector<double>(dim, 1.0);
  if (dim == 1) {
    PriorDensity1D pd;
    pd.pdf = [](double theta) { return normal_pdf_std(theta); };
    pd.split_points = {0.0};
    m.prior_density = std::move(pd);
  }
  return m;
}

ModelSpec expand_latent(LatentExpansion expansion) {
  require(static_cast<bool>(expansion.base.sample_draw),
          "expand_latent: base model has no sample_draw");
  require(static_cast<bool>(expansion.sample_latent),
          "expand_latent: sample_latent is required");
  require(static_cast<bool>(expansion.conditional_log_likelihood),
          "expand_latent: conditional_log_likelihood is required");
  require(expansion.latent_dim >= 1, "expand_latent: latent_dim must be >= 1");

  const std::size_t base_dim = expansion.base.dim;
  const std::size_t latent_dim = expansion.latent_dim;

  ModelSpec m;
  m.id = expansion.id.empty() ? expansion.base.id + "+latent" : expansion.id;
  m.dim = base_dim + latent_dim;
  m.marginal_dim = base_dim;
  m.sample_draw = [base_dim, latent_dim, base_sample = expansion.base.sample_draw,
                   latent_sample = expansion.sample_latent](
                      const CounterRng& rng, std::uint64_t i, std::span<double> out) {
    base_sample(rng, i, out.first(base_dim));
    // Latent coordinates come from their own stream so the theta coordinates
    // match the base model's draws bit for bit under the same seed.
    const CounterRng latent_rng(rng.seed(), stream::kLatent);
    latent_sample(latent_rng, i, ParameterView(out.data(), base_dim),
                  out.subspan(base_dim, latent_dim));
  };
  m.log_likelihood = [base_dim, latent_dim,
                      cond = expansion.conditional_log_likelihood](ParameterView th) {
    return cond(ParameterView(th.data(), base_dim),
                ParameterView(th.data() + base_dim, latent_dim));
  };
  return m;
}

ModelSpec make_gaussian_chain(double x) {
  require(std::isfinite(x), "make_gaussian_chain: x must be finite");

  LatentExpansion e;
  e.id = "gaussian-chain";
  e.base = make_constant(1);  // standard normal prior over theta
  e.latent_dim = 1;
  e.sample_latent = [](const CounterRng& rng, std::uint64_t i, ParameterView theta,
                       std::span<double> latent) {
    latent[0] = theta[0] + normal_quantile(rng.uniform_open(i, 0));
  };
  e.conditional_log_likelihood = [x](ParameterView, ParameterView y) {
    const double d = x - y[0];
    return -0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * d * d;
  };
  ModelSpec m = expand_latent(std::move(e));

  // Marginally x | theta ~ N(theta, 2), so theta | x ~ N(x/3, 2/3).
  const double post_mean = x / 3.0;
  const double post_sd = std::sqrt(2.0 / 3.0);
  m.posterior_cdf = [post_mean, post_sd](double v, std::size_t) {
    return normal_cdf_std((v - post_mean) / post_sd);
  };
  m.posterior_mean = {{post_mean}};
  m.posterior_variance = {{2.0 / 3.0}};
  return m;
}

namespace {

// One adaptive pass per contiguous piece between breakpoints; accumulates the
// piece error estimates so the caller can enforce a total relative tolerance.
double integrate_pieces(const std::function<double(double)>& g,
                        const std::vector<double>& breaks, double* err_out) {
  using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
  double total = 0.0;
  double err_total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i] == breaks[i + 1]) continue;
    double err = 0.0;
    total += Quad::integrate(g, breaks[i], breaks[i + 1], 18, 1e-10, &err);
    err_total += err;
  }
  *err_out = err_total;
  return total;
}

void check_tolerance(double value, double err, const char* label) {
  // Relative tolerance 1e-8 with an absolute floor for integrals that are
  // legitimately zero (empty half-lines).
  if (err > 1e-8 * std::abs(value) + 1e-290) {
    throw QuadratureError(std::string("oracle_prior_integrals: ") + label +
                          " error estimate " + std::to_string(err) +
                          " exceeds tolerance at value " + std::to_string(value));
  }
}

}  // namespace

PriorIntegrals oracle_prior_integrals(const ModelSpec& model,
                                      std::optional<double> half_line_a) {
  require(model.dim == 1, "oracle_prior_integrals: model must be 1-D");
  require(model.prior_density.has_value(),
          "oracle_prior_integrals: model has no prior density");
  require(static_cast<bool>(model.log_likelihood),
          "oracle_prior_integrals: model has no log_likelihood");

  const PriorDensity1D& pd = *model.prior_density;
  auto integrand = [&pd, &model](double power) {
    return [&pd, &model, power](double theta) {
      const double p = pd.pdf(theta);
      if (p == 0.0) return 0.0;
      return p * std::exp(power * model.log_likelihood(ParameterView(&theta, 1)));
    };
  };

  std::vector<double> breaks{pd.lo};
  for (const double s : pd.split_points) {
    if (s > pd.lo && s < pd.hi) breaks.push_back(s);
  }
  if (half_line_a && *half_line_a > pd.lo && *half_line_a < pd.hi) {
    breaks.push_back(*half_line_a);
  }
  breaks.push_back(pd.hi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  PriorIntegrals out;
  double err = 0.0;
  out.f = integrate_pieces(integrand(1.0), breaks, &err);
  check_tolerance(out.f, err, "prior*f");
  out.f2 = integrate_pieces(integrand(2.0), breaks, &err);
  check_tolerance(out.f2, err, "prior*f^2");

  if (half_line_a) {
    // a is itself a breakpoint whenever it falls inside the support, so the
    // pieces at or below it cover exactly (-inf, a] intersected with it.
    std::vector<double> below;
    for (const double b : breaks) {
      if (b <= *half_line_a) below.push_back(b);
    }
    if (below.size() >= 2) {
      out.fA = integrate_pieces(integrand(1.0), below, &err);
      check_tolerance(out.fA, err, "prior*f*A");
      out.f2A = integrate_pieces(integrand(2.0), below, &err);
      check_tolerance(out.f2A, err, "prior*f^2*A");
    }
  }
  return out;
}

namespace {

double take_param(std::map<std::string, double>& params, const std::string& key,
                  double fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double v = it->second;
  params.erase(it);
  return v;
}

std::uint64_t take_count(std::map<std::string, double>& params,
                         const std::string& key, std::uint64_t fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double v = it->second;
  params.erase(it);
  if (!(v >= 0.0) || v != std::floor(v) || v > 9e15) {
    throw std::invalid_argument("model parameter '" + key +
                                "' must be a non-negative integer, got " +
                                std::to_string(v));
  }
  return static_cast<std::uint64_t>(v);
}

void reject_leftovers(const std::map<std::string, double>& params,
                      const std::string& id) {
  if (params.empty()) return;
  std::string msg = "unknown parameter(s) for model '" + id + "':";
  for (const auto& [k, v] : params) msg += " " + k;
  throw std::invalid_argument(msg);
}

}  // namespace

std::vector<std::string> model_ids() {
  return {"gaussian-gaussian", "beta-bernoulli", "uniform-gaussian",
          "gaussian-chain", "constant"};
}

ModelSpec make_model(const std::string& id,
                     const std::map<std::string, double>& params) {
  std::map<std::string, double> p = params;
  if (id == "gaussian-gaussian") {
    const double prior_mean = take_param(p, "prior-mean", 0.0);
    const double prior_sd = take_param(p, "prior-sd", 1.0);
    const double obs_sd = take_param(p, "obs-sd", 1.0);
    const double t = take_param(p, "t", 1.0);
    const double x = take_param(p, "x", 1.0);
    reject_leftovers(p, id);
    return make_gaussian_gaussian(prior_mean, prior_sd, obs_sd, t, x);
  }
  if (id == "beta-bernoulli") {
    const double alpha = take_param(p, "alpha", 1.0);
    const double beta = take_param(p, "beta", 1.0);
    const std::uint64_t successes = take_count(p, "successes", 1);
    const std::uint64_t trials = take_count(p, "trials", 1);
    reject_leftovers(p, id);
    return make_beta_bernoulli(alpha, beta, successes, trials);
  }
  if (id == "uniform-gaussian") {
    const double half_width = take_param(p, "half-width", 10.0);
    const double obs_sd = take_param(p, "obs-sd", 1.0);
    const double t = take_param(p, "t", 1.0);
    const double x = take_param(p, "x", 1.0);
    reject_leftovers(p, id);
    return make_uniform_gaussian(half_width, obs_sd, t, x);
  }
  if (id == "gaussian-chain") {
    const double x = take_param(p, "x", 1.0);
    reject_leftovers(p, id);
    return make_gaussian_chain(x);
  }
  if (id == "constant") {
    const std::uint64_t dim = take_count(p, "dim", 1);
    reject_leftovers(p, id);
    return make_constant(static_cast<std::size_t>(dim));
  }
  std::string known;
  for (const auto& m : model_ids()) known += " " + m;
  throw std::invalid_argument("unknown model id '" + id + "'; known models:" + known);
}

}  // namespace priorsam::models
