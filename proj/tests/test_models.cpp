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

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <doctest.h>

#include "priorsam/diagnostics.hpp"
#include "priorsam/models.hpp"
#include "priorsam/sampling.hpp"
#include "test_util.hpp"

namespace {

using priorsam::LogLikelihoods;
using priorsam::ModelSpec;
using priorsam::ParameterView;
using priorsam_tests::same_bits;
namespace models = priorsam::models;

constexpr double kInf = std::numeric_limits<double>::infinity();

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double x, double mean, double var) {
  const double z = x - mean;
  return std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// Closed-form prior integrals for the conjugate Gaussian model, derived from
// the marginal x ~ N(prior_mean, prior_sd^2 + obs_sd^2/t) and the identity
// f^2 = (sqrt(t) / (2 obs_sd sqrt(pi))) * N(x; theta, obs_sd^2/(2t)).
struct GaussianClosedForm {
  double prior_mean, prior_var, obs_var, t, x;

  double f() const { return normal_pdf(x, prior_mean, prior_var + obs_var / t); }
  double f2() const {
    const double scale = std::sqrt(t) / (2.0 * std::sqrt(obs_var) * std::sqrt(std::numbers::pi));
    return scale * normal_pdf(x, prior_mean, prior_var + obs_var / (2.0 * t));
  }
  // Restricting to (-inf, a] multiplies by the CDF of the conjugate
  // posterior that the power of the likelihood induces (t for f, 2t for f^2).
  double fA(double a) const { return f() * power_cdf(a, t); }
  double f2A(double a) const { return f2() * power_cdf(a, 2.0 * t); }

  double power_cdf(double a, double teff) const {
    const double v = 1.0 / (1.0 / prior_var + teff / obs_var);
    const double m = v * (prior_mean / prior_var + teff * x / obs_var);
    return normal_cdf((a - m) / std::sqrt(v));
  }
};

TEST_CASE("conjugate gaussian posterior parameters") {
  SUBCASE("one unit-variance observation of 1 against a standard normal prior") {
    const ModelSpec m = models::make_gaussian_gaussian(0.0, 1.0, 1.0, 1.0, 1.0);
    CHECK((*m.posterior_mean)[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK((*m.posterior_variance)[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK((*m.posterior_cdf)(0.5, 0) == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("10^4 observations overwhelm the prior") {
    const ModelSpec m = models::make_gaussian_gaussian(0.0, 1.0, 1.0, 1e4, 1.0);
    CHECK((*m.posterior_mean)[0] == doctest::Approx(1e4 / 10001.0).epsilon(1e-12));
    CHECK((*m.posterior_variance)[0] == doctest::Approx(1.0 / 10001.0).epsilon(1e-12));
  }

  SUBCASE("a dominant prior pins the posterior to the prior mean") {
    const ModelSpec m = models::make_gaussian_gaussian(0.0, 0.01, 1.0, 1.0, 5.0);
    CHECK(std::abs((*m.posterior_mean)[0] - 0.0) < 0.001);
  }
}

TEST_CASE("beta-bernoulli model") {
  SUBCASE("no data leaves the flat prior untouched") {
    const ModelSpec m = models::make_beta_bernoulli(1.0, 1.0, 0, 0);
    for (const double v : {0.1, 0.5, 0.9}) {
      CHECK((*m.posterior_cdf)(v, 0) == doctest::Approx(v).epsilon(1e-12));
    }
    CHECK(m.log_likelihood(std::vector<double>{0.3}) == 0.0);
  }

  SUBCASE("two heads in two flips: posterior Beta(3, 1)") {
    const ModelSpec m = models::make_beta_bernoulli(1.0, 1.0, 2, 2);
    CHECK((*m.posterior_mean)[0] == doctest::Approx(0.75).epsilon(1e-15));
    for (const double v : {0.25, 0.5, 0.8}) {
      CHECK((*m.posterior_cdf)(v, 0) == doctest::Approx(v * v * v).epsilon(1e-10));
    }
    CHECK(m.log_likelihood(std::vector<double>{0.5}) ==
          doctest::Approx(2.0 * std::log(0.5)).epsilon(1e-15));
  }

  SUBCASE("impossible endpoints have zero likelihood") {
    const ModelSpec heads = models::make_beta_bernoulli(1.0, 1.0, 2, 3);
    CHECK(heads.log_likelihood(std::vector<double>{0.0}) == -kInf);
    CHECK(heads.log_likelihood(std::vector<double>{1.0}) == -kInf);
  }

  SUBCASE("successes above trials are rejected") {
    CHECK_THROWS_AS(models::make_beta_bernoulli(1.0, 1.0, 3, 2), std::invalid_argument);
    CHECK_THROWS_AS(models::make_beta_bernoulli(0.0, 1.0, 1, 2), std::invalid_argument);
  }
}

TEST_CASE("uniform prior with gaussian likelihood") {
  SUBCASE("a wide box reproduces the untruncated normal") {
    const ModelSpec m = models::make_uniform_gaussian(10.0, 1.0, 1.0, 1.0);
    CHECK((*m.posterior_mean)[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((*m.posterior_variance)[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK((*m.posterior_cdf)(1.0, 0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK((*m.posterior_cdf)(-10.0, 0) == 0.0);
    CHECK((*m.posterior_cdf)(10.0, 0) == 1.0);
  }

  SUBCASE("an observation far outside the support is unrepresentable") {
    CHECK_THROWS_AS(models::make_uniform_gaussian(1.0, 1.0, 100.0, 1e9),
                    std::invalid_argument);
  }
}

TEST_CASE("constant model") {
  const ModelSpec m3 = models::make_constant(3);
  CHECK(m3.dim == 3);
  CHECK(m3.log_likelihood(std::vector<double>{1.0, -2.0, 0.5}) == 0.0);
  CHECK_FALSE(m3.prior_density.has_value());

  const ModelSpec m1 = models::make_constant(1);
  CHECK(m1.prior_density.has_value());
  CHECK_THROWS_AS(models::make_constant(0), std::invalid_argument);
}

TEST_CASE("latent expansion") {
  SUBCASE("theta coordinates are bit-identical to the base model's draws") {
    const ModelSpec chain = models::make_gaussian_chain(1.0);
    REQUIRE(chain.dim == 2);
    REQUIRE(chain.marginal_dim == 1);
    const ModelSpec base = models::make_constant(1);
    const auto expanded = priorsam::draw_prior(chain, 1000, 77);
    const auto plain = priorsam::draw_prior(base, 1000, 77);
    for (std::size_t i = 0; i < 1000; ++i) {
      CHECK(expanded.draw(i)[0] == plain.draw(i)[0]);
    }
  }

  SUBCASE("a conditional likelihood that ignores the latent matches the base") {
    models::LatentExpansion exp;
    exp.id = "ignores-latent";
    exp.base = models::make_constant(1);
    exp.base.log_likelihood = [](ParameterView t) { return -t[0] * t[0]; };
    exp.sample_latent = [](const priorsam::CounterRng& rng, std::uint64_t i,
                           ParameterView, std::span<double> latent) {
      latent[0] = rng.uniform_open(i, 0);
    };
    exp.conditional_log_likelihood = [](ParameterView theta, ParameterView) {
      return -theta[0] * theta[0];
    };
    const ModelSpec expanded = models::expand_latent(std::move(exp));

    const auto wide = priorsam::lips(expanded, 2000, 13);
    const auto flat = priorsam::lips([] {
      ModelSpec m = models::make_constant(1);
      m.log_likelihood = [](ParameterView t) { return -t[0] * t[0]; };
      return m;
    }(), 2000, 13);
    CHECK(same_bits(wide.weights, flat.weights));
  }

  SUBCASE("a degenerate latent y = theta reproduces the base likelihood") {
    models::LatentExpansion exp;
    exp.id = "identity-latent";
    exp.base = models::make_constant(1);
    exp.sample_latent = [](const priorsam::CounterRng&, std::uint64_t,
                           ParameterView theta, std::span<double> latent) {
      latent[0] = theta[0];
    };
    exp.conditional_log_likelihood = [](ParameterView, ParameterView y) {
      return -y[0] * y[0];
    };
    const ModelSpec expanded = models::expand_latent(std::move(exp));

    const auto wide = priorsam::lips(expanded, 2000, 29);
    const auto flat = priorsam::lips([] {
      ModelSpec m = models::make_constant(1);
      m.log_likelihood = [](ParameterView t) { return -t[0] * t[0]; };
      return m;
    }(), 2000, 29);
    CHECK(same_bits(wide.weights, flat.weights));
  }

  SUBCASE("the gaussian chain agrees with its collapsed form") {
    // Marginalizing y | theta ~ N(theta, 1), x | y ~ N(y, 1) gives
    // x | theta ~ N(theta, 2): one observation with sd sqrt(2).
    const ModelSpec chain = models::make_gaussian_chain(1.0);
    const ModelSpec direct =
        models::make_gaussian_gaussian(0.0, 1.0, std::numbers::sqrt2, 1.0, 1.0);
    CHECK((*chain.posterior_mean)[0] ==
          doctest::Approx((*direct.posterior_mean)[0]).epsilon(1e-12));
    CHECK((*chain.posterior_variance)[0] ==
          doctest::Approx((*direct.posterior_variance)[0]).epsilon(1e-12));
    CHECK((*chain.posterior_mean)[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("quadrature oracle matches closed forms") {
  SUBCASE("constant likelihood integrates the prior") {
    const ModelSpec m = models::make_constant(1);
    const auto pi = models::oracle_prior_integrals(m, 0.3);
    CHECK(pi.f == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pi.f2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pi.fA == doctest::Approx(normal_cdf(0.3)).epsilon(1e-9));
    CHECK(pi.f2A == doctest::Approx(normal_cdf(0.3)).epsilon(1e-9));
  }

  SUBCASE("a flat likelihood equal to k scales as (k, k^2)") {
    ModelSpec m = models::make_constant(1);
    m.log_likelihood = [](ParameterView) { return std::log(2.5); };
    const auto pi = models::oracle_prior_integrals(m, -0.7);
    CHECK(pi.f == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(pi.f2 == doctest::Approx(6.25).epsilon(1e-9));
    CHECK(pi.fA == doctest::Approx(2.5 * normal_cdf(-0.7)).epsilon(1e-9));
    CHECK(pi.f2A == doctest::Approx(6.25 * normal_cdf(-0.7)).epsilon(1e-9));
  }

  SUBCASE("gaussian-gaussian, one observation") {
    const GaussianClosedForm cf{0.0, 1.0, 1.0, 1.0, 1.0};
    const ModelSpec m = models::make_gaussian_gaussian(0.0, 1.0, 1.0, 1.0, 1.0);
    for (const double a : {-0.5, 0.5, 2.0}) {
      const auto pi = models::oracle_prior_integrals(m, a);
      CHECK(pi.f == doctest::Approx(cf.f()).epsilon(1e-7));
      CHECK(pi.f2 == doctest::Approx(cf.f2()).epsilon(1e-7));
      CHECK(pi.fA == doctest::Approx(cf.fA(a)).epsilon(1e-7));
      CHECK(pi.f2A == doctest::Approx(cf.f2A(a)).epsilon(1e-7));
    }
  }

  SUBCASE("gaussian-gaussian, high information") {
    const GaussianClosedForm cf{0.0, 1.0, 1.0, 1e4, 1.0};
    const ModelSpec m = models::make_gaussian_gaussian(0.0, 1.0, 1.0, 1e4, 1.0);
    const auto pi = models::oracle_prior_integrals(m, 1.0);
    CHECK(pi.f == doctest::Approx(cf.f()).epsilon(1e-7));
    CHECK(pi.f2 == doctest::Approx(cf.f2()).epsilon(1e-7));
    CHECK(pi.fA == doctest::Approx(cf.fA(1.0)).epsilon(1e-7));
  }

  SUBCASE("beta-bernoulli against exact beta functions") {
    // f = B(1+s, 1+t-s), f2 = B(1+2s, 1+2(t-s)) under the flat prior; the
    // half-line pieces at a = 0.5 are polynomial integrals done by hand.
    const ModelSpec m = models::make_beta_bernoulli(1.0, 1.0, 2, 3);
    const auto pi = models::oracle_prior_integrals(m, 0.5);
    CHECK(pi.f == doctest::Approx(beta_fn(3.0, 2.0)).epsilon(1e-8));
    CHECK(pi.f == doctest::Approx(1.0 / 12.0).epsilon(1e-8));
    CHECK(pi.f2 == doctest::Approx(1.0 / 105.0).epsilon(1e-8));
    CHECK(pi.fA == doctest::Approx(5.0 / 192.0).epsilon(1e-8));
    CHECK(pi.f2A == doctest::Approx(29.0 / 13440.0).epsilon(1e-8));
  }

  SUBCASE("half-lines outside the support clip to nothing or everything") {
    const ModelSpec m = models::make_beta_bernoulli(1.0, 1.0, 1, 1);
    const auto below = models::oracle_prior_integrals(m, -1.0);
    CHECK(below.fA == 0.0);
    CHECK(below.f2A == 0.0);
    const auto above = models::oracle_prior_integrals(m, 2.0);
    CHECK(above.fA == doctest::Approx(above.f).epsilon(1e-12));
    CHECK(above.f2A == doctest::Approx(above.f2).epsilon(1e-12));
  }

  SUBCASE("cauchy-schwarz and monotonicity invariants") {
    const std::vector<ModelSpec> specs = [] {
      std::vector<ModelSpec> v;
      v.push_back(models::make_gaussian_gaussian(0.0, 1.0, 1.0, 1.0, 1.0));
      v.push_back(models::make_gaussian_gaussian(-1.0, 2.0, 0.5, 10.0, 0.3));
      v.push_back(models::make_beta_bernoulli(2.0, 1.5, 3, 7));
      v.push_back(models::make_uniform_gaussian(4.0, 1.0, 3.0, 0.5));
      v.push_back(models::make_constant(1));
      return v;
    }();
    for (const auto& m : specs) {
      for (const double a : {-0.5, 0.1, 0.6}) {
        const auto pi = models::oracle_prior_integrals(m, a);
        // Jensen against the prior; the constant model sits exactly on the
        // equality boundary, so quadrature rounding gets a few ulps of slack.
        CHECK(pi.f2 >= pi.f * pi.f * (1.0 - 1e-12));
        CHECK(pi.fA >= 0.0);
        CHECK(pi.f2A >= 0.0);
        CHECK(pi.fA <= pi.f * (1.0 + 1e-12));
        CHECK(pi.f2A <= pi.f2 * (1.0 + 1e-12));
      }
    }
  }

  SUBCASE("the quadrature route agrees with the conjugate posterior CDF") {
    // fA / f is the posterior probability of the half-line; the analytic
    // posteriors provide the same number through an unrelated code path.
    const std::vector<ModelSpec> specs = [] {
      std::vector<ModelSpec> v;
      v.push_back(models::make_gaussian_gaussian(0.0, 1.0, 1.0, 1.0, 1.0));
      v.push_back(models::make_beta_bernoulli(1.0, 1.0, 2, 2));
      v.push_back(models::make_uniform_gaussian(3.0, 1.0, 2.0, 0.4));
      return v;
    }();
    for (const auto& m : specs) {
      for (const double a : {0.2, 0.5, 0.9}) {
        const auto pi = models::oracle_prior_integrals(m, a);
        CHECK(pi.fA / pi.f == doctest::Approx((*m.posterior_cdf)(a, 0)).epsilon(1e-7));
      }
    }
  }

  SUBCASE("the oracle requires a one-dimensional prior density") {
    CHECK_THROWS_AS(models::oracle_prior_integrals(models::make_constant(2)),
                    std::invalid_argument);
    ModelSpec stripped = models::make_constant(1);
    stripped.prior_density.reset();
    CHECK_THROWS_AS(models::oracle_prior_integrals(stripped), std::invalid_argument);
  }
}

TEST_CASE("model registry") {
  SUBCASE("ids are stable and complete") {
    const auto ids = models::model_ids();
    const std::vector<std::string> expected{"gaussian-gaussian", "beta-bernoulli",
                                            "uniform-gaussian", "gaussian-chain",
                                            "constant"};
    CHECK(ids == expected);
  }

  SUBCASE("defaults match the documented constructors") {
    const ModelSpec m = models::make_model("gaussian-gaussian", {});
    const ModelSpec direct = models::make_gaussian_gaussian(0.0, 1.0, 1.0, 1.0, 1.0);
    CHECK((*m.posterior_mean)[0] == (*direct.posterior_mean)[0]);
    CHECK((*m.posterior_variance)[0] == (*direct.posterior_variance)[0]);
  }

  SUBCASE("parameters map by key") {
    const ModelSpec m = models::make_model(
        "gaussian-gaussian", {{"prior-mean", 1.0}, {"t", 100.0}, {"x", 2.0}});
    const ModelSpec direct = models::make_gaussian_gaussian(1.0, 1.0, 1.0, 100.0, 2.0);
    CHECK((*m.posterior_mean)[0] == (*direct.posterior_mean)[0]);
  }

  SUBCASE("unknown ids and keys are rejected loudly") {
    CHECK_THROWS_AS(models::make_model("no-such-model", {}), std::invalid_argument);
    try {
      models::make_model("constant", {{"dmi", 2.0}});
      FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("dmi") != std::string::npos);
    }
  }

  SUBCASE("count parameters must be nonnegative integers") {
    CHECK_THROWS_AS(models::make_model("beta-bernoulli", {{"successes", 2.5}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(models::make_model("beta-bernoulli", {{"trials", -1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(models::make_model("constant", {{"dim", 0.5}}),
                    std::invalid_argument);
  }
}

TEST_CASE("lips tracks every bundled analytic posterior") {
  // One KS gate per model at n = 10^5. The reference CDFs come from
  // conjugacy, not from the sampler.
  const std::vector<std::pair<std::string, std::map<std::string, double>>> cases{
      {"gaussian-gaussian", {{"x", 1.0}}},
      {"beta-bernoulli", {{"successes", 2.0}, {"trials", 2.0}}},
      {"uniform-gaussian", {{"half-width", 10.0}, {"x", 1.0}}},
      {"gaussian-chain", {{"x", 1.0}}},
      {"constant", {}},
  };
  for (const auto& [id, params] : cases) {
    CAPTURE(id);
    const ModelSpec m = models::make_model(id, params);
    const auto post = priorsam::lips(m, 100000, 31);
    const double ks = priorsam::diagnostics::ks_distance(
        post, [&](double v) { return (*m.posterior_cdf)(v, 0); }, 0);
    CHECK(ks < 0.05);
  }
}

}  // namespace
