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

#ifndef PRIORSAM_MODEL_HPP
#define PRIORSAM_MODEL_HPP

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "priorsam/rng.hpp"
#include "priorsam/types.hpp"

namespace priorsam {

/// Prior density description for 1-D models, used only by the quadrature
/// oracle. `split_points` are interior locations (likelihood peaks) where
/// adaptive quadrature should cut the domain.
struct PriorDensity1D {
  std::function<double(double)> pdf;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::vector<double> split_points;
};

/// A sampling problem: how to draw from the prior and how to score a draw.
///
/// sample_draw must be a pure function of (rng, index): draw `index` is the
/// same no matter the order or the thread it is generated on. Coordinates
/// within a draw consume rng words (index, 0), (index, 1), ... of the prior
/// stream; models needing auxiliary streams derive them from rng.seed().
///
/// log_likelihood must be deterministic and pure, returning values in
/// [-inf, +inf); the observation is baked in. Anything proportional to the
/// likelihood works: constant offsets in log scale cancel downstream.
struct ModelSpec {
  std::string id;
  std::size_t dim = 1;

  /// Posterior queries address the first marginal_dim coordinates; any
  /// further coordinates are latent and are marginalized by being ignored.
  std::size_t marginal_dim = 1;

  std::function<void(const CounterRng& rng, std::uint64_t index,
                     std::span<double> out)>
      sample_draw;

  std::function<double(ParameterView)> log_likelihood;

  /// Analytic posterior CDF of a marginal coordinate, when known:
  /// (value, coordinate) -> [0, 1]. Used by tests and KS diagnostics.
  std::optional<std::function<double(double, std::size_t)>> posterior_cdf;

  /// Analytic marginal posterior moments, when known.
  std::optional<std::vector<double>> posterior_mean;
  std::optional<std::vector<double>> posterior_variance;

  /// Prior density for the 1-D quadrature oracle, when available.
  std::optional<PriorDensity1D> prior_density;
};

}  // namespace priorsam

#endif  // PRIORSAM_MODEL_HPP
