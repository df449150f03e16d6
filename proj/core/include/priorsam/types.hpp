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

#ifndef PRIORSAM_TYPES_HPP
#define PRIORSAM_TYPES_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "priorsam/rng.hpp"

namespace priorsam {

/// A parameter vector is a fixed-length view into a batch's coordinate
/// storage. Batches own the memory; views never outlive their batch.
using ParameterView = std::span<const double>;

/// RNG provenance of a batch: enough to regenerate it bit-identically.
struct SeedInfo {
  std::uint64_t seed = 0;
  std::uint32_t prior_stream = stream::kPrior;
};

/// n parameter vectors of dimension d, drawn IID from a prior.
/// Immutable after construction; safe to share across threads.
class DrawBatch {
 public:
  /// `coords` is row-major: draw i occupies [i*dim, (i+1)*dim).
  DrawBatch(std::size_t dim, std::vector<double> coords, SeedInfo seed_info);

  std::size_t size() const noexcept { return coords_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }

  ParameterView draw(std::size_t i) const noexcept {
    return ParameterView(coords_.data() + i * dim_, dim_);
  }

  std::span<const double> coords() const noexcept { return coords_; }
  const SeedInfo& seed_info() const noexcept { return seed_info_; }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  SeedInfo seed_info_;
};

/// Per-draw unnormalized log-likelihoods, aligned with DrawBatch order.
/// Entries live in [-inf, +inf): -inf marks zero likelihood, NaN and +inf
/// are rejected at evaluation time.
struct LogLikelihoods {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
};

/// Draws plus normalized importance weights. weights[i] == 0 exactly when
/// log_likelihoods[i] == -inf (up to underflow of very negative values);
/// the weights sum to 1 within 1e-12. log_normalizer keeps the log of the
/// likelihood sum so diagnostics can recover the unnormalized scale.
struct WeightedPosterior {
  DrawBatch draws;
  LogLikelihoods log_likelihoods;
  std::vector<double> weights;
  double log_normalizer = 0.0;

  std::size_t size() const noexcept { return weights.size(); }
  std::size_t dim() const noexcept { return draws.dim(); }
};

/// An equally-weighted bag of draws, each a copy of some member of the
/// source batch. source_indices records where each member came from.
struct UnweightedPosterior {
  std::size_t dim = 1;
  std::vector<double> coords;
  std::vector<std::uint64_t> source_indices;

  std::size_t size() const noexcept { return source_indices.size(); }

  ParameterView draw(std::size_t i) const noexcept {
    return ParameterView(coords.data() + i * dim, dim);
  }
};

}  // namespace priorsam

#endif  // PRIORSAM_TYPES_HPP
