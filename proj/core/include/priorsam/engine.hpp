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

#ifndef PRIORSAM_ENGINE_HPP
#define PRIORSAM_ENGINE_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "priorsam/model.hpp"
#include "priorsam/types.hpp"

namespace priorsam::engine {

/// Contiguous index range assigned to one worker.
struct Shard {
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
};

/// Partition of [0, n_total) into contiguous shards. Shard boundaries affect
/// only scheduling: every random value is keyed by its absolute draw index,
/// so outputs are independent of the partition.
struct ShardPlan {
  std::uint64_t n_total = 0;
  std::vector<Shard> shards;

  /// Splits n_total into at most shard_count near-equal contiguous blocks
  /// (fewer when shard_count > n_total, so no shard is empty).
  static ShardPlan make(std::uint64_t n_total, std::size_t shard_count);
};

/// Worker cap: min(hardware_concurrency, PRIORSAM_THREADS if set). At least 1.
std::size_t max_workers();

/// Fixed-shape pairwise summation: the reduction tree depends only on the
/// element count (split at n/2, sequential runs of up to 64 at the leaves),
/// never on thread count. Same index order in, same bits out.
double reduce_sum(std::span<const double> values);

/// Same tree as reduce_sum with independent subtrees evaluated concurrently.
/// Bit-identical to the serial call by construction.
double reduce_sum_parallel(std::span<const double> values, std::size_t workers);

/// Draws n samples from the model prior and evaluates their log-likelihoods,
/// fanned out over `shards` workers (capped by max_workers()). Output is
/// bit-identical for every shard count given the same seed.
///
/// Throws InvalidLogLikelihoodError (with the draw index) if the model
/// evaluator returns NaN or +inf, and ShardFailureError if a worker fails.
std::pair<DrawBatch, LogLikelihoods> run_sharded(const ModelSpec& model,
                                                 std::uint64_t n,
                                                 std::size_t shards,
                                                 std::uint64_t seed);

/// The sampling half of run_sharded: draws only, no likelihood evaluation.
DrawBatch sample_sharded(const ModelSpec& model, std::uint64_t n,
                         std::size_t shards, std::uint64_t seed);

}  // namespace priorsam::engine

#endif  // PRIORSAM_ENGINE_HPP
