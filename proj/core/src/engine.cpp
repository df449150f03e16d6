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

#include "priorsam/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <future>
#include <limits>
#include <thread>

#include "priorsam/errors.hpp"

namespace priorsam::engine {

namespace {

constexpr std::size_t kLeafRun = 64;         // sequential run length at tree leaves
constexpr std::size_t kParallelGrain = 1u << 16;  // below this, recurse serially

double pairwise(const double* v, std::size_t n) {
  if (n <= kLeafRun) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise(v, half) + pairwise(v + half, n - half);
}

// Identical tree to pairwise(); independent subtrees may run on other
// threads, the combination order is fixed.
double pairwise_par(const double* v, std::size_t n, std::size_t workers) {
  if (workers <= 1 || n < kParallelGrain) return pairwise(v, n);
  const std::size_t half = n / 2;
  auto right = std::async(std::launch::async, pairwise_par, v + half, n - half,
                          workers / 2);
  const double left = pairwise_par(v, half, workers - workers / 2);
  return left + right.get();
}

}  // namespace

ShardPlan ShardPlan::make(std::uint64_t n_total, std::size_t shard_count) {
  ShardPlan plan;
  plan.n_total = n_total;
  const std::uint64_t count =
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(shard_count, n_total));
  plan.shards.reserve(count);
  const std::uint64_t base = n_total / count;
  const std::uint64_t extra = n_total % count;
  std::uint64_t offset = 0;
  for (std::uint64_t s = 0; s < count; ++s) {
    const std::uint64_t len = base + (s < extra ? 1 : 0);
    plan.shards.push_back({offset, len});
    offset += len;
  }
  return plan;
}

std::size_t max_workers() {
  std::size_t hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("PRIORSAM_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) hw = std::min<std::size_t>(hw, static_cast<std::size_t>(cap));
  }
  return hw;
}

double reduce_sum(std::span<const double> values) {
  return pairwise(values.data(), values.size());
}

double reduce_sum_parallel(std::span<const double> values, std::size_t workers) {
  return pairwise_par(values.data(), values.size(), std::max<std::size_t>(1, workers));
}

namespace {

std::pair<DrawBatch, LogLikelihoods> run_impl(const ModelSpec& model,
                                              std::uint64_t n,
                                              std::size_t shards,
                                              std::uint64_t seed,
                                              bool with_likelihood) {
  if (n == 0) throw std::invalid_argument("run_sharded: n must be >= 1");
  if (shards == 0) throw std::invalid_argument("run_sharded: shards must be >= 1");
  if (!model.sample_draw || (with_likelihood && !model.log_likelihood)) {
    throw std::invalid_argument("run_sharded: model is missing sample_draw or log_likelihood");
  }

  const ShardPlan plan = ShardPlan::make(n, shards);
  const std::size_t dim = model.dim;
  const CounterRng rng(seed, stream::kPrior);

  std::vector<double> coords(n * dim);
  std::vector<double> loglik(with_likelihood ? n : 0);

  // Workers own disjoint index ranges of the output buffers; the only shared
  // state is the shard queue cursor and the error slots.
  std::atomic<std::size_t> next_shard{0};
  std::vector<std::exception_ptr> errors(plan.shards.size());
  // First invalid log-likelihood by draw index, so the reported index does
  // not depend on thread interleaving.
  std::atomic<std::uint64_t> first_bad_index{~std::uint64_t{0}};
  std::vector<double> bad_values(plan.shards.size(),
                                 std::numeric_limits<double>::quiet_NaN());
  std::vector<std::uint64_t> bad_indices(plan.shards.size(), ~std::uint64_t{0});

  auto work = [&](std::size_t shard_id) {
    try {
      const Shard& shard = plan.shards[shard_id];
      for (std::uint64_t i = shard.offset; i < shard.offset + shard.length; ++i) {
        std::span<double> out(coords.data() + i * dim, dim);
        model.sample_draw(rng, i, out);
        if (!with_likelihood) continue;
        const double ll = model.log_likelihood(ParameterView(out.data(), dim));
        if (std::isnan(ll) || ll == std::numeric_limits<double>::infinity()) {
          if (bad_indices[shard_id] == ~std::uint64_t{0}) {
            bad_indices[shard_id] = i;
            bad_values[shard_id] = ll;
            std::uint64_t cur = first_bad_index.load();
            while (i < cur && !first_bad_index.compare_exchange_weak(cur, i)) {
            }
          }
          loglik[i] = std::numeric_limits<double>::quiet_NaN();
        } else {
          loglik[i] = ll;
        }
      }
    } catch (...) {
      errors[shard_id] = std::current_exception();
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(plan.shards.size(), max_workers());
  if (workers <= 1) {
    for (std::size_t s = 0; s < plan.shards.size(); ++s) work(s);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t s = next_shard.fetch_add(1);
          if (s >= plan.shards.size()) return;
          work(s);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  for (std::size_t s = 0; s < errors.size(); ++s) {
    if (errors[s]) {
      try {
        std::rethrow_exception(errors[s]);
      } catch (const std::exception& e) {
        throw ShardFailureError(s, e.what());
      }
    }
  }
  const std::uint64_t bad = first_bad_index.load();
  if (bad != ~std::uint64_t{0}) {
    double value = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t s = 0; s < bad_indices.size(); ++s) {
      if (bad_indices[s] == bad) value = bad_values[s];
    }
    throw InvalidLogLikelihoodError(bad, value);
  }

  DrawBatch batch(dim, std::move(coords), SeedInfo{seed, stream::kPrior});
  return {std::move(batch), LogLikelihoods{std::move(loglik)}};
}

}  // namespace

std::pair<DrawBatch, LogLikelihoods> run_sharded(const ModelSpec& model,
                                                 std::uint64_t n,
                                                 std::size_t shards,
                                                 std::uint64_t seed) {
  return run_impl(model, n, shards, seed, /*with_likelihood=*/true);
}

DrawBatch sample_sharded(const ModelSpec& model, std::uint64_t n,
                         std::size_t shards, std::uint64_t seed) {
  return run_impl(model, n, shards, seed, /*with_likelihood=*/false).first;
}

}  // namespace priorsam::engine
