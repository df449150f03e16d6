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

#ifndef PRIORSAM_RNG_HPP
#define PRIORSAM_RNG_HPP

#include <array>
#include <cstdint>

namespace priorsam {

/// Philox4x32-10 counter-based generator.
///
/// Every 128-bit counter block maps independently to 128 bits of output
/// under a 64-bit key, so random values are addressable by (seed, stream,
/// element, word) with no sequential state. That is what makes sharded
/// prior sampling bit-identical to serial sampling: draw i owns its counter
/// block no matter which worker produces it.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept;
};

/// Fixed stream ids. The layout is part of the reproducibility contract:
/// outputs are a pure function of (seed, stream, element, word), never of
/// shard or thread count.
namespace stream {
inline constexpr std::uint32_t kPrior = 1;     ///< prior draws (one stream per run)
inline constexpr std::uint32_t kResample = 2;  ///< multinomial resampling uniforms
inline constexpr std::uint32_t kLatent = 3;    ///< latent-variable draws in expanded models
inline constexpr std::uint32_t kDerive = 0xffffffffu;  ///< reserved for seed derivation
}  // namespace stream

/// Labels for hierarchical seed derivation (see derive_seed).
namespace purpose {
inline constexpr std::uint32_t kReplication = 1;
inline constexpr std::uint32_t kSeedSweep = 2;
}  // namespace purpose

/// A (seed, stream) handle over the Philox generator. Stateless: callers
/// address values by element index and word index.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint32_t stream) noexcept
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint32_t stream() const noexcept { return stream_; }

  /// 64-bit word `word_index` of element `element`. Distinct (element, word)
  /// pairs are statistically independent.
  std::uint64_t word(std::uint64_t element, std::uint32_t word_index) const noexcept;

  /// Uniform double on the open interval (0, 1): ((u >> 11) + 0.5) * 2^-53.
  /// Never returns 0 or 1, so quantile transforms stay finite.
  double uniform_open(std::uint64_t element, std::uint32_t word_index) const noexcept {
    const std::uint64_t u = word(element, word_index);
    return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
  std::uint32_t stream_;
};

/// Derives a child seed from (seed, purpose, index) through one Philox block
/// on the reserved derivation stream. Used to hand independent full streams
/// to replicates and seed sweeps.
std::uint64_t derive_seed(std::uint64_t seed, std::uint32_t purpose,
                          std::uint64_t index) noexcept;

}  // namespace priorsam

#endif  // PRIORSAM_RNG_HPP
