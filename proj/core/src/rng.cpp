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

#include "priorsam/rng.hpp"

namespace priorsam {

namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline Philox4x32::Counter single_round(const Philox4x32::Counter& ctr,
                                        const Philox4x32::Key& key) noexcept {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * ctr[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * ctr[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) noexcept {
  // 10 rounds, key bumped by the Weyl constants between rounds.
  ctr = single_round(ctr, key);
  for (int round = 1; round < 10; ++round) {
    key[0] += kWeyl0;
    key[1] += kWeyl1;
    ctr = single_round(ctr, key);
  }
  return ctr;
}

std::uint64_t CounterRng::word(std::uint64_t element,
                               std::uint32_t word_index) const noexcept {
  // One Philox block yields two 64-bit words; word_index selects the half.
  const Philox4x32::Counter ctr = {
      static_cast<std::uint32_t>(element),
      static_cast<std::uint32_t>(element >> 32),
      word_index >> 1,
      stream_,
  };
  const Philox4x32::Key key = {
      static_cast<std::uint32_t>(seed_),
      static_cast<std::uint32_t>(seed_ >> 32),
  };
  const Philox4x32::Counter out = Philox4x32::block(ctr, key);
  if ((word_index & 1u) == 0) {
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  }
  return (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint32_t purpose,
                          std::uint64_t index) noexcept {
  const Philox4x32::Counter ctr = {
      static_cast<std::uint32_t>(index),
      static_cast<std::uint32_t>(index >> 32),
      purpose,
      stream::kDerive,
  };
  const Philox4x32::Key key = {
      static_cast<std::uint32_t>(seed),
      static_cast<std::uint32_t>(seed >> 32),
  };
  const Philox4x32::Counter out = Philox4x32::block(ctr, key);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

}  // namespace priorsam
