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

#ifndef PRIORSAM_ERRORS_HPP
#define PRIORSAM_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace priorsam {

/// Every draw in the batch has zero likelihood. Weight normalization is
/// undefined; this signals a prior/likelihood mismatch and is never silently
/// replaced by a uniform fallback.
class TotalUnderflowError : public std::runtime_error {
 public:
  TotalUnderflowError()
      : std::runtime_error(
            "no draw has positive likelihood; the prior does not cover the "
            "data (all log-likelihoods are -inf)") {}
};

/// The LAPS copy budget would be exceeded.
class CopyExplosionError : public std::runtime_error {
 public:
  CopyExplosionError(std::uint64_t required_copies, std::uint64_t cap,
                     std::uint64_t bytes_required)
      : std::runtime_error("laps copy count " + std::to_string(required_copies) +
                           " exceeds cap " + std::to_string(cap) + " (would need ~" +
                           std::to_string(bytes_required / (1024 * 1024)) +
                           " MiB); reduce c or raise the cap"),
        required_copies_(required_copies),
        cap_(cap) {}

  std::uint64_t required_copies() const noexcept { return required_copies_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t required_copies_;
  std::uint64_t cap_;
};

/// A model evaluator produced NaN or +inf where an extended-real
/// log-likelihood in [-inf, +inf) was required.
class InvalidLogLikelihoodError : public std::runtime_error {
 public:
  InvalidLogLikelihoodError(std::uint64_t draw_index, double value)
      : std::runtime_error("log-likelihood at draw index " +
                           std::to_string(draw_index) + " is " +
                           std::to_string(value) +
                           "; expected a value in [-inf, +inf)"),
        draw_index_(draw_index) {}

  std::uint64_t draw_index() const noexcept { return draw_index_; }

 private:
  std::uint64_t draw_index_;
};

/// A function passed to posterior_expectation returned NaN for some draw.
class InvalidIntegrandError : public std::runtime_error {
 public:
  explicit InvalidIntegrandError(std::uint64_t draw_index)
      : std::runtime_error("integrand returned NaN at draw index " +
                           std::to_string(draw_index)),
        draw_index_(draw_index) {}

  std::uint64_t draw_index() const noexcept { return draw_index_; }

 private:
  std::uint64_t draw_index_;
};

/// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A worker thread failed; carries the shard id for diagnosis.
class ShardFailureError : public std::runtime_error {
 public:
  ShardFailureError(std::size_t shard, const std::string& what)
      : std::runtime_error("shard " + std::to_string(shard) + " failed: " + what),
        shard_(shard) {}

  std::size_t shard() const noexcept { return shard_; }

 private:
  std::size_t shard_;
};

}  // namespace priorsam

#endif  // PRIORSAM_ERRORS_HPP
