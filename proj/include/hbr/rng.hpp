/*
 * Copyright 2026 The hbr Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <array>
#include <concepts>
#include <cstdint>

#include "hbr/normal.hpp"

namespace hbr {

namespace detail {
__extension__ using uint128 = unsigned __int128;
}  // namespace detail

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Maps a 128-bit counter and a 64-bit key to 128
/// pseudo-random bits.
class Philox4x32 {
 public:
  using counter_type = std::array<std::uint32_t, 4>;
  using key_type = std::array<std::uint32_t, 2>;

  static constexpr counter_type apply(counter_type ctr, key_type key) noexcept {
    for (int round = 0; round < 10; ++round) {
      ctr = single_round(ctr, key);
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static constexpr counter_type single_round(const counter_type& c, const key_type& k) noexcept {
    const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

/// A reproducible stream of random numbers identified by (seed, substream).
///
/// The seed is the Philox key; the substream (typically a replication index)
/// fills the upper half of the counter and a running block index the lower
/// half. Streams with distinct (seed, substream) pairs never share a counter,
/// so replications can be generated in any order or on any thread.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t substream) noexcept
      : seed_(seed), substream_(substream) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t substream() const noexcept { return substream_; }

  /// Next 64 uniformly distributed bits.
  std::uint64_t next_u64() noexcept {
    if (cursor_ == 2) refill();
    return buffer_[cursor_++];
  }

  /// Uniform variate on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard Gaussian variate by inversion of the uniform.
  double gaussian() { return normal_quantile(uniform()); }

  /// Uniform integer in [0, bound), bound > 0, by Lemire's multiply-shift
  /// with rejection.
  std::uint64_t below(std::uint64_t bound) noexcept {
    for (;;) {
      const detail::uint128 m = static_cast<detail::uint128>(next_u64()) * bound;
      const auto low = static_cast<std::uint64_t>(m);
      if (low >= bound || low >= (-bound) % bound) {
        return static_cast<std::uint64_t>(m >> 64);
      }
    }
  }

 private:
  void refill() noexcept {
    const Philox4x32::counter_type ctr{
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(substream_), static_cast<std::uint32_t>(substream_ >> 32)};
    const Philox4x32::key_type key{static_cast<std::uint32_t>(seed_),
                                   static_cast<std::uint32_t>(seed_ >> 32)};
    const auto out = Philox4x32::apply(ctr, key);
    buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
    buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
    ++block_;
    cursor_ = 0;
  }

  std::uint64_t seed_;
  std::uint64_t substream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int cursor_ = 2;
};

/// Anything that hands out standard Gaussian draws; RngStream is the
/// production model, tests may substitute deterministic sources.
template <typename G>
concept GaussianSource = requires(G& g) {
  { g.gaussian() } -> std::convertible_to<double>;
};

}  // namespace hbr
