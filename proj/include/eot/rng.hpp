/*
 * Copyright 2026 The eot Authors
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

#ifndef EOT_RNG_HPP
#define EOT_RNG_HPP

#include <cstdint>

namespace eot {

/// Identifies one reproducible random stream.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t replicate_index = 0;
};

// SplitMix64 finalizer (Steele, Lea, Flood 2014):
//   z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//   z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//   z =  z ^ (z >> 31)
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Combines two words into a new seed. Not symmetric: hash_combine(a, b) and
/// hash_combine(b, a) give different streams.
constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(mix64(a + 0x9e3779b97f4a7c15ULL) ^ (b * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
}

/// SplitMix64: state advances by the golden-ratio increment 0x9e3779b97f4a7c15
/// and each output is the mix64 finalizer of the new state.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}
  explicit constexpr SplitMix64(const SeedSpec& seed) noexcept
      : state_(hash_combine(seed.master_seed, seed.replicate_index)) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1]; safe as a log argument.
  double uniform_open_zero() noexcept {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace eot

#endif  // EOT_RNG_HPP
