// Copyright 2026 The RMBC Authors
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

#ifndef RMBC_RANDOM_HPP_
#define RMBC_RANDOM_HPP_

#include <array>
#include <cstdint>
#include <limits>

namespace rmbc
{

/// splitmix64 finalizer; a bijection on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x);

/// Philox4x64-10 block function (Salmon et al., SC'11).
using PhiloxCounter = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;
PhiloxCounter philox4x64_10(PhiloxCounter counter, PhiloxKey key);

/// Counter-based stream: the n-th output block is philox(n, key). Satisfies
/// UniformRandomBitGenerator. All sampling helpers below are implemented here
/// rather than through <random> distributions so that draws are identical on
/// every standard library.
class RandomStream
{
public:
  using result_type = std::uint64_t;

  explicit RandomStream(PhiloxKey key) : key_(key) {}

  /// Stream for (seed, substream index); distinct pairs never share a key.
  static RandomStream substream(std::uint64_t seed, std::uint64_t index);
  static RandomStream from_seed(std::uint64_t seed) { return substream(seed, 0); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, bound), bound > 0, without modulo bias.
  std::uint64_t uniform_index(std::uint64_t bound);
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();

private:
  PhiloxKey key_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rmbc

#endif  // RMBC_RANDOM_HPP_
