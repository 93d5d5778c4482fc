// Copyright 2026 The schedq Authors.
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

#ifndef SCHEDQ_RANDOM_HPP_
#define SCHEDQ_RANDOM_HPP_

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace schedq {

// 64-bit FNV-1a. Stable across platforms; used for stream keys and checksums.
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

std::uint64_t splitmix64(std::uint64_t x);

// A reproducible source of randomness owned by one caller.
//
// Uniforms are produced from the raw 64-bit words with a fixed conversion, so
// a given seed yields the same doubles on every standard library.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed);

  // Stream for replication `index` of the experiment cell `key`. Streams for
  // distinct (seed, key, index) triples are seeded from disjoint expansions.
  static RandomStream derive(std::uint64_t master_seed, std::string_view key,
                             std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return engine_(); }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Exponential with unit mean.
  double exponential();

 private:
  std::mt19937_64 engine_;
};

}  // namespace schedq

#endif  // SCHEDQ_RANDOM_HPP_
