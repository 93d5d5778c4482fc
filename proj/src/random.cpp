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

#include "schedq/random.hpp"

#include <array>
#include <cmath>

namespace schedq {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 seeded_engine(std::uint64_t a, std::uint64_t b,
                              std::uint64_t c) {
  // Keyed expansion of three 64-bit words into eight 32-bit seed words.
  std::uint64_t state = splitmix64(a) ^ splitmix64(b ^ 0x6a09e667f3bcc909ULL) ^
                        splitmix64(c + 0xbb67ae8584caa73bULL);
  std::array<std::uint32_t, 8> words{};
  for (std::size_t i = 0; i < words.size(); i += 2) {
    state = splitmix64(state);
    words[i] = static_cast<std::uint32_t>(state);
    words[i + 1] = static_cast<std::uint32_t>(state >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed)
    : engine_(seeded_engine(seed, 0, 0)) {}

RandomStream RandomStream::derive(std::uint64_t master_seed,
                                  std::string_view key, std::uint64_t index) {
  RandomStream s(0);
  s.engine_ = seeded_engine(master_seed, fnv1a64(key), index + 1);
  return s;
}

double RandomStream::exponential() { return -std::log(uniform()); }

}  // namespace schedq
