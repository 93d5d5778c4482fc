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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

namespace schedq {
namespace {

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Fnv1a, ChainsLikeConcatenation) {
  EXPECT_EQ(fnv1a64("bar", fnv1a64("foo")), fnv1a64("foobar"));
}

TEST(RandomStream, DeriveIsReproducible) {
  RandomStream a = RandomStream::derive(7, "cell", 3);
  RandomStream b = RandomStream::derive(7, "cell", 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(RandomStream, DistinctTriplesGiveDistinctStreams) {
  std::set<std::uint64_t> first;
  for (std::uint64_t seed : {1ULL, 2ULL})
    for (const char* key : {"a", "b"})
      for (std::uint64_t idx = 0; idx < 50; ++idx)
        first.insert(RandomStream::derive(seed, key, idx)());
  EXPECT_EQ(first.size(), 200u);
}

TEST(RandomStream, UniformStaysInsideOpenInterval) {
  RandomStream s(11);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(RandomStream, ExponentialHasUnitMean) {
  RandomStream s(12);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += s.exponential();
  EXPECT_NEAR(sum / n, 1.0, 4.0 / std::sqrt(n));
}

}  // namespace
}  // namespace schedq
