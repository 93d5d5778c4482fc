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

#include "schedq/stats.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "goldens.hpp"
#include "schedq/error.hpp"

namespace schedq {
namespace {

TEST(Summarize, SmallExample) {
  const Summary s = summarize({4.0, 1.0, 3.0, 2.0});
  EXPECT_EQ(s.n, 4u);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.sd, std::sqrt(5.0 / 3.0), 1e-15);
  EXPECT_DOUBLE_EQ(s.median, 2.5);
  EXPECT_DOUBLE_EQ(s.q1, 1.75);
  EXPECT_DOUBLE_EQ(s.q3, 3.25);
  // n = 4 is too small for a 95% order-statistic interval: full range.
  EXPECT_EQ(s.median_ci_lo, 1.0);
  EXPECT_EQ(s.median_ci_hi, 4.0);
  EXPECT_LT(s.mean_ci_lo, s.mean);
  EXPECT_GT(s.mean_ci_hi, s.mean);
  EXPECT_THROW(summarize({1.0}), InvalidArgument);
}

TEST(Summarize, MedianIntervalOrderStatistics) {
  // For n = 100 the interval is [x_(40), x_(61)].
  std::vector<double> x(100);
  for (int i = 0; i < 100; ++i) x[i] = 100 - i;
  const Summary s = summarize(x);
  EXPECT_EQ(s.median_ci_lo, 40.0);
  EXPECT_EQ(s.median_ci_hi, 61.0);
}

TEST(Summarize, MedianIntervalCoverage) {
  std::mt19937_64 rng(12);
  std::exponential_distribution<double> expo(1.0);
  int covered = 0;
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> x(50);
    for (auto& v : x) v = expo(rng);
    const Summary s = summarize(x);
    covered += s.median_ci_lo <= std::log(2.0) && std::log(2.0) <= s.median_ci_hi;
  }
  EXPECT_GE(covered, 0.93 * trials);
}

TEST(Quantile, LinearInterpolation) {
  const std::vector<double> v{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile_sorted({7.0}, 0.3), 7.0);
  EXPECT_THROW(quantile_sorted({}, 0.5), InvalidArgument);
}

TEST(Kolmogorov, SurvivalGoldens) {
  EXPECT_NEAR(kolmogorov_survival(0.5), goldens::kKolmogorovQ0_5, 1e-14);
  EXPECT_NEAR(kolmogorov_survival(1.0), goldens::kKolmogorovQ1, 1e-14);
  EXPECT_NEAR(kolmogorov_survival(1.36), goldens::kKolmogorovQ1_36, 1e-14);
  EXPECT_NEAR(kolmogorov_survival(2.0), goldens::kKolmogorovQ2, 1e-14);
  EXPECT_EQ(kolmogorov_survival(0.0), 1.0);
  EXPECT_EQ(kolmogorov_survival(-1.0), 1.0);
}

TEST(Kolmogorov, ContinuousAcrossBranchPoint) {
  EXPECT_NEAR(kolmogorov_survival(1.0 - 1e-12), kolmogorov_survival(1.0), 1e-10);
  double prev = 1.0;
  for (double l = 0.05; l < 4.0; l += 0.05) {
    const double v = kolmogorov_survival(l);
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(Ks, OneSampleEdgeCases) {
  const KsResult one = ks_one_sample({0.5}, [](double x) { return x; });
  EXPECT_DOUBLE_EQ(one.statistic, 0.5);
  const KsResult grid = ks_one_sample({0.125, 0.375, 0.625, 0.875}, [](double x) { return x; });
  EXPECT_DOUBLE_EQ(grid.statistic, 0.125);
  EXPECT_THROW(ks_one_sample({}, [](double x) { return x; }), InvalidArgument);
}

TEST(Ks, UniformSampleAccepted) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(20000);
  for (auto& v : x) v = u(rng);
  EXPECT_GT(ks_one_sample(x, [](double t) { return t; }).p_value, 0.001);
  std::vector<double> shifted = x;
  for (auto& v : shifted) v = v * 0.95;
  EXPECT_LT(ks_one_sample(shifted, [](double t) { return std::clamp(t, 0.0, 1.0); }).p_value, 1e-6);
}

TEST(Ks, TwoSample) {
  const KsResult same = ks_two_sample({1, 2, 3}, {1, 2, 3});
  EXPECT_EQ(same.statistic, 0.0);
  EXPECT_EQ(same.p_value, 1.0);
  const KsResult disjoint = ks_two_sample({1, 2, 3}, {4, 5, 6});
  EXPECT_EQ(disjoint.statistic, 1.0);
  // Ties across the samples are stepped together.
  EXPECT_DOUBLE_EQ(ks_two_sample({1, 1, 2}, {1, 2, 2}).statistic, 1.0 / 3.0);
  EXPECT_THROW(ks_two_sample({}, {1.0}), InvalidArgument);
}

TEST(Variance, ExampleAndCoverage) {
  const VarianceEstimate v = sample_variance({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(v.value, 5.0 / 3.0);
  EXPECT_LE(v.ci_lo, v.value);
  EXPECT_GE(v.ci_hi, v.value);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 2.0);
  int covered = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> x(400);
    for (auto& s : x) s = g(rng);
    const VarianceEstimate e = sample_variance(x);
    covered += e.ci_lo <= 4.0 && 4.0 <= e.ci_hi;
  }
  EXPECT_GE(covered, 920);
}

TEST(Covariance, ExampleAndValidation) {
  const CovarianceEstimate c = sample_covariance({1, 2, 3}, {2, 4, 6});
  EXPECT_DOUBLE_EQ(c.value, 2.0);
  EXPECT_DOUBLE_EQ(sample_covariance({1, 2, 3}, {3, 2, 1}).value, -1.0);
  EXPECT_THROW(sample_covariance({1, 2}, {1}), InvalidArgument);
  EXPECT_THROW(sample_covariance({1}, {1}), InvalidArgument);
}

}  // namespace
}  // namespace schedq
