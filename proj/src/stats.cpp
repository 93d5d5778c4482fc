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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/distributions/binomial.hpp>

#include "schedq/error.hpp"

namespace schedq {
namespace {

constexpr double kZ95 = 1.959963984540054;

double mean_of(const std::vector<double>& x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Mean and a normal 95% interval for i.i.d. terms z.
std::pair<double, double> mean_and_halfwidth(const std::vector<double>& z) {
  const double m = mean_of(z);
  double ss = 0.0;
  for (double v : z) ss += (v - m) * (v - m);
  const double n = static_cast<double>(z.size());
  return {m, kZ95 * std::sqrt(ss / (n - 1.0) / n)};
}

void need_two(std::size_t n) {
  if (n < 2) throw InvalidArgument("at least two samples are required");
}

}  // namespace

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw InvalidArgument("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Summary summarize(std::vector<double> samples) {
  need_two(samples.size());
  std::sort(samples.begin(), samples.end());
  Summary s{};
  s.n = samples.size();
  const auto [m, half] = mean_and_halfwidth(samples);
  s.mean = m;
  double ss = 0.0;
  for (double v : samples) ss += (v - m) * (v - m);
  s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  s.mean_ci_lo = m - half;
  s.mean_ci_hi = m + half;
  s.median = quantile_sorted(samples, 0.5);
  s.q1 = quantile_sorted(samples, 0.25);
  s.q3 = quantile_sorted(samples, 0.75);

  // Largest l with P(Bin(n, 1/2) <= l - 1) <= 0.025; then
  // [x_(l), x_(n-l+1)] covers the median with probability >= 95%.
  const boost::math::binomial_distribution<double> bin(static_cast<double>(s.n), 0.5);
  std::size_t lo = 0, hi = s.n / 2;  // candidate l - 1 in [lo, hi]
  if (boost::math::cdf(bin, 0.0) > 0.025) {
    s.median_ci_lo = samples.front();
    s.median_ci_hi = samples.back();
  } else {
    while (lo < hi) {
      const std::size_t mid = (lo + hi + 1) / 2;
      if (boost::math::cdf(bin, static_cast<double>(mid)) <= 0.025) lo = mid; else hi = mid - 1;
    }
    const std::size_t l = lo + 1;  // 1-based order statistic
    s.median_ci_lo = samples[l - 1];
    s.median_ci_hi = samples[s.n - l];
  }
  return s;
}

VarianceEstimate sample_variance(const std::vector<double>& samples) {
  need_two(samples.size());
  const double m = mean_of(samples);
  std::vector<double> z;
  z.reserve(samples.size());
  for (double v : samples) z.push_back((v - m) * (v - m));
  const double n = static_cast<double>(samples.size());
  const auto [mz, half] = mean_and_halfwidth(z);
  const double value = mz * n / (n - 1.0);
  return {value, value - half, value + half};
}

CovarianceEstimate sample_covariance(const std::vector<double>& x,
                                     const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("covariance of unequal samples");
  need_two(x.size());
  const double mx = mean_of(x), my = mean_of(y);
  std::vector<double> z;
  z.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z.push_back((x[i] - mx) * (y[i] - my));
  const double n = static_cast<double>(x.size());
  const auto [mz, half] = mean_and_halfwidth(z);
  const double value = mz * n / (n - 1.0);
  return {value, value - half, value + half};
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.0) {
    // P(K <= l) = sqrt(2 pi)/l sum_k exp(-(2k-1)^2 pi^2 / (8 l^2)).
    const double pi = std::numbers::pi;
    double acc = 0.0;
    for (int k = 1; k < 50; ++k) {
      const double t = std::exp(-(2.0 * k - 1) * (2.0 * k - 1) * pi * pi /
                                (8.0 * lambda * lambda));
      acc += t;
      if (t < 1e-17 * acc) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * acc, 0.0, 1.0);
  }
  double acc = 0.0;
  for (int k = 1; k < 100; ++k) {
    const double t = std::exp(-2.0 * k * k * lambda * lambda);
    acc += (k % 2 == 1) ? t : -t;
    if (t < 1e-17) break;
  }
  return std::clamp(2.0 * acc, 0.0, 1.0);
}

KsResult ks_one_sample(std::vector<double> samples,
                       const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InvalidArgument("KS test of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, kolmogorov_survival(std::sqrt(n) * d)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("KS test of an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, kolmogorov_survival(std::sqrt(na * nb / (na + nb)) * d)};
}

}  // namespace schedq
