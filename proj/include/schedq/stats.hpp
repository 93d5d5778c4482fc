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

#ifndef SCHEDQ_STATS_HPP_
#define SCHEDQ_STATS_HPP_

#include <cstddef>
#include <functional>
#include <vector>

namespace schedq {

struct Summary {
  std::size_t n;
  double mean;
  double sd;
  double mean_ci_lo;  // normal 95% interval for the mean
  double mean_ci_hi;
  double median;
  double q1;
  double q3;
  double median_ci_lo;  // distribution-free 95% order-statistic interval
  double median_ci_hi;
};

// Throws InvalidArgument for fewer than two samples.
Summary summarize(std::vector<double> samples);

// Linear interpolation between order statistics (h = (n - 1) p).
double quantile_sorted(const std::vector<double>& sorted, double p);

struct VarianceEstimate {
  double value;  // unbiased sample variance
  double ci_lo;  // asymptotic 95% interval from the fourth central moment
  double ci_hi;
};

VarianceEstimate sample_variance(const std::vector<double>& samples);

struct CovarianceEstimate {
  double value;
  double ci_lo;
  double ci_hi;
};

CovarianceEstimate sample_covariance(const std::vector<double>& x,
                                     const std::vector<double>& y);

struct KsResult {
  double statistic;
  double p_value;
};

// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

KsResult ks_one_sample(std::vector<double> samples,
                       const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace schedq

#endif  // SCHEDQ_STATS_HPP_
