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

#ifndef SCHEDQ_TRAFFIC_HPP_
#define SCHEDQ_TRAFFIC_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "schedq/bernoulli_tail.hpp"
#include "schedq/perturbation.hpp"
#include "schedq/random.hpp"

namespace schedq {

inline constexpr double kDefaultPathEps = 1e-10;

struct Arrival {
  std::int64_t index;  // schedule slot i
  double time;         // i + u + xi_i
};

struct EarlyLate {
  std::int64_t early;
  std::int64_t late;
};

// One realization of the scheduled process observed on (t_lo, t_hi].
//
// Customers with slots near the window are sampled directly; customers far
// away are sampled only when they reach the window side they could affect
// (thinning), so that the expected number of customers missed on either side
// is at most eps / 2. Every sampled customer is kept, including those landing
// outside the window, which makes early/late counts exact for any t in
// [t_lo, t_hi].
class ArrivalPath {
 public:
  double u() const { return u_; }
  double t_lo() const { return t_lo_; }
  double t_hi() const { return t_hi_; }
  double eps() const { return eps_; }
  // Arrivals in (t_lo, t_hi], ordered by (time, index).
  const std::vector<Arrival>& entries() const { return entries_; }
  // Sampled customers landing outside the window.
  const std::vector<Arrival>& displaced() const { return displaced_; }

  // Arrivals in (t_lo, t]. Throws InvalidArgument outside [t_lo, t_hi].
  std::int64_t count(double t) const;
  // E(t) and L(t). Throws InvalidArgument outside [t_lo, t_hi].
  EarlyLate early_late(double t) const;
  // N(t) - t minus the right-hand side of the early/late decomposition;
  // identically 0. Needs 0 and t inside [t_lo, t_hi].
  std::int64_t decomposition_residual(double t) const;
  // #{i : 0 < i + u <= t} for t >= 0 (with the same rounding as above).
  static std::int64_t scheduled_in(double u, double t);

  void write_csv(std::ostream& os) const;

 private:
  friend ArrivalPath generate_path(const PerturbationModel&, double, double,
                                   std::optional<double>, RandomStream&, double);
  void check_time(double t) const;

  double u_ = 0.0;
  double t_lo_ = 0.0;
  double t_hi_ = 0.0;
  double eps_ = 0.0;
  std::vector<Arrival> entries_;
  std::vector<Arrival> displaced_;
};

// Draws u from the stream unless given. Throws InvalidArgument for an empty
// window, u outside (0, 1) or eps <= 0; NoFiniteTruncation if the tails are
// too heavy for eps within the 2^62 index range.
ArrivalPath generate_path(const PerturbationModel& model, double t_lo,
                          double t_hi, std::optional<double> u,
                          RandomStream& stream, double eps = kDefaultPathEps);

// Calls on_hit(k, d_k) for every k >= 0 in a realization of independent
// indicators with success probabilities prob(d_k), d_k = d0 + k, where prob
// is non-increasing and tail(d) bounds sum_{k: d_k >= d} prob(d_k).
// Enumeration stops once tail(d) <= eps.
void thin_indicators(const std::function<double(double)>& prob,
                     const std::function<double(double)>& tail, double d0,
                     double eps, RandomStream& stream,
                     const std::function<void(std::int64_t, double)>& on_hit);

// -sum_i P(i + xi + u in (0, 1]) P(i + xi + u in (n - 1, n]).
double conditional_cov(const PerturbationModel& model, double u, std::int64_t n,
                       double eps = kDefaultPathEps);

// -s + I(U <= s) + (E'(s) - L'(s)) - (E(0) - L(0)) with the four counts
// conditionally independent given U.
double sample_limit_rv(const PerturbationModel& model, double s,
                       RandomStream& stream, double eps = kDefaultPathEps);

// Success probabilities of L(0) = sum_{k>=1} I(-k + u + xi > 0) and
// E(0) = sum_{k>=0} I(k + u + xi <= 0) given U = u.
ParamSeq late_count_params(const PerturbationModel& model, double u);
ParamSeq early_count_params(const PerturbationModel& model, double u);

}  // namespace schedq

#endif  // SCHEDQ_TRAFFIC_HPP_
