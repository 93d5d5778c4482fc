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

#include "schedq/queue.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "schedq/error.hpp"

namespace schedq {
namespace {

const PerturbationModel kPareto = PerturbationModel::pareto2(0.25, 2.0, 0.25, 2.0);
const PerturbationModel kZero = PerturbationModel::zero();

// max(0, max over arrivals a_k <= t of the work arriving in [a_k, t] minus
// the capacity (t - a_k) / rho), i.e. the sup over s of the centered input.
double brute_force(const ArrivalPath& path, const std::vector<double>& v,
                   double rho, double t) {
  const auto& a = path.entries();
  double best = 0.0;
  for (std::size_t k = 0; k < a.size() && a[k].time <= t; ++k) {
    double work = 0.0;
    for (std::size_t i = k; i < a.size() && a[i].time <= t; ++i) work += v[i];
    best = std::max(best, work - (t - a[k].time) / rho);
  }
  return best;
}

TEST(Workload, DegenerateUnitJobs) {
  RandomStream rs(1);
  const ArrivalPath p = generate_path(kZero, 0.0, 20.0, 0.4, rs);
  std::vector<double> grid;
  for (double t = 0.0; t <= 20.0; t += 0.05) grid.push_back(t);
  const WorkloadTrace tr = workload(p, 1.0, grid, std::vector<double>(p.entries().size(), 1.0));
  for (double w : tr.after) EXPECT_DOUBLE_EQ(w, 1.0);
  for (double w : tr.values) {
    EXPECT_GE(w, 0.0);
    EXPECT_LE(w, 1.0 + 1e-12);
  }
}

TEST(Workload, SingleArrivalExample) {
  RandomStream rs(1);
  const ArrivalPath p = generate_path(kZero, 0.0, 1.2, 0.5, rs);
  ASSERT_EQ(p.entries().size(), 1u);
  const WorkloadTrace tr = workload(p, 1.0, {0.2, 0.5, 1.2}, {1.0});
  EXPECT_EQ(tr.values[0], 0.0);
  EXPECT_DOUBLE_EQ(tr.values[1], 1.0);  // right-continuous at the arrival
  EXPECT_NEAR(tr.values[2], 0.3, 1e-15);
  const WorkloadTrace half = workload(p, 0.5, {1.2}, {1.0});
  EXPECT_EQ(half.values[0], 0.0);  // drains at rate 2
}

TEST(Workload, RecursionMatchesMaxFormula) {
  for (std::uint64_t r = 0; r < 40; ++r) {
    RandomStream s = RandomStream::derive(21, "maxformula", r);
    const ArrivalPath p = generate_path(kPareto, 0.0, 10.0 + static_cast<double>(r % 5) * 10.0,
                                        std::nullopt, s);
    ASSERT_LE(p.entries().size(), 60u);
    const auto v = draw_services(ServiceKind::kExponential, p.entries().size(), s);
    std::vector<double> grid;
    for (double t = 0.0; t <= p.t_hi(); t += 0.37) grid.push_back(t);
    for (const Arrival& a : p.entries()) grid.push_back(a.time);
    for (double rho : {0.6, 1.0}) {
      const WorkloadTrace tr = workload(p, rho, grid, v);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        ASSERT_NEAR(tr.values[i], brute_force(p, v, rho, grid[i]), 1e-12);
      }
    }
  }
}

TEST(Workload, JumpsSlopesAndNonNegativity) {
  RandomStream s(22);
  const ArrivalPath p = generate_path(kPareto, 0.0, 200.0, std::nullopt, s);
  const auto v = draw_services(ServiceKind::kUniform, p.entries().size(), s);
  const double rho = 0.9;
  const WorkloadTrace tr = workload(p, rho, {}, v);
  for (std::size_t k = 1; k < tr.after.size(); ++k) {
    const double before = std::max(tr.after[k - 1] - (tr.epochs[k] - tr.epochs[k - 1]) / rho, 0.0);
    EXPECT_NEAR(tr.after[k] - before, v[k], 1e-12);
    EXPECT_LE(tr.epochs[k - 1], tr.epochs[k]);
  }
  for (double w : tr.after) EXPECT_GT(w, 0.0);
}

TEST(Workload, MonotoneInRho) {
  for (std::uint64_t r = 0; r < 10; ++r) {
    RandomStream s = RandomStream::derive(23, "rho-monotone", r);
    const ArrivalPath p = generate_path(kPareto, 0.0, 300.0, std::nullopt, s);
    const auto v = draw_services(ServiceKind::kExponential, p.entries().size(), s);
    std::vector<double> grid;
    for (double t = 0.0; t <= 300.0; t += 1.5) grid.push_back(t);
    const WorkloadTrace fast = workload(p, 0.8, grid, v);
    const WorkloadTrace slow = workload(p, 0.95, grid, v);
    for (std::size_t i = 0; i < grid.size(); ++i) ASSERT_LE(fast.values[i], slow.values[i]);
  }
}

TEST(Workload, Validation) {
  RandomStream s(1);
  const ArrivalPath p = generate_path(kZero, 0.0, 3.0, 0.5, s);
  const std::vector<double> v(3, 1.0);
  EXPECT_THROW(workload(p, 0.0, {}, v), InvalidArgument);
  EXPECT_THROW(workload(p, 1.5, {}, v), InvalidArgument);
  EXPECT_THROW(workload(p, 0.5, {4.0}, v), InvalidArgument);
  EXPECT_THROW(workload(p, 0.5, {}, {1.0}), InvalidArgument);
  EXPECT_THROW(parse_service("gamma"), InvalidArgument);
  EXPECT_EQ(parse_service("uniform"), ServiceKind::kUniform);
  EXPECT_EQ(service_name(ServiceKind::kExponential), "exponential");
  EXPECT_DOUBLE_EQ(service_variance(ServiceKind::kUniform), 1.0 / 12.0);
}

TEST(Workload, Csv) {
  RandomStream s(1);
  const ArrivalPath p = generate_path(kZero, 0.0, 1.2, 0.5, s);
  std::ostringstream os;
  workload(p, 1.0, {1.0}, {1.0}).write_csv(os);
  EXPECT_EQ(os.str(), "# rho=1\nt,W\n1,0.5\n");
}

TEST(Services, MeanOne) {
  RandomStream s(24);
  for (ServiceKind k : {ServiceKind::kDeterministic, ServiceKind::kExponential, ServiceKind::kUniform}) {
    const auto v = draw_services(k, 200000, s);
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    EXPECT_NEAR(m, 1.0, 4.0 * std::sqrt(service_variance(k) / 200000.0) + 1e-15);
    EXPECT_GT(*std::min_element(v.begin(), v.end()), 0.0);
  }
}

double brute_sup(const ArrivalPath& p, const std::vector<double>& v, double t) {
  std::vector<double> pts;
  for (const Arrival& a : p.entries()) if (a.time <= t) pts.push_back(a.time);
  for (double m = 1.0; m <= t; m += 1.0) pts.push_back(m);
  pts.push_back(t);
  double sup = 0.0;
  for (double s : pts) {
    double lam = 0.0, lam2 = 0.0;
    const auto n = static_cast<std::size_t>(p.count(s));
    for (std::size_t i = 0; i < n; ++i) lam += v[i];
    for (std::size_t i = 0; i < static_cast<std::size_t>(std::floor(s)); ++i) lam2 += v[i];
    sup = std::max(sup, std::abs(lam - lam2));
  }
  return sup / std::sqrt(t);
}

TEST(SupCenteredDiff, MatchesBruteForce) {
  for (std::uint64_t r = 0; r < 20; ++r) {
    RandomStream s = RandomStream::derive(25, "supdiff", r);
    const ArrivalPath p = generate_path(kPareto, 0.0, 60.0, std::nullopt, s);
    const auto v = draw_services(ServiceKind::kExponential,
                                 std::max<std::size_t>(p.entries().size(), 60), s);
    for (double t : {0.5, 7.3, 60.0}) {
      EXPECT_NEAR(sup_centered_diff(p, v, t), brute_sup(p, v, t), 1e-12);
    }
  }
}

TEST(SupCenteredDiff, DeterministicBound) {
  RandomStream zs(1);
  const ArrivalPath z = generate_path(kZero, 0.0, 100.0, 0.3, zs);
  const std::vector<double> ones(200, 1.0);
  EXPECT_LE(sup_centered_diff(z, ones, 100.0), 1.0 / std::sqrt(100.0) + 1e-15);
  for (std::uint64_t r = 0; r < 20; ++r) {
    RandomStream s = RandomStream::derive(26, "supbound", r);
    const ArrivalPath p = generate_path(kPareto, 0.0, 400.0, std::nullopt, s);
    double sup = 0.0;
    for (double t = 0.0; t <= 400.0; t += 0.25) {
      sup = std::max(sup, std::abs(static_cast<double>(p.count(t)) - t));
    }
    for (const Arrival& a : p.entries()) {
      sup = std::max(sup, std::abs(static_cast<double>(p.count(a.time)) - a.time));
    }
    const std::vector<double> unit(p.entries().size() + 400, 1.0);
    EXPECT_LE(sup_centered_diff(p, unit, 400.0), (sup + 1.0) / std::sqrt(400.0) + 1e-12);
  }
  EXPECT_THROW(sup_centered_diff(z, ones, 0.0), InvalidArgument);
  EXPECT_THROW(sup_centered_diff(z, ones, 101.0), InvalidArgument);
}

TEST(CumulativeWork, SumsServicesOfCountedArrivals) {
  RandomStream s(1);
  const ArrivalPath p = generate_path(kZero, 0.0, 3.0, 0.5, s);
  EXPECT_DOUBLE_EQ(cumulative_work(p, {1.0, 2.0, 4.0}, 1.7), 3.0);
  EXPECT_DOUBLE_EQ(cumulative_work(p, {1.0, 2.0, 4.0}, 3.0), 7.0);
  EXPECT_THROW(cumulative_work(p, {1.0}, 3.0), InvalidArgument);
}

TEST(SteadySample, DegenerateBoundedAndValidation) {
  for (std::uint64_t r = 0; r < 50; ++r) {
    RandomStream s = RandomStream::derive(27, "steady", r);
    EXPECT_LE(steady_workload_sample(kZero, 0.9, 20.0, ServiceKind::kDeterministic, s), 1.0);
  }
  RandomStream s(1);
  EXPECT_THROW(steady_workload_sample(kZero, 1.0, 20.0, ServiceKind::kDeterministic, s),
               InvalidArgument);
  EXPECT_THROW(steady_workload_sample(kZero, 0.5, 0.0, ServiceKind::kDeterministic, s),
               InvalidArgument);
}

}  // namespace
}  // namespace schedq
