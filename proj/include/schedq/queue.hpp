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

#ifndef SCHEDQ_QUEUE_HPP_
#define SCHEDQ_QUEUE_HPP_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "schedq/perturbation.hpp"
#include "schedq/random.hpp"
#include "schedq/traffic.hpp"

namespace schedq {

// Mean-one service laws.
enum class ServiceKind { kDeterministic, kExponential, kUniform };

ServiceKind parse_service(const std::string& name);  // throws InvalidArgument
std::string service_name(ServiceKind kind);
double service_variance(ServiceKind kind);

std::vector<double> draw_services(ServiceKind kind, std::size_t count,
                                  RandomStream& stream);

struct WorkloadTrace {
  double rho;
  std::vector<double> epochs;  // arrival times in (t_lo, t_hi]
  std::vector<double> after;   // workload just after each arrival
  std::vector<double> grid;
  std::vector<double> values;  // W at each grid time

  void write_csv(std::ostream& os) const;
};

// Workload of a server draining at rate 1/rho, empty at the window start,
// fed by the path's arrivals; services[k] is the work of the k-th arrival
// in time order. Throws InvalidArgument for rho outside (0, 1], grid points
// outside the window or too few services.
WorkloadTrace workload(const ArrivalPath& path, double rho,
                       const std::vector<double>& grid,
                       const std::vector<double>& services);

// (1/sqrt(t)) sup_{0<=s<=t} |Lambda(s) - Lambda'(s)| with Lambda summing the
// services of the first N(s) arrivals and Lambda' those of the first
// floor(s). The path window must start at 0 and contain t; services must
// cover max(N(t), floor(t)) terms.
double sup_centered_diff(const ArrivalPath& path,
                         const std::vector<double>& services, double t);

// Lambda(t) = sum of the services of the first N(t) arrivals.
double cumulative_work(const ArrivalPath& path,
                       const std::vector<double>& services, double t);

// W(0) of a queue started empty at -horizon_mult / (1 - rho).
double steady_workload_sample(const PerturbationModel& model, double rho,
                              double horizon_mult, ServiceKind service,
                              RandomStream& stream,
                              double eps = kDefaultPathEps);

}  // namespace schedq

#endif  // SCHEDQ_QUEUE_HPP_
