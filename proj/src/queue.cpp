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
#include <limits>

#include "schedq/error.hpp"
#include "schedq/format.hpp"

namespace schedq {
namespace {

void check_rho(double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw InvalidArgument("rho must lie in (0, 1]");
}

// Workload left after draining from `from` to `to`. Residues below the
// rounding resolution of the epochs themselves are taken as an empty system,
// so that exactly-spaced arrivals drain exactly.
double drain(double w, double from, double to, double rate) {
  const double left = w - (to - from) * rate;
  const double noise = 4.0 * std::numeric_limits<double>::epsilon() *
                       (std::abs(from) + std::abs(to)) * rate;
  return left > noise ? left : 0.0;
}

}  // namespace

ServiceKind parse_service(const std::string& name) {
  if (name == "deterministic") return ServiceKind::kDeterministic;
  if (name == "exponential") return ServiceKind::kExponential;
  if (name == "uniform") return ServiceKind::kUniform;
  throw InvalidArgument("service must be deterministic, exponential or uniform, not '" +
                        name + "'");
}

std::string service_name(ServiceKind kind) {
  switch (kind) {
    case ServiceKind::kDeterministic: return "deterministic";
    case ServiceKind::kExponential: return "exponential";
    case ServiceKind::kUniform: return "uniform";
  }
  return "";
}

double service_variance(ServiceKind kind) {
  switch (kind) {
    case ServiceKind::kDeterministic: return 0.0;
    case ServiceKind::kExponential: return 1.0;
    case ServiceKind::kUniform: return 1.0 / 12.0;
  }
  return 0.0;
}

std::vector<double> draw_services(ServiceKind kind, std::size_t count,
                                  RandomStream& stream) {
  std::vector<double> v(count, 1.0);
  if (kind == ServiceKind::kExponential) {
    for (double& x : v) x = stream.exponential();
  } else if (kind == ServiceKind::kUniform) {
    for (double& x : v) x = 0.5 + stream.uniform();
  }
  return v;
}

WorkloadTrace workload(const ArrivalPath& path, double rho,
                       const std::vector<double>& grid,
                       const std::vector<double>& services) {
  check_rho(rho);
  const auto& arr = path.entries();
  if (services.size() < arr.size()) throw InvalidArgument("fewer services than arrivals");
  for (double g : grid) {
    if (!(g >= path.t_lo() && g <= path.t_hi())) {
      throw InvalidArgument("grid time " + format_double(g) + " outside the path window");
    }
  }
  WorkloadTrace tr;
  tr.rho = rho;
  tr.grid = grid;
  tr.epochs.reserve(arr.size());
  tr.after.reserve(arr.size());

  std::vector<std::size_t> order(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });
  tr.values.assign(grid.size(), 0.0);

  const double rate = 1.0 / rho;
  double w = 0.0;
  double last = path.t_lo();
  std::size_t g = 0;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    // Grid points strictly before this arrival see the drained workload;
    // grid points at the arrival time see the jump (right-continuity).
    while (g < order.size() && grid[order[g]] < arr[k].time) {
      tr.values[order[g]] = drain(w, last, grid[order[g]], rate);
      ++g;
    }
    w = drain(w, last, arr[k].time, rate) + services[k];
    last = arr[k].time;
    tr.epochs.push_back(last);
    tr.after.push_back(w);
  }
  for (; g < order.size(); ++g) {
    tr.values[order[g]] = drain(w, last, grid[order[g]], rate);
  }
  return tr;
}

void WorkloadTrace::write_csv(std::ostream& os) const {
  os << "# rho=" << format_double(rho) << "\n";
  os << "t,W\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << format_double(grid[i]) << "," << format_double(values[i]) << "\n";
  }
}

double sup_centered_diff(const ArrivalPath& path,
                         const std::vector<double>& services, double t) {
  if (path.t_lo() != 0.0) throw InvalidArgument("sup_centered_diff needs a window starting at 0");
  if (!(t > 0.0 && t <= path.t_hi())) throw InvalidArgument("t outside the path window");
  const auto& arr = path.entries();
  const auto whole = static_cast<std::size_t>(std::floor(t));
  const auto n_t = static_cast<std::size_t>(path.count(t));
  if (services.size() < std::max(n_t, whole)) throw InvalidArgument("too few services");

  std::vector<double> prefix(services.size() + 1, 0.0);
  for (std::size_t i = 0; i < services.size(); ++i) prefix[i + 1] = prefix[i] + services[i];

  double sup = 0.0;
  std::size_t a = 0;  // arrivals counted
  std::size_t m = 0;  // integer epochs counted
  while (a < n_t || m < whole) {
    const double next_a = a < n_t ? arr[a].time : INFINITY;
    const double next_m = m < whole ? static_cast<double>(m + 1) : INFINITY;
    const double s = std::min(next_a, next_m);
    while (a < n_t && arr[a].time <= s) ++a;
    while (m < whole && static_cast<double>(m + 1) <= s) ++m;
    sup = std::max(sup, std::abs(prefix[a] - prefix[m]));
  }
  return sup / std::sqrt(t);
}

double cumulative_work(const ArrivalPath& path,
                       const std::vector<double>& services, double t) {
  const auto n = static_cast<std::size_t>(path.count(t));
  if (services.size() < n) throw InvalidArgument("too few services");
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += services[i];
  return acc;
}

double steady_workload_sample(const PerturbationModel& model, double rho,
                              double horizon_mult, ServiceKind service,
                              RandomStream& stream, double eps) {
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("rho must lie in (0, 1)");
  if (!(horizon_mult > 0.0)) throw InvalidArgument("horizon_mult must be positive");
  const double T = horizon_mult / (1.0 - rho);
  const ArrivalPath path = generate_path(model, -T, 0.0, std::nullopt, stream, eps);
  const auto services = draw_services(service, path.entries().size(), stream);
  return workload(path, rho, {0.0}, services).values[0];
}

}  // namespace schedq
