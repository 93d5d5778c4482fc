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

#ifndef SCHEDQ_PERTURBATION_HPP_
#define SCHEDQ_PERTURBATION_HPP_

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "schedq/random.hpp"

namespace schedq {

// P(xi > x) = c1 x^-alpha1 and P(xi < -x) = c2 x^-alpha2 for x >= 1; the
// remaining mass 1 - c1 - c2 is uniform on [-1, 1].
struct TwoSidedPareto {
  double c1;
  double alpha1;
  double c2;
  double alpha2;
};

// Density d1 e^{-beta1 x} on x > 0 and d2 e^{beta2 x} on x < 0, with
// d1/beta1 + d2/beta2 = 1.
struct TwoSidedExp {
  double d1;
  double beta1;
  double d2;
  double beta2;
};

// Point mass at zero.
struct Degenerate {};

// Asymptotic tail description of a perturbation law.
//
// Power tails are reported in both conventions: survival coefficients
// (P(xi > x) ~ c x^-alpha) and density coefficients (f(x) ~ alpha c x^-alpha-1).
struct PowerTails {
  double survival_right;
  double survival_left;
  double density_right;
  double density_left;
  double alpha_right;
  double alpha_left;
};

struct ExponentialTails {
  double d_right;
  double beta_right;
  double d_left;
  double beta_left;
};

struct NoTail {};

using TailParams = std::variant<PowerTails, ExponentialTails, NoTail>;

// Law of a single schedule perturbation xi_0. Immutable; share freely.
class PerturbationModel {
 public:
  using Law = std::variant<TwoSidedPareto, TwoSidedExp, Degenerate>;

  // Validating factories. Throw DomainError on inadmissible parameters.
  static PerturbationModel pareto2(double c1, double alpha1, double c2,
                                   double alpha2);
  static PerturbationModel exp2(double d1, double beta1, double d2,
                                double beta2);
  static PerturbationModel laplace(double beta);
  static PerturbationModel zero();

  const Law& law() const { return law_; }
  std::string type_name() const;

  // P(xi > x).
  double survival(double x) const;
  // P(xi <= x).
  double cdf(double x) const;
  // P(a < xi <= b). Throws InvalidArgument when a > b.
  double interval_prob(double a, double b) const;

  // Inverse CDF at u in (0, 1).
  double quantile(double u) const;
  double sample(RandomStream& stream) const { return quantile(stream.uniform()); }

  // Draws xi conditionally on xi > d and returns the excess xi - d, computed
  // without cancellation so that it stays accurate for very large d.
  // Requires survival(d) > 0.
  double sample_excess_above(double d, RandomStream& stream) const;

  // integral_x^inf P(xi > y) dy.
  double integrated_survival(double x) const;

  // Law of -xi.
  PerturbationModel mirrored() const;

  TailParams tail_params() const;

  // E|xi_0|, finite for every admissible model.
  double mean_abs() const;

  nlohmann::json to_json() const;
  // Throws ConfigError (validation kind) on unknown types, missing or extra
  // fields and inadmissible parameters.
  static PerturbationModel from_json(const nlohmann::json& j);

  friend bool operator==(const PerturbationModel& a,
                         const PerturbationModel& b);

 private:
  explicit PerturbationModel(Law law) : law_(law) {}

  Law law_;
};

bool operator==(const TwoSidedPareto& a, const TwoSidedPareto& b);
bool operator==(const TwoSidedExp& a, const TwoSidedExp& b);
inline bool operator==(const Degenerate&, const Degenerate&) { return true; }

}  // namespace schedq

#endif  // SCHEDQ_PERTURBATION_HPP_
