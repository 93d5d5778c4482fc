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

#include "schedq/perturbation.hpp"

#include <cmath>
#include <set>

#include "schedq/error.hpp"

namespace schedq {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const char* message) {
  if (!ok) throw DomainError(message);
}

double core_mass(const TwoSidedPareto& p) { return 1.0 - p.c1 - p.c2; }

double survival_of(const TwoSidedPareto& p, double x) {
  if (x >= 1.0) return p.c1 * std::pow(x, -p.alpha1);
  if (x >= -1.0) return p.c1 + core_mass(p) * (1.0 - x) / 2.0;
  return 1.0 - p.c2 * std::pow(-x, -p.alpha2);
}

double cdf_of(const TwoSidedPareto& p, double x) {
  if (x >= 1.0) return 1.0 - p.c1 * std::pow(x, -p.alpha1);
  if (x >= -1.0) return p.c2 + core_mass(p) * (1.0 + x) / 2.0;
  return p.c2 * std::pow(-x, -p.alpha2);
}

double survival_of(const TwoSidedExp& e, double x) {
  if (x >= 0.0) return e.d1 / e.beta1 * std::exp(-e.beta1 * x);
  return 1.0 - e.d2 / e.beta2 * std::exp(e.beta2 * x);
}

double cdf_of(const TwoSidedExp& e, double x) {
  if (x >= 0.0) return 1.0 - e.d1 / e.beta1 * std::exp(-e.beta1 * x);
  return e.d2 / e.beta2 * std::exp(e.beta2 * x);
}

double survival_of(const Degenerate&, double x) { return x < 0.0 ? 1.0 : 0.0; }
double cdf_of(const Degenerate&, double x) { return x < 0.0 ? 0.0 : 1.0; }

// Smallest x with P(xi > x) <= s, accurate when s is small.
double inverse_survival(const TwoSidedPareto& p, double s) {
  if (s <= p.c1) return std::pow(s / p.c1, -1.0 / p.alpha1);
  const double m = core_mass(p);
  if (s <= p.c1 + m) return 1.0 - 2.0 * (s - p.c1) / m;
  return -std::pow((1.0 - s) / p.c2, -1.0 / p.alpha2);
}

double inverse_survival(const TwoSidedExp& e, double s) {
  const double right = e.d1 / e.beta1;
  if (s <= right) return -std::log(s / right) / e.beta1;
  return std::log((1.0 - s) / (e.d2 / e.beta2)) / e.beta2;
}

}  // namespace

bool operator==(const TwoSidedPareto& a, const TwoSidedPareto& b) {
  return a.c1 == b.c1 && a.alpha1 == b.alpha1 && a.c2 == b.c2 &&
         a.alpha2 == b.alpha2;
}

bool operator==(const TwoSidedExp& a, const TwoSidedExp& b) {
  return a.d1 == b.d1 && a.beta1 == b.beta1 && a.d2 == b.d2 &&
         a.beta2 == b.beta2;
}

bool operator==(const PerturbationModel& a, const PerturbationModel& b) {
  return a.law_ == b.law_;
}

PerturbationModel PerturbationModel::pareto2(double c1, double alpha1,
                                             double c2, double alpha2) {
  require(std::isfinite(c1) && std::isfinite(c2) && std::isfinite(alpha1) &&
              std::isfinite(alpha2),
          "pareto2 parameters must be finite");
  require(c1 >= 0.0, "c1 must be non-negative");
  require(c2 >= 0.0, "c2 must be non-negative");
  require(c1 + c2 <= 1.0, "c1 + c2 must not exceed 1");
  require(alpha1 > 1.0, "alpha must exceed 1 (alpha1)");
  require(alpha2 > 1.0, "alpha must exceed 1 (alpha2)");
  return PerturbationModel(TwoSidedPareto{c1, alpha1, c2, alpha2});
}

PerturbationModel PerturbationModel::exp2(double d1, double beta1, double d2,
                                          double beta2) {
  require(std::isfinite(d1) && std::isfinite(d2) && std::isfinite(beta1) &&
              std::isfinite(beta2),
          "exp2 parameters must be finite");
  require(beta1 > 0.0, "beta1 must be positive");
  require(beta2 > 0.0, "beta2 must be positive");
  require(d1 >= 0.0, "d1 must be non-negative");
  require(d2 >= 0.0, "d2 must be non-negative");
  require(std::abs(d1 / beta1 + d2 / beta2 - 1.0) <= 1e-12,
          "d1/beta1 + d2/beta2 must equal 1");
  return PerturbationModel(TwoSidedExp{d1, beta1, d2, beta2});
}

PerturbationModel PerturbationModel::laplace(double beta) {
  return exp2(beta / 2.0, beta, beta / 2.0, beta);
}

PerturbationModel PerturbationModel::zero() {
  return PerturbationModel(Degenerate{});
}

std::string PerturbationModel::type_name() const {
  return std::visit(Overloaded{[](const TwoSidedPareto&) { return "pareto2"; },
                               [](const TwoSidedExp&) { return "exp2"; },
                               [](const Degenerate&) { return "zero"; }},
                    law_);
}

double PerturbationModel::survival(double x) const {
  return std::visit([x](const auto& l) { return survival_of(l, x); }, law_);
}

double PerturbationModel::cdf(double x) const {
  return std::visit([x](const auto& l) { return cdf_of(l, x); }, law_);
}

double PerturbationModel::interval_prob(double a, double b) const {
  if (a > b) throw InvalidArgument("interval_prob: invalid interval, a > b");
  // Left-region intervals are differenced on the CDF to avoid cancellation.
  const double p = b <= 0.0 ? cdf(b) - cdf(a) : survival(a) - survival(b);
  return p > 0.0 ? p : 0.0;
}

double PerturbationModel::quantile(double u) const {
  return std::visit(
      Overloaded{
          [u](const TwoSidedPareto& p) {
            if (u < p.c2) return -std::pow(u / p.c2, -1.0 / p.alpha2);
            const double m = core_mass(p);
            if (u <= p.c2 + m && m > 0.0) return -1.0 + 2.0 * (u - p.c2) / m;
            return std::pow((1.0 - u) / p.c1, -1.0 / p.alpha1);
          },
          [u](const TwoSidedExp& e) {
            const double left = e.d2 / e.beta2;
            if (u < left) return std::log(u / left) / e.beta2;
            return -std::log((1.0 - u) / (e.d1 / e.beta1)) / e.beta1;
          },
          [](const Degenerate&) { return 0.0; }},
      law_);
}

double PerturbationModel::sample_excess_above(double d,
                                              RandomStream& stream) const {
  const double v = stream.uniform();
  return std::visit(
      Overloaded{
          [&](const TwoSidedPareto& p) {
            if (d >= 1.0) return d * std::expm1(-std::log(v) / p.alpha1);
            const double x = inverse_survival(p, v * survival_of(p, d));
            return x > d ? x - d : 0.0;
          },
          [&](const TwoSidedExp& e) {
            if (d >= 0.0) return -std::log(v) / e.beta1;
            const double x = inverse_survival(e, v * survival_of(e, d));
            return x > d ? x - d : 0.0;
          },
          [&](const Degenerate&) { return d < 0.0 ? -d : 0.0; }},
      law_);
}

double PerturbationModel::integrated_survival(double x) const {
  return std::visit(
      Overloaded{
          [x](const TwoSidedPareto& p) {
            const double at_one = p.c1 / (p.alpha1 - 1.0);
            if (x >= 1.0) return p.c1 * std::pow(x, 1.0 - p.alpha1) / (p.alpha1 - 1.0);
            const double m = core_mass(p);
            if (x >= -1.0) {
              return at_one + p.c1 * (1.0 - x) + m * (1.0 - x) * (1.0 - x) / 4.0;
            }
            const double at_minus_one = at_one + 2.0 * p.c1 + m;
            return at_minus_one + (-1.0 - x) -
                   p.c2 * (1.0 - std::pow(-x, 1.0 - p.alpha2)) / (p.alpha2 - 1.0);
          },
          [x](const TwoSidedExp& e) {
            const double at_zero = e.d1 / (e.beta1 * e.beta1);
            if (x >= 0.0) return at_zero * std::exp(-e.beta1 * x);
            return at_zero - x -
                   e.d2 / (e.beta2 * e.beta2) * (-std::expm1(e.beta2 * x));
          },
          [x](const Degenerate&) { return x < 0.0 ? -x : 0.0; }},
      law_);
}

PerturbationModel PerturbationModel::mirrored() const {
  return std::visit(
      Overloaded{[](const TwoSidedPareto& p) {
                   return PerturbationModel(
                       TwoSidedPareto{p.c2, p.alpha2, p.c1, p.alpha1});
                 },
                 [](const TwoSidedExp& e) {
                   return PerturbationModel(
                       TwoSidedExp{e.d2, e.beta2, e.d1, e.beta1});
                 },
                 [](const Degenerate&) { return PerturbationModel(Degenerate{}); }},
      law_);
}

TailParams PerturbationModel::tail_params() const {
  return std::visit(
      Overloaded{[](const TwoSidedPareto& p) -> TailParams {
                   return PowerTails{p.c1,          p.c2,     p.alpha1 * p.c1,
                                     p.alpha2 * p.c2, p.alpha1, p.alpha2};
                 },
                 [](const TwoSidedExp& e) -> TailParams {
                   return ExponentialTails{e.d1, e.beta1, e.d2, e.beta2};
                 },
                 [](const Degenerate&) -> TailParams { return NoTail{}; }},
      law_);
}

double PerturbationModel::mean_abs() const {
  return std::visit(
      Overloaded{[](const TwoSidedPareto& p) {
                   return core_mass(p) / 2.0 + p.c1 * p.alpha1 / (p.alpha1 - 1.0) +
                          p.c2 * p.alpha2 / (p.alpha2 - 1.0);
                 },
                 [](const TwoSidedExp& e) {
                   return e.d1 / (e.beta1 * e.beta1) + e.d2 / (e.beta2 * e.beta2);
                 },
                 [](const Degenerate&) { return 0.0; }},
      law_);
}

nlohmann::json PerturbationModel::to_json() const {
  return std::visit(
      Overloaded{[](const TwoSidedPareto& p) {
                   return nlohmann::json{{"type", "pareto2"}, {"c1", p.c1},
                                         {"alpha1", p.alpha1}, {"c2", p.c2},
                                         {"alpha2", p.alpha2}};
                 },
                 [](const TwoSidedExp& e) {
                   return nlohmann::json{{"type", "exp2"},    {"d1", e.d1},
                                         {"beta1", e.beta1}, {"d2", e.d2},
                                         {"beta2", e.beta2}};
                 },
                 [](const Degenerate&) { return nlohmann::json{{"type", "zero"}}; }},
      law_);
}

PerturbationModel PerturbationModel::from_json(const nlohmann::json& j) {
  using Kind = ConfigError::Kind;
  if (!j.is_object()) throw ConfigError(Kind::kValidation, "model must be an object");
  if (!j.contains("type") || !j.at("type").is_string()) {
    throw ConfigError(Kind::kValidation, "model.type must be a string");
  }
  const std::string type = j.at("type").get<std::string>();

  auto fields = [&](std::set<std::string> allowed) {
    allowed.insert("type");
    for (const auto& [key, value] : j.items()) {
      if (!allowed.count(key)) {
        throw ConfigError(Kind::kValidation,
                          "model: unknown field '" + key + "' for type " + type);
      }
    }
  };
  auto number = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
      throw ConfigError(Kind::kValidation,
                        std::string("model.") + key + " must be a number");
    }
    return j.at(key).get<double>();
  };

  try {
    if (type == "pareto2") {
      fields({"c1", "alpha1", "c2", "alpha2"});
      return pareto2(number("c1"), number("alpha1"), number("c2"), number("alpha2"));
    }
    if (type == "exp2") {
      fields({"d1", "beta1", "d2", "beta2"});
      return exp2(number("d1"), number("beta1"), number("d2"), number("beta2"));
    }
    if (type == "zero") {
      fields({});
      return zero();
    }
  } catch (const DomainError& e) {
    throw ConfigError(Kind::kValidation, std::string("model: ") + e.what());
  }
  throw ConfigError(Kind::kValidation, "model.type '" + type +
                                           "' is not one of pareto2, exp2, zero");
}

}  // namespace schedq
