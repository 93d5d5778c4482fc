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

#ifndef SCHEDQ_BERNOULLI_TAIL_HPP_
#define SCHEDQ_BERNOULLI_TAIL_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace schedq {

// p_j = c * (w + j)^(-alpha) for every j >= start.
struct PowerLaw {
  double c;
  double w;
  double alpha;
  std::int64_t start = 0;
};

// Success probabilities p_0, p_1, ... of independent indicators I_j, with
// Z = sum_j I_j.
class ParamSeq {
 public:
  using Generator = std::function<double(std::int64_t)>;

  static ParamSeq finite(std::vector<double> p);
  static ParamSeq power_law(double c, double w, double alpha);
  // Explicit head p_0..p_{h-1}, then the power law from j = h on.
  static ParamSeq with_power_tail(std::vector<double> head, double c, double w,
                                  double alpha);
  // tail_sum_bound(J) must bound sum_{j>J} p_j from above and be
  // non-increasing in J.
  static ParamSeq general(Generator p, Generator tail_sum_bound);

  double p(std::int64_t j) const;
  double tail_sum_bound(std::int64_t J) const;
  const std::optional<PowerLaw>& descriptor() const { return descriptor_; }
  // Number of terms for finite sequences.
  std::optional<std::int64_t> size() const { return size_; }

  // sum_{j>J} p_j^k for descriptor-backed sequences, J >= start - 1.
  double tail_power_sum(std::int64_t J, int k) const;

 private:
  ParamSeq() = default;

  std::vector<double> head_;
  Generator generator_;
  Generator tail_bound_;
  std::optional<PowerLaw> descriptor_;
  std::optional<std::int64_t> size_;
};

struct TailProbability {
  double log_value;    // log P(Z >= n); -inf when the probability is 0
  double value;        // exp(log_value), may underflow to 0
  double error_bound;  // absolute
  std::int64_t truncation;  // last index handled exactly
  // True when the indices above the truncation were handled by the analytic
  // power-sum expansion; error_bound is then a rounding estimate.
  bool analytic_remainder;
};

// P(Z >= n). Finite sequences are exact; power-law sequences add the exact
// law of the remainder; general sequences truncate where tail_sum_bound
// drops below eps and report a rigorous bound. Throws NoFiniteTruncation.
TailProbability exact_tail(const ParamSeq& seq, std::int64_t n, double eps);

// Full law of Z for finite sequences: pmf[k] = P(Z = k), as logs.
std::vector<double> log_pmf_finite(const std::vector<double>& p);

struct PsiValue {
  double psi;    // log E exp(theta Z)
  double dpsi;   // tilted mean
  double d2psi;  // tilted variance
  double error_bound;
  std::int64_t truncation;
};

PsiValue psi_and_derivatives(const ParamSeq& seq, double theta, double eps);

// c r* from the closed form (alpha sin(pi/alpha)/pi)^alpha, divided by c.
double r_star_closed_form(double c, double alpha);
// Bisection on the quadrature of the defining integral.
double r_star_quadrature(double c, double alpha);
// Both routes; throws std::logic_error if they differ by more than 1e-8
// relative. Returns the closed form.
double solve_r_star(double c, double alpha);
// integral_0^inf c r/(c r + x^alpha) dx - 1.
double r_star_residual(double c, double alpha, double r);

double eta_star(double c, double alpha, double r_star);

enum class QuadratureScheme { kGaussKronrod, kTanhSinh };

double gamma_const(double c, double alpha, double r_star,
                   QuadratureScheme scheme = QuadratureScheme::kGaussKronrod);

struct TailConstants {
  double c;
  double alpha;
  double w;
  double r_star;
  double eta_star;
  double gamma;
};

TailConstants tail_constants(double c, double alpha, double w);

// log of (2 pi eta*)^(-1/2) r*^(-n) n^(-alpha n - 1/2) exp(psi(r* n^alpha)).
double asymp_tail_general(const ParamSeq& seq, std::int64_t n);
// log of the closed power-law form built from r*, eta*, gamma and Gamma(w).
double asymp_tail_power(double c, double w, double alpha, std::int64_t n);

// log of exp(-theta z + psi(theta)) at e^theta = r z^alpha (r defaults to
// r*), plus the psi truncation error. The tilt is clamped at 0, where the
// bound is trivially 1. Requires a descriptor.
double chernoff_bound(const ParamSeq& seq, double z,
                      std::optional<double> r = std::nullopt);

// (z, log_prob / (z log z)). Throws InvalidArgument for z < 3.
std::vector<std::pair<double, double>> log_tail_slope(
    const std::vector<std::pair<double, double>>& values);

// zeta(s, q) * q^s = sum_{i>=0} (q / (q + i))^s for s > 1, q > 0.
double hurwitz_zeta_scaled(double s, double q);
double hurwitz_zeta(double s, double q);

}  // namespace schedq

#endif  // SCHEDQ_BERNOULLI_TAIL_HPP_
