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

#include "schedq/bernoulli_tail.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bernoulli.hpp>

#include "schedq/error.hpp"
#include "schedq/scaled_double.hpp"

namespace schedq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Largest index a general sequence may be truncated at.
constexpr std::int64_t kMaxTruncation = 50'000'000;
// Relative size below which series terms are dropped.
constexpr double kSeriesTol = 1e-20;

void check_alpha(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw DomainError("alpha must exceed 1");
  }
}

void check_c(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("c must be positive");
}

// log sum_{j>J} p_j^k for a power-law tail, J >= start - 1.
double log_power_sum(const PowerLaw& d, std::int64_t J, int k) {
  const double q = d.w + static_cast<double>(J + 1);
  const double s = d.alpha * k;
  return k * std::log(d.c) - s * std::log(q) + std::log(hurwitz_zeta_scaled(s, q));
}

// Smallest J (>= lo) such that ok(J) holds, by doubling then bisection.
template <class Pred>
std::int64_t smallest_truncation(std::int64_t lo, Pred ok) {
  std::int64_t hi = std::max<std::int64_t>(lo, 0);
  std::int64_t step = 1;
  while (!ok(hi)) {
    lo = hi + 1;
    hi += step;
    step *= 2;
    if (hi > kMaxTruncation) {
      throw NoFiniteTruncation("tail sum bound does not fall below the tolerance "
                               "within " + std::to_string(kMaxTruncation) + " terms");
    }
  }
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (ok(mid)) hi = mid; else lo = mid + 1;
  }
  return hi;
}

// Law of Z_J = sum_{j<=J} I_j restricted to {0..n-1} plus the bucket {>= n}.
std::vector<ScaledDouble> truncated_law(const ParamSeq& seq, std::int64_t J,
                                        std::int64_t n) {
  std::vector<ScaledDouble> state(static_cast<std::size_t>(n) + 1);
  state[0] = 1.0;
  std::int64_t reach = 0;  // highest index that can be non-zero
  for (std::int64_t j = 0; j <= J; ++j) {
    const double p = seq.p(j);
    if (p == 0.0) continue;
    const double q = 1.0 - p;
    reach = std::min(reach + 1, n);
    if (reach == n) state[n] += state[n - 1] * p;
    for (std::int64_t k = std::min(reach, n - 1); k >= 1; --k) {
      state[k] = state[k] * q + state[k - 1] * p;
    }
    state[0] *= q;
  }
  return state;
}

// tails[k] = P(Z_J >= k) for k = 0..n.
std::vector<ScaledDouble> tails_of(const std::vector<ScaledDouble>& state) {
  const std::size_t n = state.size() - 1;
  std::vector<ScaledDouble> tails(n + 1);
  tails[n] = state[n];
  for (std::size_t k = n; k-- > 0;) tails[k] = tails[k + 1] + state[k];
  return tails;
}

TailProbability finish(ScaledDouble value, double error, std::int64_t J,
                       bool analytic) {
  TailProbability r;
  r.log_value = value.log();
  r.value = value.to_double();
  r.error_bound = error;
  r.truncation = J;
  r.analytic_remainder = analytic;
  return r;
}

// P(R = m), m = 0..K, for R = sum_{j>J} I_j with power-law p_j, by expanding
// prod_j (1 - p_j) * prod_j (1 + q_j x), q_j = p_j / (1 - p_j).
std::vector<ScaledDouble> remainder_law(const PowerLaw& d, std::int64_t J,
                                        std::int64_t K) {
  std::vector<ScaledDouble> P(1);  // P[k] = sum_{j>J} p_j^k, 1-based
  auto power_sum = [&](std::int64_t k) -> const ScaledDouble& {
    while (static_cast<std::int64_t>(P.size()) <= k) {
      P.push_back(ScaledDouble::from_log(
          log_power_sum(d, J, static_cast<int>(P.size()))));
    }
    return P[static_cast<std::size_t>(k)];
  };

  double a0 = 0.0;
  for (std::int64_t k = 1;; ++k) {
    const double term = power_sum(k).to_double() / static_cast<double>(k);
    a0 -= term;
    if (term <= kSeriesTol * std::abs(a0)) break;
  }

  // T[m] = sum_j q_j^m = sum_i C(m+i-1, i) P[m+i].
  std::vector<ScaledDouble> T(static_cast<std::size_t>(K) + 1);
  for (std::int64_t m = 1; m <= K; ++m) {
    ScaledDouble acc = power_sum(m);
    double binom = 1.0;
    for (std::int64_t i = 1;; ++i) {
      binom *= static_cast<double>(m + i - 1) / static_cast<double>(i);
      const ScaledDouble term = power_sum(m + i) * binom;
      acc += term;
      if ((term / acc).to_double() < kSeriesTol) break;
    }
    T[static_cast<std::size_t>(m)] = acc;
  }

  // Elementary symmetric functions of the q_j via Newton's identities.
  std::vector<ScaledDouble> coef(static_cast<std::size_t>(K) + 1);
  coef[0] = 1.0;
  for (std::int64_t m = 1; m <= K; ++m) {
    ScaledDouble acc;
    for (std::int64_t k = 1; k <= m; ++k) {
      const ScaledDouble term = T[static_cast<std::size_t>(k)] *
                                coef[static_cast<std::size_t>(m - k)];
      if (k % 2 == 1) acc += term; else acc -= term;
    }
    coef[static_cast<std::size_t>(m)] = acc / static_cast<double>(m);
  }
  const ScaledDouble scale = ScaledDouble::from_log(a0);
  for (auto& x : coef) x *= scale;
  return coef;
}

TailProbability exact_tail_power(const ParamSeq& seq, const PowerLaw& d,
                                 std::int64_t n) {
  // Push the cut far enough that the remainder expansion is numerically
  // stable: its alternating recursion needs w + J + 1 >~ 2 (alpha - 1) m.
  const double reach = static_cast<double>(n + 38);
  const double q_min = std::max(std::pow(4.0 * d.c * reach, 1.0 / d.alpha),
                                2.0 * (d.alpha - 1.0) * reach);
  const std::int64_t J = std::max<std::int64_t>(
      d.start - 1, static_cast<std::int64_t>(std::ceil(q_min - d.w - 1.0)));

  const auto tails = tails_of(truncated_law(seq, J, n));
  const std::int64_t K = n + 30;
  const auto rem = remainder_law(d, J, K);

  ScaledDouble total;
  for (std::int64_t m = 0; m < n; ++m) {
    total += rem[static_cast<std::size_t>(m)] * tails[static_cast<std::size_t>(n - m)];
  }
  for (std::int64_t m = n; m <= K; ++m) total += rem[static_cast<std::size_t>(m)];

  const double rel = 4.0 * DBL_EPSILON * static_cast<double>(J + K + 64);
  return finish(total, total.to_double() * rel, J, true);
}

TailProbability exact_tail_bounded(const ParamSeq& seq, std::int64_t n,
                                   double eps) {
  std::int64_t J;
  if (seq.size()) {
    J = *seq.size() - 1;
  } else {
    J = smallest_truncation(-1, [&](std::int64_t j) {
      return seq.tail_sum_bound(j) < eps;
    });
  }
  const auto tails = tails_of(truncated_law(seq, J, n));
  const double mu = seq.size() ? 0.0 : seq.tail_sum_bound(J);

  double bound = 0.0;
  if (mu > 0.0) {
    // P(R = k) <= mu^k / k!, and P(Z >= n) - P(Z_J >= n) is at most
    // sum_{k>=1} P(R = k) P(Z_J >= n - k).
    double term = 1.0;
    double partial = 1.0;
    for (std::int64_t k = 1; k < n; ++k) {
      term *= mu / static_cast<double>(k);
      partial += term;
      bound += term * tails[static_cast<std::size_t>(n - k)].to_double();
    }
    term *= mu / static_cast<double>(n);
    bound += term * std::exp(mu);
    bound = std::min(bound, mu);
  }
  const ScaledDouble value = tails[static_cast<std::size_t>(n)];
  const double rounding = 4.0 * DBL_EPSILON * static_cast<double>(J + n + 2) *
                          value.to_double();
  return finish(value, bound + rounding, J, false);
}

// 1 + (r/q)-scaled Euler-Maclaurin pieces, see hurwitz_zeta_scaled.
double euler_maclaurin_tail(double s, double x) {
  double acc = x / (s - 1.0) + 0.5;
  double rising = s;     // s (s+1) ... (s+2k-2)
  double xpow = 1.0 / x;  // x^(1-2k)
  double fact = 2.0;     // (2k)!
  for (int k = 1; k <= 8; ++k) {
    acc += boost::math::bernoulli_b2n<double>(k) / fact * rising * xpow;
    rising *= (s + 2 * k - 1) * (s + 2 * k);
    xpow /= x * x;
    fact *= (2 * k + 1) * (2 * k + 2);
  }
  return acc;
}

template <class F>
double integrate(F f, double a, double b, QuadratureScheme scheme) {
  if (b <= a) return 0.0;
  if (scheme == QuadratureScheme::kGaussKronrod) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, a, b, 12, 1e-13);
  }
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, a, b, 1e-13);
}

// Upper end of the quadrature piece; beyond it a x^-alpha <= 1/4 and the
// integrands are expanded in that ratio.
double split_point(double a, double alpha) {
  return std::max(1.0, std::pow(4.0 * a, 1.0 / alpha));
}

// integral_0^inf a / (a + x^alpha) dx.
double defining_integral(double a, double alpha) {
  const double X = split_point(a, alpha);
  const double body = integrate(
      [&](double x) { return a / (a + std::pow(x, alpha)); }, 0.0, X,
      QuadratureScheme::kGaussKronrod);
  double tail = 0.0;
  const double ratio = a * std::pow(X, -alpha);
  double power = a * std::pow(X, 1.0 - alpha);  // a^(k+1) X^(1 - alpha (k+1))
  for (int k = 0; k < 200; ++k) {
    const double term = power / (alpha * (k + 1) - 1.0);
    tail += (k % 2 == 0) ? term : -term;
    if (term <= kSeriesTol * std::abs(tail)) break;
    power *= ratio;
  }
  return body + tail;
}

}  // namespace

// ---------------------------------------------------------------- ParamSeq

ParamSeq ParamSeq::finite(std::vector<double> p) {
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("success probabilities must lie in [0, 1]");
    }
  }
  std::vector<double> suffix(p.size() + 1, 0.0);
  for (std::size_t j = p.size(); j-- > 0;) suffix[j] = suffix[j + 1] + p[j];
  ParamSeq s;
  s.size_ = static_cast<std::int64_t>(p.size());
  s.head_ = std::move(p);
  s.tail_bound_ = [suffix](std::int64_t J) {
    const auto i = static_cast<std::size_t>(std::max<std::int64_t>(J + 1, 0));
    return i < suffix.size() ? suffix[i] : 0.0;
  };
  return s;
}

ParamSeq ParamSeq::power_law(double c, double w, double alpha) {
  return with_power_tail({}, c, w, alpha);
}

ParamSeq ParamSeq::with_power_tail(std::vector<double> head, double c, double w,
                                   double alpha) {
  check_c(c);
  check_alpha(alpha);
  for (double v : head) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("success probabilities must lie in [0, 1]");
    }
  }
  const auto start = static_cast<std::int64_t>(head.size());
  if (!(w + static_cast<double>(start) > 0.0) || !std::isfinite(w)) {
    throw DomainError("w + start must be positive");
  }
  if (c * std::pow(w + static_cast<double>(start), -alpha) > 1.0) {
    throw DomainError("power-law probabilities must not exceed 1");
  }
  ParamSeq s;
  s.head_ = std::move(head);
  s.descriptor_ = PowerLaw{c, w, alpha, start};
  return s;
}

ParamSeq ParamSeq::general(Generator p, Generator tail_sum_bound) {
  ParamSeq s;
  s.generator_ = std::move(p);
  s.tail_bound_ = std::move(tail_sum_bound);
  return s;
}

double ParamSeq::p(std::int64_t j) const {
  if (j < 0) throw InvalidArgument("negative sequence index");
  if (size_ && j >= *size_) return 0.0;
  if (j < static_cast<std::int64_t>(head_.size())) {
    return head_[static_cast<std::size_t>(j)];
  }
  if (descriptor_) {
    return descriptor_->c * std::pow(descriptor_->w + static_cast<double>(j),
                                     -descriptor_->alpha);
  }
  return generator_(j);
}

double ParamSeq::tail_sum_bound(std::int64_t J) const {
  if (!descriptor_) return tail_bound_(J);
  double head = 0.0;
  for (std::int64_t j = std::max<std::int64_t>(J + 1, 0); j < descriptor_->start; ++j) {
    head += p(j);
  }
  return head + tail_power_sum(std::max(J, descriptor_->start - 1), 1);
}

double ParamSeq::tail_power_sum(std::int64_t J, int k) const {
  if (!descriptor_) throw InvalidArgument("tail_power_sum needs a power-law tail");
  if (J < descriptor_->start - 1) {
    throw InvalidArgument("tail_power_sum: J below the power-law start");
  }
  return std::exp(log_power_sum(*descriptor_, J, k));
}

// ------------------------------------------------------------- exact tails

TailProbability exact_tail(const ParamSeq& seq, std::int64_t n, double eps) {
  if (n < 0) throw InvalidArgument("n must be non-negative");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (n == 0) return finish(ScaledDouble(1.0), 0.0, -1, false);
  if (seq.descriptor()) return exact_tail_power(seq, *seq.descriptor(), n);
  return exact_tail_bounded(seq, n, eps);
}

std::vector<double> log_pmf_finite(const std::vector<double>& p) {
  const auto seq = ParamSeq::finite(p);
  const auto n = static_cast<std::int64_t>(p.size());
  // With n + 1 buckets the last one holds exactly P(Z = n).
  const auto state = truncated_law(seq, n - 1, n + 1);
  std::vector<double> out;
  out.reserve(state.size() - 1);
  for (std::size_t k = 0; k + 1 < state.size(); ++k) out.push_back(state[k].log());
  return out;
}

// ---------------------------------------------------------------------- psi

PsiValue psi_and_derivatives(const ParamSeq& seq, double theta, double eps) {
  if (!std::isfinite(theta)) throw InvalidArgument("theta must be finite");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  const double x = std::expm1(theta);
  const double et = std::exp(theta);

  std::int64_t J;
  const auto& d = seq.descriptor();
  if (seq.size()) {
    J = *seq.size() - 1;
  } else if (d) {
    // Past J, p_j |x| <= 1/4 and the remainder is a convergent power series.
    const double q_min = std::pow(4.0 * d->c * std::abs(x), 1.0 / d->alpha);
    J = std::max<std::int64_t>(
        d->start - 1, static_cast<std::int64_t>(std::ceil(q_min - d->w - 1.0)));
  } else {
    const double scale = std::exp(std::abs(theta));
    J = smallest_truncation(-1, [&](std::int64_t j) {
      return scale * seq.tail_sum_bound(j) < eps;
    });
  }

  PsiValue out{0.0, 0.0, 0.0, 0.0, J};
  for (std::int64_t j = 0; j <= J; ++j) {
    const double p = seq.p(j);
    const double denom = 1.0 + p * x;
    out.psi += std::log1p(p * x);
    out.dpsi += p * et / denom;
    out.d2psi += p * et * (1.0 - p) / (denom * denom);
  }
  double magnitude = std::abs(out.psi) + out.dpsi + out.d2psi;

  if (!seq.size() && d) {
    if (x != 0.0) {
      // With y = -x: R0 = -sum_{k>=1} y^k P_k / k,
      // R1 = sum_{k>=0} y^k P_{k+1}, R2 = sum_{k>=0} (k+1) y^k (P_{k+1} - P_{k+2}).
      const double lx = std::log(std::abs(x));
      const bool y_negative = x > 0.0;
      std::vector<double> lp{0.0};  // lp[k] = log P_k
      auto log_p = [&](int k) {
        while (static_cast<int>(lp.size()) <= k) {
          lp.push_back(log_power_sum(*d, J, static_cast<int>(lp.size())));
        }
        return lp[static_cast<std::size_t>(k)];
      };
      double r0 = 0.0, r1 = 0.0, r2 = 0.0;
      for (int k = 0; k < 400; ++k) {
        const double sign = (y_negative && k % 2 == 1) ? -1.0 : 1.0;
        const double t0 = k == 0 ? 0.0 : -sign * std::exp(k * lx + log_p(k)) / k;
        const double a = std::exp(k * lx + log_p(k + 1));
        const double b = std::exp(k * lx + log_p(k + 2));
        const double t1 = sign * a;
        const double t2 = sign * (k + 1) * (a - b);
        r0 += t0;
        r1 += t1;
        r2 += t2;
        if (k > 0 && std::abs(t0) <= kSeriesTol * std::abs(r0) &&
            std::abs(t1) <= kSeriesTol * std::abs(r1) &&
            std::abs(t2) <= kSeriesTol * std::abs(r2)) {
          break;
        }
      }
      out.psi += r0;
      out.dpsi += et * r1;
      out.d2psi += et * r2;
    } else {
      const double p1 = seq.tail_power_sum(J, 1);
      out.dpsi += p1;
      out.d2psi += p1 - seq.tail_power_sum(J, 2);
    }
    magnitude = std::abs(out.psi) + out.dpsi + out.d2psi;
  } else if (!seq.size()) {
    out.error_bound = std::exp(std::abs(theta)) * seq.tail_sum_bound(J);
  }
  out.error_bound += 4.0 * DBL_EPSILON * static_cast<double>(J + 2) * magnitude;
  return out;
}

// ---------------------------------------------------------------- constants

double r_star_closed_form(double c, double alpha) {
  check_c(c);
  check_alpha(alpha);
  const double pi = std::numbers::pi;
  return std::pow(alpha * std::sin(pi / alpha) / pi, alpha) / c;
}

double r_star_residual(double c, double alpha, double r) {
  check_c(c);
  check_alpha(alpha);
  if (!(r > 0.0)) throw DomainError("r must be positive");
  return defining_integral(c * r, alpha) - 1.0;
}

double r_star_quadrature(double c, double alpha) {
  check_c(c);
  check_alpha(alpha);
  double lo = -1.0, hi = 1.0;  // log a
  while (defining_integral(std::exp(lo), alpha) > 1.0) lo -= 2.0;
  while (defining_integral(std::exp(hi), alpha) < 1.0) hi += 2.0;
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (defining_integral(std::exp(mid), alpha) < 1.0) lo = mid; else hi = mid;
  }
  return std::exp(0.5 * (lo + hi)) / c;
}

double solve_r_star(double c, double alpha) {
  const double closed = r_star_closed_form(c, alpha);
  const double quad = r_star_quadrature(c, alpha);
  if (std::abs(quad / closed - 1.0) > 1e-8) {
    throw std::logic_error("r*: closed form and quadrature disagree");
  }
  return closed;
}

double eta_star(double c, double alpha, double r_star) {
  check_c(c);
  check_alpha(alpha);
  if (!(r_star > 0.0)) throw DomainError("r* must be positive");
  const double a = c * r_star;
  const double X = split_point(a, alpha);
  const double body = integrate(
      [&](double x) {
        const double xa = std::pow(x, alpha);
        return a * xa / ((a + xa) * (a + xa));
      },
      0.0, X, QuadratureScheme::kGaussKronrod);
  // a x^-alpha / (1 + a x^-alpha)^2 = sum_k (k+1) (-1)^k (a x^-alpha)^(k+1).
  double tail = 0.0;
  const double ratio = a * std::pow(X, -alpha);
  double power = a * std::pow(X, 1.0 - alpha);
  for (int k = 0; k < 400; ++k) {
    const double term = (k + 1) * power / (alpha * (k + 1) - 1.0);
    tail += (k % 2 == 0) ? term : -term;
    if (term <= kSeriesTol * std::abs(tail)) break;
    power *= ratio;
  }
  return body + tail;
}

double gamma_const(double c, double alpha, double r_star,
                   QuadratureScheme scheme) {
  check_c(c);
  check_alpha(alpha);
  if (!(r_star > 0.0)) throw DomainError("r* must be positive");
  const double a = c * r_star;
  const double X = split_point(a, alpha);
  const double inner = integrate(
      [&](double x) { return std::log1p(std::pow(x, alpha) / a); }, 0.0, 1.0,
      scheme);
  const double outer = integrate(
      [&](double x) { return std::log1p(a * std::pow(x, -alpha)); }, 1.0, X,
      scheme);
  // integral_X^inf log(1 + a x^-alpha) dx, expanded in a X^-alpha <= 1/4.
  double tail = 0.0;
  const double ratio = a * std::pow(X, -alpha);
  double power = a * std::pow(X, 1.0 - alpha);  // a^k X^(1 - alpha k)
  for (int k = 1; k < 400; ++k) {
    const double term = power / (k * (alpha * k - 1.0));
    tail += (k % 2 == 1) ? term : -term;
    if (term <= kSeriesTol * std::abs(tail)) break;
    power *= ratio;
  }
  return inner + outer + tail + alpha + std::log(c);
}

TailConstants tail_constants(double c, double alpha, double w) {
  if (!(w > 0.0)) throw DomainError("w must be positive");
  const double r = solve_r_star(c, alpha);
  return {c, alpha, w, r, eta_star(c, alpha, r), gamma_const(c, alpha, r)};
}

// ------------------------------------------------------ asymptotic forms

double asymp_tail_general(const ParamSeq& seq, std::int64_t n) {
  const auto& d = seq.descriptor();
  if (!d) throw InvalidArgument("asymptotic form needs a power-law descriptor");
  if (n < 1) throw InvalidArgument("n must be at least 1");
  const double r = solve_r_star(d->c, d->alpha);
  const double eta = eta_star(d->c, d->alpha, r);
  const double nn = static_cast<double>(n);
  const double ln = std::log(nn);
  const double theta = std::log(r) + d->alpha * ln;
  const PsiValue psi = psi_and_derivatives(seq, theta, 1e-12);
  return -0.5 * std::log(2.0 * std::numbers::pi * eta) - nn * std::log(r) -
         (d->alpha * nn + 0.5) * ln + psi.psi;
}

double asymp_tail_power(double c, double w, double alpha, std::int64_t n) {
  if (!(w > 0.0)) throw DomainError("w must be positive");
  if (n < 1) throw InvalidArgument("n must be at least 1");
  const TailConstants k = tail_constants(c, alpha, w);
  const double nn = static_cast<double>(n);
  return -(alpha + 1.0) * 0.5 * std::log(2.0 * std::numbers::pi) +
         alpha * std::lgamma(w) - 0.5 * std::log(k.eta_star) +
         (0.5 - w) * std::log(c * k.r_star) +
         (-alpha * nn + 0.5 * (alpha - 1.0) - w * alpha) * std::log(nn) +
         k.gamma * nn;
}

double chernoff_bound(const ParamSeq& seq, double z, std::optional<double> r) {
  const auto& d = seq.descriptor();
  if (!d) throw InvalidArgument("chernoff_bound needs a power-law descriptor");
  if (!(z > 0.0)) throw InvalidArgument("z must be positive");
  if (r && !(*r > 0.0)) throw InvalidArgument("r must be positive");
  const double scale = r ? *r : r_star_closed_form(d->c, d->alpha);
  const double theta = std::max(0.0, std::log(scale) + d->alpha * std::log(z));
  const PsiValue psi = psi_and_derivatives(seq, theta, 1e-12);
  return -theta * z + psi.psi + psi.error_bound;
}

std::vector<std::pair<double, double>> log_tail_slope(
    const std::vector<std::pair<double, double>>& values) {
  std::vector<std::pair<double, double>> out;
  out.reserve(values.size());
  for (const auto& [z, lp] : values) {
    if (!(z >= 3.0)) throw InvalidArgument("log_tail_slope needs z >= 3");
    out.emplace_back(z, lp / (z * std::log(z)));
  }
  return out;
}

// ----------------------------------------------------------- Hurwitz zeta

double hurwitz_zeta_scaled(double s, double q) {
  if (!(s > 1.0)) throw DomainError("hurwitz zeta needs s > 1");
  if (!(q > 0.0)) throw DomainError("hurwitz zeta needs q > 0");
  // Direct terms until q + N clears s comfortably, then Euler-Maclaurin.
  const auto N = static_cast<std::int64_t>(
      std::max(10.0, std::ceil(s + 20.0 - q)));
  double sum = 0.0;
  for (std::int64_t i = 0; i < N; ++i) {
    const double t = std::exp(-s * std::log1p(static_cast<double>(i) / q));
    sum += t;
    // Remaining terms are below t (q + i) / (s - 1) in total.
    if (t * (q + static_cast<double>(i)) / (s - 1.0) < 1e-18 * sum) return sum;
  }
  const double x = q + static_cast<double>(N);
  return sum + std::exp(-s * std::log(x / q)) * euler_maclaurin_tail(s, x);
}

double hurwitz_zeta(double s, double q) {
  return std::exp(-s * std::log(q)) * hurwitz_zeta_scaled(s, q);
}

}  // namespace schedq
