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

#include "schedq/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "schedq/error.hpp"
#include "schedq/format.hpp"

namespace schedq {
namespace {

constexpr std::int64_t kIndexCap = std::int64_t{1} << 62;
// Slots this close to the window are always sampled directly.
constexpr std::int64_t kCoreMargin = 16;

void check_u(double u) {
  if (!(u > 0.0 && u < 1.0)) throw InvalidArgument("u must lie in (0, 1)");
}

void check_eps(double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
}

// Compensated summation.
class Neumaier {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

std::int64_t count_hits(const std::function<double(double)>& prob,
                        const std::function<double(double)>& tail, double d0,
                        double eps, RandomStream& stream) {
  std::int64_t hits = 0;
  thin_indicators(prob, tail, d0, eps, stream,
                  [&](std::int64_t, double) { ++hits; });
  return hits;
}

}  // namespace

void thin_indicators(const std::function<double(double)>& prob,
                     const std::function<double(double)>& tail, double d0,
                     double eps, RandomStream& stream,
                     const std::function<void(std::int64_t, double)>& on_hit) {
  std::int64_t k = 0;
  std::int64_t len = 8;
  while (true) {
    const double d = d0 + static_cast<double>(k);
    const double cap = prob(d);  // dominates prob on the whole block
    if (cap <= 0.0 || tail(d) <= eps) return;
    if (k >= kIndexCap) {
      throw NoFiniteTruncation("perturbation tails too heavy for eps = " +
                               format_double(eps));
    }
    const std::int64_t end = k + len;
    if (cap >= 1.0) {
      for (std::int64_t j = k; j < end; ++j) {
        const double dj = d0 + static_cast<double>(j);
        if (stream.uniform() < prob(dj)) on_hit(j, dj);
      }
    } else {
      // Candidates at geometric gaps with rate cap, kept with prob / cap.
      const double log_miss = std::log1p(-cap);
      std::int64_t j = k;
      while (true) {
        const double gap = std::floor(std::log(stream.uniform()) / log_miss);
        if (gap >= static_cast<double>(end - j)) break;
        j += static_cast<std::int64_t>(gap);
        const double dj = d0 + static_cast<double>(j);
        if (stream.uniform() * cap < prob(dj)) on_hit(j, dj);
        ++j;
      }
    }
    k = end;
    if (len < (std::int64_t{1} << 60)) len *= 2;
  }
}

ArrivalPath generate_path(const PerturbationModel& model, double t_lo,
                          double t_hi, std::optional<double> u,
                          RandomStream& stream, double eps) {
  if (!(std::isfinite(t_lo) && std::isfinite(t_hi) && t_lo < t_hi)) {
    throw InvalidArgument("path window must satisfy t_lo < t_hi");
  }
  check_eps(eps);
  if (u) check_u(*u);

  ArrivalPath path;
  path.u_ = u ? *u : stream.uniform();
  path.t_lo_ = t_lo;
  path.t_hi_ = t_hi;
  path.eps_ = eps;
  const double uu = path.u_;

  auto keep = [&](std::int64_t i, double time) {
    if (time > t_lo && time <= t_hi) {
      path.entries_.push_back({i, time});
    } else {
      path.displaced_.push_back({i, time});
    }
  };

  const auto core_lo = static_cast<std::int64_t>(std::floor(t_lo)) - kCoreMargin;
  const auto core_hi = static_cast<std::int64_t>(std::ceil(t_hi)) + kCoreMargin;
  path.entries_.reserve(static_cast<std::size_t>(core_hi - core_lo + 1));
  for (std::int64_t i = core_lo; i <= core_hi; ++i) {
    keep(i, static_cast<double>(i) + uu + model.sample(stream));
  }

  // Slots after the core reach the window only by arriving early enough.
  const PerturbationModel mirror = model.mirrored();
  thin_indicators(
      [&](double d) { return mirror.survival(d); },
      [&](double d) { return mirror.survival(d) + mirror.integrated_survival(d); },
      static_cast<double>(core_hi + 1) + uu - t_hi, eps / 2.0, stream,
      [&](std::int64_t k, double d) {
        keep(core_hi + 1 + k, t_hi - mirror.sample_excess_above(d, stream));
      });
  // Slots before the core matter only when they arrive after t_lo.
  thin_indicators(
      [&](double d) { return model.survival(d); },
      [&](double d) { return model.survival(d) + model.integrated_survival(d); },
      t_lo - static_cast<double>(core_lo - 1) - uu, eps / 2.0, stream,
      [&](std::int64_t k, double d) {
        keep(core_lo - 1 - k, t_lo + model.sample_excess_above(d, stream));
      });

  auto by_time = [](const Arrival& a, const Arrival& b) {
    return a.time < b.time || (a.time == b.time && a.index < b.index);
  };
  std::sort(path.entries_.begin(), path.entries_.end(), by_time);
  std::sort(path.displaced_.begin(), path.displaced_.end(),
            [](const Arrival& a, const Arrival& b) { return a.index < b.index; });
  return path;
}

void ArrivalPath::check_time(double t) const {
  if (!(t >= t_lo_ && t <= t_hi_)) {
    throw InvalidArgument("time " + format_double(t) + " outside the path window [" +
                          format_double(t_lo_) + ", " + format_double(t_hi_) + "]");
  }
}

std::int64_t ArrivalPath::count(double t) const {
  check_time(t);
  const auto it = std::upper_bound(
      entries_.begin(), entries_.end(), t,
      [](double v, const Arrival& a) { return v < a.time; });
  return it - entries_.begin();
}

EarlyLate ArrivalPath::early_late(double t) const {
  check_time(t);
  EarlyLate el{0, 0};
  auto visit = [&](const std::vector<Arrival>& v) {
    for (const Arrival& a : v) {
      const double slot = static_cast<double>(a.index) + u_;
      if (slot > t && a.time <= t) ++el.early;
      if (slot <= t && a.time > t) ++el.late;
    }
  };
  visit(entries_);
  visit(displaced_);
  return el;
}

std::int64_t ArrivalPath::scheduled_in(double u, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("scheduled_in needs t >= 0");
  auto slot = [u](std::int64_t i) { return static_cast<double>(i) + u; };
  auto first = static_cast<std::int64_t>(std::floor(-u)) - 1;
  while (!(slot(first) > 0.0)) ++first;
  auto last = static_cast<std::int64_t>(std::floor(t - u)) + 1;
  while (last >= first && !(slot(last) <= t)) --last;
  return std::max<std::int64_t>(0, last - first + 1);
}

std::int64_t ArrivalPath::decomposition_residual(double t) const {
  if (!(t >= 0.0)) throw InvalidArgument("decomposition needs t >= 0");
  check_time(0.0);
  check_time(t);
  const std::int64_t n = count(t) - count(0.0);
  const std::int64_t sched = scheduled_in(u_, t);
  const EarlyLate at_t = early_late(t);
  const EarlyLate at_0 = early_late(0.0);
  return n - sched - (at_t.early - at_t.late) + (at_0.early - at_0.late);
}

void ArrivalPath::write_csv(std::ostream& os) const {
  os << "# u=" << format_double(u_) << " window=(" << format_double(t_lo_) << ","
     << format_double(t_hi_) << "] eps=" << format_double(eps_) << "\n";
  os << "schedule_index,arrival_time\n";
  for (const Arrival& a : entries_) {
    os << a.index << "," << format_double(a.time) << "\n";
  }
}

double conditional_cov(const PerturbationModel& model, double u, std::int64_t n,
                       double eps) {
  check_u(u);
  check_eps(eps);
  if (n < 2) throw InvalidArgument("conditional_cov needs n >= 2");
  const double nn = static_cast<double>(n);
  // Remainders for i > hi and i < lo, bounded by the larger factor at the
  // boundary times the total mass of the other factor.
  auto right = [&](std::int64_t i) {
    const double x = static_cast<double>(i);
    return model.cdf(-x - u) * model.cdf(nn - 1.0 - x - u);
  };
  auto left = [&](std::int64_t i) {
    const double x = static_cast<double>(i);
    return model.survival(1.0 - x - u) * model.survival(nn - x - u);
  };
  std::int64_t hi = 1;
  while (right(hi) > eps / 2.0) {
    hi *= 2;
    if (hi > (std::int64_t{1} << 40)) throw NoFiniteTruncation("conditional_cov");
  }
  std::int64_t lo = -n - 1;
  while (left(lo) > eps / 2.0) {
    lo *= 2;
    if (lo < -(std::int64_t{1} << 40)) throw NoFiniteTruncation("conditional_cov");
  }
  Neumaier acc;
  for (std::int64_t i = lo; i <= hi; ++i) {
    const double x = static_cast<double>(i);
    acc.add(model.interval_prob(-x - u, 1.0 - x - u) *
            model.interval_prob(nn - 1.0 - x - u, nn - x - u));
  }
  return -acc.value();
}

double sample_limit_rv(const PerturbationModel& model, double s,
                       RandomStream& stream, double eps) {
  if (!(s >= 0.0 && s < 1.0)) throw InvalidArgument("s must lie in [0, 1)");
  check_eps(eps);
  const double U = stream.uniform();
  const PerturbationModel mirror = model.mirrored();
  // Early: xi <= -d, i.e. -xi >= d. Late: xi > d.
  auto early = [&](double d) { return model.cdf(-d); };
  auto early_tail = [&](double d) {
    return model.cdf(-d) + mirror.integrated_survival(d);
  };
  auto late = [&](double d) { return model.survival(d); };
  auto late_tail = [&](double d) {
    return model.survival(d) + model.integrated_survival(d);
  };
  const double k0 = U > s ? 0.0 : 1.0;  // first slot after s, relative to 0
  const double e_s = static_cast<double>(count_hits(early, early_tail, k0 + U - s, eps / 4.0, stream));
  const double l_s = static_cast<double>(count_hits(late, late_tail, s - k0 + 1.0 - U, eps / 4.0, stream));
  const double e_0 = static_cast<double>(count_hits(early, early_tail, U, eps / 4.0, stream));
  const double l_0 = static_cast<double>(count_hits(late, late_tail, 1.0 - U, eps / 4.0, stream));
  return -s + (U <= s ? 1.0 : 0.0) + (e_s - l_s) - (e_0 - l_0);
}

ParamSeq late_count_params(const PerturbationModel& model, double u) {
  check_u(u);
  if (const auto* p = std::get_if<TwoSidedPareto>(&model.law()); p && p->c1 > 0.0) {
    return ParamSeq::with_power_tail({model.survival(1.0 - u)}, p->c1, 1.0 - u,
                                     p->alpha1);
  }
  return ParamSeq::general(
      [model, u](std::int64_t j) { return model.survival(static_cast<double>(j) + 1.0 - u); },
      [model, u](std::int64_t J) {
        return model.integrated_survival(static_cast<double>(J) + 1.0 - u);
      });
}

ParamSeq early_count_params(const PerturbationModel& model, double u) {
  check_u(u);
  if (const auto* p = std::get_if<TwoSidedPareto>(&model.law()); p && p->c2 > 0.0) {
    return ParamSeq::with_power_tail({model.cdf(-u)}, p->c2, u, p->alpha2);
  }
  const PerturbationModel mirror = model.mirrored();
  return ParamSeq::general(
      [model, u](std::int64_t j) { return model.cdf(-(static_cast<double>(j) + u)); },
      [mirror, u](std::int64_t J) {
        return mirror.integrated_survival(static_cast<double>(J) + u);
      });
}

}  // namespace schedq
