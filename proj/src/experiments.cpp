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

#include "schedq/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "schedq/bernoulli_tail.hpp"
#include "schedq/error.hpp"
#include "schedq/format.hpp"
#include "schedq/parallel.hpp"
#include "schedq/queue.hpp"
#include "schedq/random.hpp"
#include "schedq/stats.hpp"
#include "schedq/traffic.hpp"

namespace schedq {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

class Rows {
 public:
  explicit Rows(std::vector<ResultRow>& out) : out_(out) {}

  void add(const std::string& cell, const std::string& stat, double value,
           std::int64_t n = 0) {
    out_.push_back({cell, stat, value, std::nullopt, std::nullopt, n});
  }
  void add(const std::string& cell, const std::string& stat, double value,
           double lo, double hi, std::int64_t n) {
    out_.push_back({cell, stat, value, lo, hi, n});
  }
  void check(const std::string& cell, const std::string& name, bool ok) {
    add(cell, "check_" + name, ok ? 1.0 : 0.0);
  }
  // Median with its order-statistic interval, then the quartiles.
  void location(const std::string& cell, const std::string& prefix, const Summary& s) {
    const auto n = static_cast<std::int64_t>(s.n);
    add(cell, prefix + "median", s.median, s.median_ci_lo, s.median_ci_hi, n);
    add(cell, prefix + "q1", s.q1, n);
    add(cell, prefix + "q3", s.q3, n);
  }

 private:
  std::vector<ResultRow>& out_;
};

std::string cell(const std::string& key, double v) { return key + "=" + format_label(v); }

std::vector<double> doubles(const json& j) { return j.get<std::vector<double>>(); }
std::vector<std::int64_t> ints(const json& j) { return j.get<std::vector<std::int64_t>>(); }

ExperimentResult start(const ExperimentConfig& cfg, std::string anchor) {
  ExperimentResult r;
  r.experiment = cfg.experiment;
  r.anchor = std::move(anchor);
  r.config = cfg.to_json();
  return r;
}

void expect(const ExperimentConfig& cfg, const char* name) {
  if (cfg.experiment != name) {
    throw ConfigError(ConfigError::Kind::kValidation,
                      "config is for '" + cfg.experiment + "', not '" + name + "'");
  }
}

// Exponent of the right tail P(xi > x) ~ c x^-alpha, when there is one.
std::optional<double> right_alpha(const PerturbationModel& model) {
  const TailParams tails = model.tail_params();
  if (const auto* p = std::get_if<PowerTails>(&tails); p && p->survival_right > 0.0) {
    return p->alpha_right;
  }
  return std::nullopt;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// ---------------------------------------------------------------- covariance

// conditional_cov to a relative accuracy `rel`: the absolute tolerance is
// tightened until it sits below rel |cov|.
double relative_cov(const PerturbationModel& model, double u, std::int64_t n, double rel) {
  double tol = 1e-12;
  double c = conditional_cov(model, u, n, tol);
  for (int k = 0; k < 8 && c != 0.0 && tol > rel * std::abs(c); ++k) {
    tol = std::max(rel * std::abs(c), 1e-300);
    c = conditional_cov(model, u, n, tol);
  }
  return c;
}

// sum_j e^{-b1 (j - u)} P(xi + u in (j - 1, j]) for exponential tails with
// b1 < b2. Blocks j <= 0 and j >= 2 are geometric series.
double exp_shift_sum(const TwoSidedExp& e, const PerturbationModel& model, double u) {
  const double b1 = e.beta1, b2 = e.beta2;
  const double left = e.d2 / b2 * -std::expm1(-b2) * std::exp(-(b2 - b1) * u) /
                      -std::expm1(-(b2 - b1));
  const double right = e.d1 / b1 * std::expm1(b1) * std::exp(-2.0 * b1 * (2.0 - u)) /
                       -std::expm1(-2.0 * b1);
  const double middle = std::exp(-b1 * (1.0 - u)) * model.interval_prob(-u, 1.0 - u);
  return left + middle + right;
}

// Normalization n -> scale(n) |cov(n)| and the constant it should approach.
struct CovScaling {
  std::function<double(std::int64_t)> scale;
  double reference;
  std::string rule;
  // Exponential tails only: the stated constant is the limit for lag n + 1
  // (equal rates) or carries e^(-beta j) one slot early (unequal rates); this
  // is the constant for lag n itself.
  double reference_corrected = 0.0;
};

CovScaling cov_scaling(const PerturbationModel& model, double u) {
  const TailParams tails = model.tail_params();
  if (const auto* p = std::get_if<PowerTails>(&tails)) {
    double a = kInf;
    if (p->density_right > 0.0) a = std::min(a, p->alpha_right);
    if (p->density_left > 0.0) a = std::min(a, p->alpha_left);
    if (a == kInf) return {[](std::int64_t) { return 1.0; }, 0.0, "none"};
    double ref = 0.0;
    if (p->density_right > 0.0 && p->alpha_right == a) ref += p->density_right;
    if (p->density_left > 0.0 && p->alpha_left == a) ref += p->density_left;
    return {[a](std::int64_t n) { return std::pow(static_cast<double>(n), a + 1.0); }, ref,
            "n^(alpha+1)"};
  }
  if (std::holds_alternative<ExponentialTails>(tails)) {
    const auto& law = std::get<TwoSidedExp>(model.law());
    if (law.beta1 == law.beta2) {
      const double b = law.beta1;
      const double ref = law.d1 * law.d2 / (b * b) * std::pow(-std::expm1(-b), 2);
      return {[b](std::int64_t n) {
                const double x = static_cast<double>(n);
                return std::exp(b * (x + 1.0)) / x;
              },
              ref, "e^(beta(n+1))/n", ref * std::exp(3.0 * b)};
    }
    // The lighter side decides; the heavier-left case is the mirror image
    // with u -> 1 - u.
    const bool right = law.beta1 < law.beta2;
    const PerturbationModel m = right ? model : model.mirrored();
    const double uu = right ? u : 1.0 - u;
    const auto& ml = std::get<TwoSidedExp>(m.law());
    const double b = ml.beta1;
    const double ref = ml.d1 / b * std::expm1(b) * exp_shift_sum(ml, m, uu);
    return {[b](std::int64_t n) { return std::exp(b * static_cast<double>(n)); }, ref,
            "e^(beta n)", ref * std::exp(b)};
  }
  return {[](std::int64_t) { return 1.0; }, 0.0, "none"};
}

// ---------------------------------------------------------- bernoulli tails

// P(X = k) for k <= K from successive tails.
std::vector<double> pmf_from_tails(const ParamSeq& seq, int K, double eps) {
  std::vector<double> log_tail(K + 2);
  log_tail[0] = 0.0;
  for (int k = 1; k <= K + 1; ++k) log_tail[k] = exact_tail(seq, k, eps).log_value;
  std::vector<double> pmf(K + 1, 0.0);
  for (int k = 0; k <= K; ++k) {
    if (log_tail[k] == -kInf) continue;
    const double next = log_tail[k + 1] - log_tail[k];
    pmf[k] = std::exp(log_tail[k]) * -std::expm1(std::min(next, 0.0));
  }
  return pmf;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// P(A - B > x) for independent A, B with the given pmfs.
double difference_tail(const std::vector<double>& a, const std::vector<double>& b,
                       std::int64_t x) {
  std::vector<double> tail(a.size() + 1, 0.0);  // tail[m] = P(A >= m)
  for (std::size_t m = a.size(); m-- > 0;) tail[m] = tail[m + 1] + a[m];
  double sum = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    const auto m = static_cast<std::size_t>(x + 1) + k;
    if (m < tail.size()) sum += b[k] * tail[m];
  }
  return sum;
}

}  // namespace

// ------------------------------------------------------------------ results

std::string ExperimentResult::checksum() const {
  const std::string csv = to_csv();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] == '#') continue;
    h = fnv1a64(line + "\n", h);
  }
  return "fnv1a64=" + hex64(h);
}

std::string ExperimentResult::to_csv() const {
  std::string payload = "experiment,cell,stat,value,ci_lo,ci_hi,n_reps\n";
  std::uint64_t h = fnv1a64(payload);
  std::string body;
  for (const auto& r : rows) {
    std::string line = experiment + "," + r.cell + "," + r.stat + "," + format_double(r.value) +
                       "," + (r.ci_lo ? format_double(*r.ci_lo) : "") + "," +
                       (r.ci_hi ? format_double(*r.ci_hi) : "") + "," +
                       std::to_string(r.n_reps) + "\n";
    h = fnv1a64(line, h);
    body += line;
  }
  return "# experiment: " + experiment + "\n# anchor: " + anchor + "\n# config: " +
         config.dump() + "\n" + payload + body + "# checksum: fnv1a64=" + hex64(h) + "\n";
}

json ExperimentResult::to_json() const {
  json out;
  out["experiment"] = experiment;
  out["anchor"] = anchor;
  out["config"] = config;
  json rs = json::array();
  for (const auto& r : rows) {
    json j;
    j["cell"] = r.cell;
    j["stat"] = r.stat;
    j["value"] = format_double(r.value);
    j["ci_lo"] = r.ci_lo ? json(format_double(*r.ci_lo)) : json(nullptr);
    j["ci_hi"] = r.ci_hi ? json(format_double(*r.ci_hi)) : json(nullptr);
    j["n_reps"] = r.n_reps;
    rs.push_back(std::move(j));
  }
  out["rows"] = std::move(rs);
  out["checksum"] = checksum();
  return out;
}

json ExperimentResult::metadata() const {
  json out;
  out["experiment"] = experiment;
  out["seed"] = config.value("seed", kDefaultSeed);
  out["version"] = std::string(kVersion);
  out["wall_seconds"] = wall_seconds;
  out["checksum"] = checksum();
  return out;
}

const ResultRow* ExperimentResult::find(std::string_view c, std::string_view stat) const {
  for (const auto& r : rows)
    if (r.cell == c && r.stat == stat) return &r;
  return nullptr;
}

// --------------------------------------------------------------- experiments

ExperimentResult run_covariance(const ExperimentConfig& cfg, int threads) {
  expect(cfg, "covariance");
  ExperimentResult res =
      start(cfg,
            "given the uniform shift U=u, Cov(dN(1), dN(n)) is never positive and decays "
            "like the perturbation density at lag n (power tails) or exponentially "
            "(exponential tails)");
  Rows rows(res.rows);
  const PerturbationModel& model = cfg.model;
  const double u = cfg.knobs["u"];
  const CovScaling scaling = cov_scaling(model, u);

  bool all_nonpositive = true;
  for (const std::int64_t n : ints(cfg.knobs["n_grid"])) {
    const std::string c = cell("n", static_cast<double>(n));
    const double cov = relative_cov(model, u, n, cfg.eps);
    const double normalized = scaling.scale(n) * std::abs(cov);
    rows.add(c, "cov", cov);
    rows.add(c, "normalized", normalized);
    rows.add(c, "reference", scaling.reference);
    if (scaling.reference > 0.0) rows.add(c, "ratio", normalized / scaling.reference);
    if (scaling.reference_corrected > 0.0) {
      rows.add(c, "reference_corrected", scaling.reference_corrected);
      rows.add(c, "ratio_corrected", normalized / scaling.reference_corrected);
    }
    rows.check(c, "nonpositive", cov <= 0.0);
    all_nonpositive = all_nonpositive && cov <= 0.0;
  }
  rows.check("all", "nonpositive", all_nonpositive);

  for (const std::int64_t n : ints(cfg.knobs["mc_n_grid"])) {
    const std::string c = cell("mc_n", static_cast<double>(n));
    const auto R = static_cast<std::size_t>(cfg.replications);
    const auto pairs = parallel_map<std::pair<double, double>>(R, threads, [&](std::size_t r) {
      RandomStream stream = RandomStream::derive(cfg.seed, "covariance/" + c, r);
      const ArrivalPath path =
          generate_path(model, 0.0, static_cast<double>(n), u, stream, cfg.eps);
      const double nn = static_cast<double>(n);
      return std::pair<double, double>(
          static_cast<double>(path.count(1.0)),
          static_cast<double>(path.count(nn) - path.count(nn - 1.0)));
    });
    std::vector<double> x, y;
    for (const auto& [a, b] : pairs) {
      x.push_back(a);
      y.push_back(b);
    }
    const CovarianceEstimate est = sample_covariance(x, y);
    const double exact = relative_cov(model, u, n, cfg.eps);
    rows.add(c, "mc_cov", est.value, est.ci_lo, est.ci_hi, cfg.replications);
    rows.add(c, "exact_cov", exact);
    rows.check(c, "mc_covers_exact", est.ci_lo <= exact && exact <= est.ci_hi);
  }
  return res;
}

ExperimentResult run_bernoulli_tails(const ExperimentConfig& cfg, int threads) {
  expect(cfg, "bernoulli_tails");
  ExperimentResult res =
      start(cfg,
            "Z = sum_j I_j with P(I_j=1) = c (w+j)^-alpha: log P(Z>z) / (z log z) -> -alpha; "
            "exact asymptotics of P(Z>=n) through r*, eta*, gamma; tails of "
            "E'(s) - L'(s) - (E(0) - L(0)) decay with exponent min(alpha1, alpha2)");
  Rows rows(res.rows);
  const double c = cfg.knobs["c"], alpha = cfg.knobs["alpha"], w = cfg.knobs["w"];
  const double eps = cfg.eps;
  const ParamSeq seq = ParamSeq::power_law(c, w, alpha);

  const TailConstants k = tail_constants(c, alpha, w);
  rows.add("constants", "r_star", k.r_star);
  rows.add("constants", "eta_star", k.eta_star);
  rows.add("constants", "gamma", k.gamma);
  rows.add("constants", "reference_slope", -alpha);

  bool chernoff_ok = true;
  std::vector<double> ratio_i, ratio_ii_i;
  for (const std::int64_t n : ints(cfg.knobs["n_grid"])) {
    const std::string cl = cell("n", static_cast<double>(n));
    const TailProbability t = exact_tail(seq, n, eps);
    const double ch = chernoff_bound(seq, static_cast<double>(n));
    const double ai = asymp_tail_general(seq, n);
    const double aii = asymp_tail_power(c, w, alpha, n);
    rows.add(cl, "exact", t.value, std::max(0.0, t.value - t.error_bound),
             t.value + t.error_bound, 0);
    rows.add(cl, "exact_log", t.log_value);
    rows.add(cl, "chernoff_log", ch);
    rows.add(cl, "asymp_i_log", ai);
    rows.add(cl, "asymp_ii_log", aii);
    rows.add(cl, "ratio_i_exact", std::exp(ai - t.log_value));
    rows.add(cl, "ratio_ii_i", std::exp(aii - ai));
    rows.check(cl, "chernoff_dominates", ch >= t.log_value);
    chernoff_ok = chernoff_ok && ch >= t.log_value;
    ratio_i.push_back(std::exp(ai - t.log_value));
    ratio_ii_i.push_back(std::exp(aii - ai));
  }
  rows.check("summary", "chernoff_dominates", chernoff_ok);
  rows.check("summary", "ratio_i_improves",
             std::abs(ratio_i.back() - 1.0) < std::abs(ratio_i.front() - 1.0));
  rows.check("summary", "ratio_ii_i_improves",
             std::abs(ratio_ii_i.back() - 1.0) < std::abs(ratio_ii_i.front() - 1.0));

  std::vector<std::pair<double, double>> logs;
  for (const std::int64_t z : ints(cfg.knobs["z_grid"])) {
    logs.emplace_back(static_cast<double>(z), exact_tail(seq, z + 1, eps).log_value);
  }
  const auto slopes = log_tail_slope(logs);
  bool monotone = true;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    const std::string cl = cell("z", slopes[i].first);
    rows.add(cl, "log_tail_ge_z_plus_1", logs[i].second);
    rows.add(cl, "slope", slopes[i].second);
    if (i > 0) monotone = monotone && slopes[i].second < slopes[i - 1].second;
  }
  rows.check("summary", "slope_decreasing", monotone);

  // Difference of Bernoulli sums, conditionally on U = u.
  const PerturbationModel& model = cfg.model;
  const double u = cfg.knobs["u"], s = cfg.knobs["s"];
  const double us = u > s ? u - s : 1.0 + u - s;
  const auto xs = ints(cfg.knobs["x_grid"]);
  const int K = static_cast<int>(*std::max_element(xs.begin(), xs.end())) + 30;
  const auto p_e0 = pmf_from_tails(early_count_params(model, u), K, eps);
  const auto p_l0 = pmf_from_tails(late_count_params(model, u), K, eps);
  const auto p_es = pmf_from_tails(early_count_params(model, us), K, eps);
  const auto p_ls = pmf_from_tails(late_count_params(model, us), K, eps);
  const TailParams tails = model.tail_params();
  const auto plus = convolve(p_es, p_l0);   // E'(s) + L(0)
  const auto minus = convolve(p_ls, p_e0);  // L'(s) + E(0)
  if (const auto* p = std::get_if<PowerTails>(&tails)) {
    rows.add("constants", "reference_late_slope", -p->alpha_right);
    rows.add("constants", "reference_early_slope", -p->alpha_left);
    rows.add("constants", "reference_diff_slope", -std::min(p->alpha_right, p->alpha_left));
  }
  for (const std::int64_t x : xs) {
    const std::string cl = cell("x", static_cast<double>(x));
    const double lx = static_cast<double>(x) * std::log(static_cast<double>(x));
    const double late = std::log(difference_tail(p_l0, {1.0}, x));
    const double early = std::log(difference_tail(p_es, {1.0}, x));
    const double diff = std::log(difference_tail(plus, minus, x));
    rows.add(cl, "late0_tail_log", late);
    rows.add(cl, "late0_slope", late / lx);
    rows.add(cl, "early_s_tail_log", early);
    rows.add(cl, "early_s_slope", early / lx);
    rows.add(cl, "diff_tail_log", diff);
    rows.add(cl, "diff_slope", diff / lx);
  }

  // Experimental: the E(0) display averages Gamma(U)^alpha / (c r* n^alpha)^U
  // over U. Its Monte Carlo estimate is set against the exact tail averaged
  // over U by Gauss-Legendre quadrature.
  const auto* pt = std::get_if<PowerTails>(&tails);
  if (pt && pt->survival_left > 0.0) {
    const double c2 = pt->survival_left, a2 = pt->alpha_left;
    const auto R = static_cast<std::size_t>(cfg.replications);
    const auto us_draw = parallel_map<double>(R, threads, [&](std::size_t r) {
      RandomStream stream = RandomStream::derive(cfg.seed, "bernoulli_tails/e0", r);
      return stream.uniform();
    });
    for (const std::int64_t n : ints(cfg.knobs["e0_n_grid"])) {
      const std::string cl = cell("e0_n", static_cast<double>(n));
      const double exact = boost::math::quadrature::gauss<double, 20>::integrate(
          [&](double v) { return exact_tail(early_count_params(model, v), n, eps).value; },
          0.0, 1.0);
      std::vector<double> vals;
      vals.reserve(R);
      for (const double v : us_draw) vals.push_back(std::exp(asymp_tail_power(c2, v, a2, n)));
      const Summary sm = summarize(vals);
      rows.add(cl, "exact_unconditional", exact);
      rows.add(cl, "display_mc_experimental", sm.mean, sm.mean_ci_lo, sm.mean_ci_hi,
               cfg.replications);
      rows.add(cl, "display_ratio_experimental", sm.mean / exact);
    }
  }
  return res;
}

ExperimentResult run_critical_loading(const ExperimentConfig& cfg, int threads) {
  expect(cfg, "critical_loading");
  ExperimentResult res = start(
      cfg, "critical loading (rho=1): W(t) log log t / log t converges in law to 1/alpha");
  Rows rows(res.rows);
  const auto grid = doubles(cfg.knobs["t_grid"]);
  const double t_max = *std::max_element(grid.begin(), grid.end());
  const ServiceKind kind = parse_service(cfg.knobs["service"]);
  const auto R = static_cast<std::size_t>(cfg.replications);

  const auto traces = parallel_map<std::vector<double>>(R, threads, [&](std::size_t r) {
    RandomStream stream = RandomStream::derive(cfg.seed, "critical_loading", r);
    const ArrivalPath path = generate_path(cfg.model, 0.0, t_max, std::nullopt, stream, cfg.eps);
    const auto services = draw_services(kind, path.entries().size(), stream);
    return workload(path, 1.0, grid, services).values;
  });

  const auto alpha = right_alpha(cfg.model);
  std::vector<double> medians;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    const double scale = std::log(std::log(t)) / std::log(t);
    std::vector<double> scaled;
    double raw_max = 0.0;
    for (const auto& v : traces) {
      scaled.push_back(v[i] * scale);
      raw_max = std::max(raw_max, v[i]);
    }
    const Summary sm = summarize(scaled);
    const std::string cl = cell("t", t);
    rows.location(cl, "scaled_", sm);
    rows.add(cl, "raw_max", raw_max, cfg.replications);
    if (alpha) rows.check(cl, "in_band", sm.median >= 0.2 / *alpha && sm.median <= 3.0 / *alpha);
    medians.push_back(sm.median);
  }
  if (alpha) rows.add("constants", "reference", 1.0 / *alpha);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const std::string cl = cell("t", grid[i - 1]) + "->" + cell("t", grid[i]);
    const double ratio = medians[i] / medians[i - 1];
    rows.add(cl, "median_ratio", ratio);
    rows.check(cl, "within_half", std::abs(ratio - 1.0) <= 0.5);
  }
  return res;
}

ExperimentResult run_heavy_traffic(const ExperimentConfig& cfg, int threads) {
  expect(cfg, "heavy_traffic");
  ExperimentResult res =
      start(cfg,
            "heavy traffic: W_rho(inf) log log(1/(1-rho)) / log(1/(1-rho)) converges in law "
            "to 1/alpha as rho -> 1");
  Rows rows(res.rows);
  const double mult = cfg.knobs["horizon_mult"];
  const ServiceKind kind = parse_service(cfg.knobs["service"]);
  const bool burn_in = cfg.knobs["burn_in_check"];
  const auto R = static_cast<std::size_t>(cfg.replications);
  const auto alpha = right_alpha(cfg.model);

  for (const double rho : doubles(cfg.knobs["rho_grid"])) {
    const std::string cl = cell("rho", rho);
    const double L = std::log(1.0 / (1.0 - rho));
    const double scale = std::log(L) / L;
    auto sample = [&](double m, const std::string& key) {
      auto v = parallel_map<double>(R, threads, [&](std::size_t r) {
        RandomStream stream = RandomStream::derive(cfg.seed, key, r);
        return scale * steady_workload_sample(cfg.model, rho, m, kind, stream, cfg.eps);
      });
      return summarize(std::move(v));
    };
    const Summary base = sample(mult, "heavy_traffic/" + cl);
    rows.location(cl, "scaled_", base);
    rows.add(cl, "scaled_iqr", base.q3 - base.q1, cfg.replications);
    if (alpha) rows.check(cl, "in_band", base.median >= 0.2 / *alpha && base.median <= 3.0 / *alpha);
    if (burn_in) {
      const Summary twice = sample(2.0 * mult, "heavy_traffic/" + cl + "/doubled");
      const double shift = std::abs(twice.median - base.median);
      rows.add(cl, "doubled_scaled_median", twice.median, twice.median_ci_lo,
               twice.median_ci_hi, cfg.replications);
      rows.add(cl, "median_shift", shift, cfg.replications);
      rows.check(cl, "burn_in", shift < base.q3 - base.q1);
    }
  }
  if (alpha) rows.add("constants", "reference", 1.0 / *alpha);
  return res;
}

ExperimentResult run_sg1_fclt(const ExperimentConfig& cfg, int threads) {
  expect(cfg, "sg1_fclt");
  ExperimentResult res =
      start(cfg,
            "S/G/1 vs D/G/1: sup_{s<=t} |Lambda(s) - Lambda'(s)| / sqrt(t) -> 0, so "
            "(Lambda(n) - n) / sqrt(n) has limiting variance var V1");
  Rows rows(res.rows);
  const auto grid = doubles(cfg.knobs["t_grid"]);
  const ServiceKind kind = parse_service(cfg.knobs["service"]);
  const double var_n = cfg.knobs["variance_n"];
  const bool variance_cell = service_variance(kind) > 0.0;
  double t_max = *std::max_element(grid.begin(), grid.end());
  if (variance_cell) t_max = std::max(t_max, var_n);
  const auto R = static_cast<std::size_t>(cfg.replications);

  struct Rep {
    std::vector<double> stat;
    double centered = 0.0;
    int bound_violations = 0;
  };
  const auto reps = parallel_map<Rep>(R, threads, [&](std::size_t r) {
    RandomStream stream = RandomStream::derive(cfg.seed, "sg1_fclt", r);
    const ArrivalPath path = generate_path(cfg.model, 0.0, t_max, std::nullopt, stream, cfg.eps);
    const std::size_t m =
        std::max(path.entries().size(), static_cast<std::size_t>(std::floor(t_max))) + 1;
    const auto services = draw_services(kind, m, stream);
    Rep rep;
    for (const double t : grid) {
      const double stat = sup_centered_diff(path, services, t);
      rep.stat.push_back(stat);
      if (kind == ServiceKind::kDeterministic) {
        // sup |N(s) - s| over [0, t] is attained next to an arrival or at t.
        double sup = std::abs(static_cast<double>(path.count(t)) - t);
        std::int64_t k = 0;
        for (const auto& a : path.entries()) {
          if (a.time > t) break;
          ++k;
          sup = std::max({sup, std::abs(static_cast<double>(k) - a.time),
                          std::abs(static_cast<double>(k - 1) - a.time)});
        }
        if (stat > (sup + 1.0) / std::sqrt(t) + 1e-12) ++rep.bound_violations;
      }
    }
    if (variance_cell) {
      rep.centered = (cumulative_work(path, services, var_n) - var_n) / std::sqrt(var_n);
    }
    return rep;
  });

  std::vector<double> medians;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> v;
    for (const auto& rep : reps) v.push_back(rep.stat[i]);
    const Summary sm = summarize(v);
    const std::string cl = cell("t", grid[i]);
    rows.location(cl, "", sm);
    medians.push_back(sm.median);
  }
  if (kind == ServiceKind::kDeterministic) {
    int violations = 0;
    for (const auto& rep : reps) violations += rep.bound_violations;
    rows.add("all", "deterministic_bound_violations", violations, cfg.replications);
    rows.check("all", "deterministic_bound", violations == 0);
  }
  if (grid.size() > 1) {
    const std::string cl = cell("t", grid.front()) + "->" + cell("t", grid.back());
    const double ratio = medians.back() / medians.front();
    rows.add(cl, "median_ratio", ratio);
    rows.check(cl, "halved", ratio < 0.5);
  }
  if (variance_cell) {
    std::vector<double> v;
    for (const auto& rep : reps) v.push_back(rep.centered);
    const VarianceEstimate est = sample_variance(v);
    const double ref = service_variance(kind);
    const std::string cl = cell("n", var_n);
    rows.add(cl, "variance", est.value, est.ci_lo, est.ci_hi, cfg.replications);
    rows.add(cl, "reference", ref);
    rows.check(cl, "covers", est.ci_lo <= ref && ref <= est.ci_hi);
  }
  return res;
}

ExperimentResult run_limit_distribution(const ExperimentConfig& cfg, int threads) {
  expect(cfg, "limit_distribution");
  ExperimentResult res =
      start(cfg,
            "N(n+s) - (n+s) converges in law to -s + I(U<=s) + (E'(s) - L'(s)) - (E(0) - L(0)) "
            "with the four counts conditionally independent given U");
  Rows rows(res.rows);
  const std::int64_t n = cfg.knobs["n"];
  const double level = cfg.knobs["level"];
  const auto R = static_cast<std::size_t>(cfg.replications);

  for (const double s : doubles(cfg.knobs["s_grid"])) {
    const std::string cl = cell("s", s);
    const double t = static_cast<double>(n) + s;
    auto direct = parallel_map<double>(R, threads, [&](std::size_t r) {
      RandomStream stream = RandomStream::derive(cfg.seed, "limit_distribution/" + cl + "/direct", r);
      const ArrivalPath path = generate_path(cfg.model, 0.0, t, std::nullopt, stream, cfg.eps);
      return static_cast<double>(path.count(t)) - t;
    });
    auto limit = parallel_map<double>(R, threads, [&](std::size_t r) {
      RandomStream stream = RandomStream::derive(cfg.seed, "limit_distribution/" + cl + "/limit", r);
      return sample_limit_rv(cfg.model, s, stream, cfg.eps);
    });
    const Summary sd = summarize(direct);
    const Summary sl = summarize(limit);
    const KsResult ks = ks_two_sample(std::move(direct), std::move(limit));
    rows.add(cl, "ks_statistic", ks.statistic, cfg.replications);
    rows.add(cl, "p_value", ks.p_value, cfg.replications);
    rows.check(cl, "accept", ks.p_value >= level);
    rows.add(cl, "mean_direct", sd.mean, sd.mean_ci_lo, sd.mean_ci_hi, cfg.replications);
    rows.add(cl, "mean_limit", sl.mean, sl.mean_ci_lo, sl.mean_ci_hi, cfg.replications);
    if (s == 0.0) rows.check(cl, "limit_mean_covers_zero", sl.mean_ci_lo <= 0.0 && 0.0 <= sl.mean_ci_hi);
  }
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads) {
  using Runner = ExperimentResult (*)(const ExperimentConfig&, int);
  static const std::map<std::string, Runner> runners = {
      {"covariance", run_covariance},
      {"bernoulli_tails", run_bernoulli_tails},
      {"critical_loading", run_critical_loading},
      {"heavy_traffic", run_heavy_traffic},
      {"sg1_fclt", run_sg1_fclt},
      {"limit_distribution", run_limit_distribution},
  };
  const auto it = runners.find(cfg.experiment);
  if (it == runners.end()) {
    throw ConfigError(ConfigError::Kind::kValidation, "unknown experiment '" + cfg.experiment + "'");
  }
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentResult res = it->second(cfg, threads);
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace schedq
