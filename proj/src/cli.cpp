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

#include "schedq/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "schedq/bernoulli_tail.hpp"
#include "schedq/error.hpp"
#include "schedq/experiments.hpp"
#include "schedq/format.hpp"
#include "schedq/queue.hpp"
#include "schedq/random.hpp"
#include "schedq/traffic.hpp"

namespace schedq {
namespace {

using nlohmann::json;

// Flags shared by every subcommand.
struct Common {
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false;
  std::string out;
  std::string format = "csv";
  int threads = 0;
};

struct ModelFlags {
  std::string type = "pareto2";
  double c1 = 0.25, alpha1 = 2.0, c2 = 0.25, alpha2 = 2.0;
  double d1 = 0.5, beta1 = 1.0, d2 = 0.5, beta2 = 1.0;
  double beta = 1.0;

  void attach(CLI::App* app) {
    app->add_option("--model", type, "pareto2 | exp2 | laplace | zero")
        ->check(CLI::IsMember({"pareto2", "exp2", "laplace", "zero"}))
        ->capture_default_str();
    app->add_option("--c1", c1)->capture_default_str();
    app->add_option("--alpha1", alpha1)->capture_default_str();
    app->add_option("--c2", c2)->capture_default_str();
    app->add_option("--alpha2", alpha2)->capture_default_str();
    app->add_option("--d1", d1)->capture_default_str();
    app->add_option("--beta1", beta1)->capture_default_str();
    app->add_option("--d2", d2)->capture_default_str();
    app->add_option("--beta2", beta2)->capture_default_str();
    app->add_option("--beta", beta, "Laplace rate")->capture_default_str();
  }

  PerturbationModel build() const {
    if (type == "pareto2") return PerturbationModel::pareto2(c1, alpha1, c2, alpha2);
    if (type == "exp2") return PerturbationModel::exp2(d1, beta1, d2, beta2);
    if (type == "laplace") return PerturbationModel::laplace(beta);
    return PerturbationModel::zero();
  }
};

// A small table emitted as CSV or as a JSON array of records.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string render(const std::string& format) const {
    std::ostringstream os;
    if (format == "json") {
      json arr = json::array();
      for (const auto& r : rows) {
        json rec = json::object();
        for (std::size_t i = 0; i < columns.size(); ++i) rec[columns[i]] = r[i];
        arr.push_back(std::move(rec));
      }
      os << arr.dump(2) << "\n";
      return os.str();
    }
    auto line = [&](const std::vector<std::string>& v) {
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
      os << "\n";
    };
    line(columns);
    for (const auto& r : rows) line(r);
    return os.str();
  }
};

std::string fmt(double v) { return format_double(v); }

void emit(const Common& common, const std::string& text) {
  if (common.out.empty()) return;
  std::ofstream f(common.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + common.out + "'");
  f << text;
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  CLI::App app{"Scheduled-traffic queueing toolkit", "schedq"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--seed", common.seed, "master seed (default " + std::to_string(kDefaultSeed) + ")");
  app.add_option("--out", common.out, "output file (default: standard output)");
  app.add_option("--format", common.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--threads", common.threads, "worker threads, 0 = all cores")
      ->check(CLI::NonNegativeNumber);

  // constants
  double k_c = 1.0, k_alpha = 2.0;
  auto* constants = app.add_subcommand("constants", "r*, eta*, gamma for p_j = c (w+j)^-alpha");
  constants->add_option("--c", k_c)->capture_default_str();
  constants->add_option("--alpha", k_alpha)->capture_default_str();

  // tail-exact / tail-asymp
  double t_c = 1.0, t_alpha = 2.0, t_w = 1.0, t_eps = 1e-12;
  std::int64_t t_n = 10;
  std::string form = "i";
  auto* tail_exact = app.add_subcommand("tail-exact", "P(Z >= n) for p_j = c (w+j)^-alpha");
  auto* tail_asymp = app.add_subcommand("tail-asymp", "asymptotic P(Z >= n), form i or ii");
  for (auto* sub : {tail_exact, tail_asymp}) {
    sub->add_option("--c", t_c)->capture_default_str();
    sub->add_option("--alpha", t_alpha)->capture_default_str();
    sub->add_option("--w", t_w)->capture_default_str();
    sub->add_option("--n", t_n)->capture_default_str();
  }
  tail_exact->add_option("--eps", t_eps)->capture_default_str();
  tail_asymp->add_option("--form", form)->check(CLI::IsMember({"i", "ii"}))->capture_default_str();

  // covariance
  ModelFlags cov_model;
  double cov_u = 0.5, cov_eps = kDefaultPathEps;
  std::vector<std::int64_t> cov_n{2, 5, 10, 20, 50, 100, 200};
  auto* covariance = app.add_subcommand("covariance", "Cov(dN(1), dN(n) | U = u)");
  cov_model.attach(covariance);
  covariance->add_option("--u", cov_u)->capture_default_str();
  covariance->add_option("--n", cov_n, "lags")->capture_default_str();
  covariance->add_option("--eps", cov_eps, "absolute truncation tolerance")->capture_default_str();

  // path
  ModelFlags path_model;
  std::optional<double> path_u;
  std::vector<double> path_window{0.0, 10.0};
  double path_eps = kDefaultPathEps;
  auto* path = app.add_subcommand("path", "one arrival path on (lo, hi]");
  path_model.attach(path);
  path->add_option("--u", path_u, "fixed uniform shift (default: drawn)");
  path->add_option("--window", path_window, "lo hi")->expected(2)->capture_default_str();
  path->add_option("--eps", path_eps)->capture_default_str();

  // workload
  ModelFlags wl_model;
  std::optional<double> wl_u;
  double wl_rho = 1.0, wl_t = 1000.0, wl_eps = kDefaultPathEps;
  std::vector<double> wl_grid;
  std::string wl_service = "deterministic";
  auto* wl = app.add_subcommand("workload", "workload trace on (0, t], empty at 0");
  wl_model.attach(wl);
  wl->add_option("--u", wl_u, "fixed uniform shift (default: drawn)");
  wl->add_option("--rho", wl_rho)->capture_default_str();
  wl->add_option("--t", wl_t, "horizon")->capture_default_str();
  wl->add_option("--grid", wl_grid, "observation times (default: 1, 2, ..., t)");
  wl->add_option("--service", wl_service, "deterministic | exponential | uniform")
      ->capture_default_str();
  wl->add_option("--eps", wl_eps)->capture_default_str();

  // experiment
  std::string config_path;
  auto* experiment = app.add_subcommand("experiment", "run a configured experiment");
  experiment->add_option("--config", config_path, "JSON config file")->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitConfig;
  }
  common.seed_given = app.get_option("--seed")->count() > 0;

  try {
    std::string text;
    if (*constants) {
      const double r = solve_r_star(k_c, k_alpha);
      const double eta = eta_star(k_c, k_alpha, r);
      const double g = gamma_const(k_c, k_alpha, r);
      text = Table{{"c", "alpha", "r_star", "eta_star", "gamma"},
                   {{fmt(k_c), fmt(k_alpha), fmt(r), fmt(eta), fmt(g)}}}
                 .render(common.format);
    } else if (*tail_exact) {
      const TailProbability t = exact_tail(ParamSeq::power_law(t_c, t_w, t_alpha), t_n, t_eps);
      text = Table{{"c", "alpha", "w", "n", "log_value", "value", "error_bound", "truncation"},
                   {{fmt(t_c), fmt(t_alpha), fmt(t_w), std::to_string(t_n), fmt(t.log_value),
                     fmt(t.value), fmt(t.error_bound), std::to_string(t.truncation)}}}
                 .render(common.format);
    } else if (*tail_asymp) {
      const double v = form == "i"
                           ? asymp_tail_general(ParamSeq::power_law(t_c, t_w, t_alpha), t_n)
                           : asymp_tail_power(t_c, t_w, t_alpha, t_n);
      text = Table{{"form", "c", "alpha", "w", "n", "log_value"},
                   {{form, fmt(t_c), fmt(t_alpha), fmt(t_w), std::to_string(t_n), fmt(v)}}}
                 .render(common.format);
    } else if (*covariance) {
      const PerturbationModel model = cov_model.build();
      Table t{{"n", "cov"}, {}};
      for (const auto n : cov_n)
        t.rows.push_back({std::to_string(n), fmt(conditional_cov(model, cov_u, n, cov_eps))});
      text = t.render(common.format);
    } else if (*path) {
      RandomStream stream = RandomStream::derive(common.seed, "path", 0);
      const ArrivalPath p = generate_path(path_model.build(), path_window[0], path_window[1],
                                          path_u, stream, path_eps);
      if (common.format == "json") {
        json arr = json::array();
        for (const auto& a : p.entries()) arr.push_back({{"schedule_index", a.index}, {"arrival_time", fmt(a.time)}});
        text = json{{"u", fmt(p.u())}, {"t_lo", fmt(p.t_lo())}, {"t_hi", fmt(p.t_hi())},
                    {"eps", fmt(p.eps())}, {"arrivals", arr}}
                   .dump(2) + "\n";
      } else {
        std::ostringstream os;
        p.write_csv(os);
        text = os.str();
      }
    } else if (*wl) {
      const ServiceKind kind = parse_service(wl_service);
      RandomStream stream = RandomStream::derive(common.seed, "workload", 0);
      const ArrivalPath p = generate_path(wl_model.build(), 0.0, wl_t, wl_u, stream, wl_eps);
      const auto services = draw_services(kind, p.entries().size(), stream);
      std::vector<double> grid = wl_grid;
      if (grid.empty())
        for (double x = 1.0; x <= wl_t; x += 1.0) grid.push_back(x);
      const WorkloadTrace tr = workload(p, wl_rho, grid, services);
      if (common.format == "json") {
        json arr = json::array();
        for (std::size_t i = 0; i < tr.grid.size(); ++i)
          arr.push_back({{"t", fmt(tr.grid[i])}, {"W", fmt(tr.values[i])}});
        text = json{{"rho", fmt(tr.rho)}, {"trace", arr}}.dump(2) + "\n";
      } else {
        std::ostringstream os;
        tr.write_csv(os);
        text = os.str();
      }
    } else if (*experiment) {
      ExperimentConfig cfg = load_config(config_path);
      if (common.seed_given) cfg.seed = common.seed;
      const ExperimentResult res = run_experiment(cfg, common.threads);
      text = common.format == "json" ? res.to_json().dump(2) + "\n" : res.to_csv();
      if (!common.out.empty()) {
        std::ofstream meta(common.out + ".meta.json", std::ios::binary);
        if (!meta) throw std::runtime_error("cannot write '" + common.out + ".meta.json'");
        meta << res.metadata().dump(2) << "\n";
      }
    }
    if (common.out.empty()) {
      out << text;
    } else {
      emit(common, text);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "invalid parameter: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace schedq
