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

// Experiment configuration: schema, defaults, strict JSON loading.

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "schedq/error.hpp"
#include "schedq/experiments.hpp"
#include "schedq/format.hpp"
#include "schedq/queue.hpp"

namespace schedq {
namespace {

using nlohmann::json;
using Kind = ConfigError::Kind;

[[noreturn]] void invalid(const std::string& what) {
  throw ConfigError(Kind::kValidation, what);
}

enum class Type { kNumber, kInteger, kNumberList, kIntegerList, kString, kBool };

// Admissibility of one scalar; returns an error message or "".
using Check = std::function<std::string(const json&)>;

struct Knob {
  std::string name;
  Type type;
  json fallback;
  Check check;
};

Check in_range(double lo, bool lo_open, double hi, bool hi_open) {
  return [=](const json& v) -> std::string {
    const double x = v.get<double>();
    const bool ok = std::isfinite(x) && (lo_open ? x > lo : x >= lo) &&
                    (hi_open ? x < hi : x <= hi);
    if (ok) return "";
    return std::string("must lie in ") + (lo_open ? "(" : "[") + format_double(lo) +
           ", " + format_double(hi) + (hi_open ? ")" : "]");
  };
}

Check at_least(double lo) { return in_range(lo, false, INFINITY, true); }
Check above(double lo) { return in_range(lo, true, INFINITY, true); }

Check service_check() {
  return [](const json& v) -> std::string {
    try {
      parse_service(v.get<std::string>());
      return "";
    } catch (const InvalidArgument&) {
      return "must be one of deterministic, exponential, uniform";
    }
  };
}

Check no_check() {
  return [](const json&) { return std::string(); };
}

struct Schema {
  std::int64_t replications;
  std::int64_t min_replications;
  std::vector<Knob> knobs;
};

const std::map<std::string, Schema>& schemas() {
  // 1 - 1/e: below it log log(1/(1 - rho)) is not positive.
  static const double kRhoMin = 1.0 - std::exp(-1.0);
  static const std::map<std::string, Schema> table = {
      {"covariance",
       {20000, 2,
        {{"u", Type::kNumber, 0.5, in_range(0, true, 1, true)},
         {"n_grid", Type::kIntegerList, {2, 5, 10, 20, 50, 100, 200}, at_least(2)},
         {"mc_n_grid", Type::kIntegerList, {3, 10}, at_least(2)}}}},
      {"bernoulli_tails",
       {2000, 2,
        {{"c", Type::kNumber, 1.0, above(0)},
         {"alpha", Type::kNumber, 2.0, above(1)},
         {"w", Type::kNumber, 1.0, above(0)},
         {"n_grid", Type::kIntegerList, {10, 20, 30, 40}, in_range(1, false, 400, false)},
         {"z_grid", Type::kIntegerList, {10, 20, 30}, in_range(3, false, 400, false)},
         {"u", Type::kNumber, 0.5, in_range(0, true, 1, true)},
         {"s", Type::kNumber, 0.25, in_range(0, false, 1, true)},
         {"x_grid", Type::kIntegerList, {2, 4, 6, 8, 10, 12}, in_range(2, false, 60, false)},
         {"e0_n_grid", Type::kIntegerList, {10, 20}, in_range(1, false, 400, false)}}}},
      {"critical_loading",
       {200, 200,
        {{"t_grid", Type::kNumberList, {1e3, 1e4, 1e5, 1e6}, in_range(1e3, false, 1e6, false)},
         {"service", Type::kString, "deterministic", service_check()}}}},
      {"heavy_traffic",
       {200, 2,
        {{"rho_grid", Type::kNumberList, {0.9, 0.99}, in_range(kRhoMin, true, 1, true)},
         {"horizon_mult", Type::kNumber, 20.0, in_range(20, false, 1e4, false)},
         {"service", Type::kString, "deterministic", service_check()},
         {"burn_in_check", Type::kBool, true, no_check()}}}},
      {"sg1_fclt",
       {200, 2,
        {{"t_grid", Type::kNumberList, {1e4, 1e6}, in_range(1, false, 1e8, false)},
         {"service", Type::kString, "exponential", service_check()},
         {"variance_n", Type::kNumber, 1e5, in_range(1, false, 1e8, false)}}}},
      {"limit_distribution",
       {10000, 2,
        {{"s_grid", Type::kNumberList, {0.0, 0.25, 0.5}, in_range(0, false, 1, true)},
         {"n", Type::kInteger, 1000, in_range(1, false, 1e7, false)},
         {"level", Type::kNumber, 0.01, in_range(0, true, 1, true)}}}},
  };
  return table;
}

const std::set<std::string> kCommon = {"experiment", "seed", "replications", "model", "eps"};

bool is_integer(const json& v) { return v.is_number_integer() || v.is_number_unsigned(); }

json normalize(const Knob& knob, const json& value) {
  const std::string& name = knob.name;
  auto scalar = [&](const json& v, bool integer) -> json {
    if (integer ? !is_integer(v) : !v.is_number()) {
      invalid(name + (integer ? " must be an integer" : " must be a number"));
    }
    if (!integer && !std::isfinite(v.get<double>())) invalid(name + " must be finite");
    const json out = integer ? json(v.get<std::int64_t>()) : json(v.get<double>());
    if (std::string why = knob.check(out); !why.empty()) invalid(name + " " + why);
    return out;
  };
  switch (knob.type) {
    case Type::kNumber:
      return scalar(value, false);
    case Type::kInteger:
      return scalar(value, true);
    case Type::kNumberList:
    case Type::kIntegerList: {
      if (!value.is_array() || value.empty()) invalid(name + " must be a non-empty array");
      json out = json::array();
      for (const auto& v : value) out.push_back(scalar(v, knob.type == Type::kIntegerList));
      return out;
    }
    case Type::kString: {
      if (!value.is_string()) invalid(name + " must be a string");
      if (std::string why = knob.check(value); !why.empty()) invalid(name + " " + why);
      return value;
    }
    case Type::kBool:
      if (!value.is_boolean()) invalid(name + " must be true or false");
      return value;
  }
  invalid(name + ": unknown knob type");
}

// Default model: symmetric Pareto tails with exponent 2.
json default_model() {
  return PerturbationModel::pareto2(0.25, 2.0, 0.25, 2.0).to_json();
}

}  // namespace

const std::vector<std::string>& registered_experiments() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, schema] : schemas()) out.push_back(name);
    return out;
  }();
  return names;
}

json ExperimentConfig::to_json() const {
  json out = knobs;
  out["experiment"] = experiment;
  out["seed"] = seed;
  out["replications"] = replications;
  out["model"] = model.to_json();
  out["eps"] = eps;
  return out;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.experiment == b.experiment && a.seed == b.seed &&
         a.replications == b.replications && a.model == b.model && a.eps == b.eps &&
         a.knobs == b.knobs;
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) invalid("config must be a JSON object");
  if (!doc.contains("experiment") || !doc.at("experiment").is_string()) {
    invalid("experiment must be a string naming one of the registered experiments");
  }
  ExperimentConfig cfg;
  cfg.experiment = doc.at("experiment").get<std::string>();
  const auto it = schemas().find(cfg.experiment);
  if (it == schemas().end()) {
    std::string names;
    for (const auto& n : registered_experiments()) names += (names.empty() ? "" : ", ") + n;
    invalid("unknown experiment '" + cfg.experiment + "' (expected one of " + names + ")");
  }
  const Schema& schema = it->second;

  for (const auto& [key, value] : doc.items()) {
    if (kCommon.count(key)) continue;
    bool known = false;
    for (const auto& k : schema.knobs) known = known || k.name == key;
    if (!known) invalid("unknown field '" + key + "' for experiment " + cfg.experiment);
  }

  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (s.is_number_unsigned()) {
      cfg.seed = s.get<std::uint64_t>();
    } else if (s.is_number_integer() && s.get<std::int64_t>() >= 0) {
      cfg.seed = static_cast<std::uint64_t>(s.get<std::int64_t>());
    } else {
      invalid("seed must be a non-negative 64-bit integer");
    }
  }
  cfg.replications = schema.replications;
  if (doc.contains("replications")) {
    if (!is_integer(doc.at("replications"))) invalid("replications must be an integer");
    cfg.replications = doc.at("replications").get<std::int64_t>();
  }
  if (cfg.replications < schema.min_replications) {
    invalid("replications must be at least " + std::to_string(schema.min_replications) +
            " for " + cfg.experiment);
  }
  cfg.model = PerturbationModel::from_json(doc.contains("model") ? doc.at("model")
                                                                 : default_model());
  if (doc.contains("eps")) {
    const json& e = doc.at("eps");
    if (!e.is_number() || !(e.get<double>() > 0.0) || !(e.get<double>() < 1.0)) {
      invalid("eps must be a number in (0, 1)");
    }
    cfg.eps = e.get<double>();
  }
  cfg.knobs = json::object();
  for (const auto& knob : schema.knobs) {
    cfg.knobs[knob.name] =
        normalize(knob, doc.contains(knob.name) ? doc.at(knob.name) : knob.fallback);
  }

  if (cfg.experiment == "bernoulli_tails") {
    const double c = cfg.knobs["c"], w = cfg.knobs["w"], alpha = cfg.knobs["alpha"];
    if (c * std::pow(w, -alpha) > 1.0) invalid("c * w^-alpha must not exceed 1");
    if (cfg.knobs["u"] == cfg.knobs["s"]) invalid("u and s must differ");
  }
  return cfg;
}

json parse_json_strict(const std::string& text) {
  // One key set per open object.
  std::vector<std::set<std::string>> open;
  json::parser_callback_t cb = [&](int, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
        open.emplace_back();
        break;
      case json::parse_event_t::object_end:
        open.pop_back();
        break;
      case json::parse_event_t::key: {
        const std::string key = parsed.get<std::string>();
        if (!open.back().insert(key).second) {
          throw ConfigError(Kind::kParse, "duplicate key '" + key + "'");
        }
        break;
      }
      default:
        break;
    }
    return true;
  };
  try {
    return json::parse(text, cb);
  } catch (const json::parse_error& e) {
    throw ConfigError(Kind::kParse, e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(Kind::kMissingFile, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = parse_json_strict(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(Kind::kParse, "parse error in '" + path + "': " + e.what());
  }
  try {
    return parse_config(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(Kind::kValidation, "validation error in '" + path + "': " + e.what());
  }
}

}  // namespace schedq
