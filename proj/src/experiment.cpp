// Copyright 2026 The rblab Authors
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

#include "rblab/experiment.hpp"

#include "io_json.hpp"
#include "rblab/gauge.hpp"
#include "rblab/io.hpp"
#include "rblab/rb_theory.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

namespace rblab {
namespace {

using nlohmann::json;

struct Violations {
  std::vector<std::string> items;
  void add(const std::string& path, const std::string& message) { items.push_back(path + ": " + message); }
};

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed, Violations& v) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) v.add(join(path, key), "unknown key");
  }
}

bool require_object(const json& obj, const std::string& path, Violations& v) {
  if (!obj.is_object()) {
    v.add(path, "must be an object");
    return false;
  }
  return true;
}

std::optional<double> number(const json& obj, const std::string& key, const std::string& path, Violations& v,
                             bool required) {
  if (!obj.contains(key)) {
    if (required) v.add(join(path, key), "is required");
    return std::nullopt;
  }
  const json& x = obj.at(key);
  if (!x.is_number() || !std::isfinite(x.get<double>())) {
    v.add(join(path, key), "must be a finite number");
    return std::nullopt;
  }
  return x.get<double>();
}

std::optional<long long> integer(const json& obj, const std::string& key, const std::string& path, Violations& v,
                                 long long min_value) {
  if (!obj.contains(key)) return std::nullopt;
  const json& x = obj.at(key);
  if (!x.is_number_integer() || x.get<long long>() < min_value) {
    v.add(join(path, key), min_value == 1 ? "must be a positive integer" : "must be an integer >= " + std::to_string(min_value));
    return std::nullopt;
  }
  return x.get<long long>();
}

std::optional<Eigen::Vector3d> vector3(const json& obj, const std::string& key, const std::string& path, Violations& v) {
  if (!obj.contains(key)) {
    v.add(join(path, key), "is required");
    return std::nullopt;
  }
  const json& x = obj.at(key);
  if (!x.is_array() || x.size() != 3 || !std::all_of(x.begin(), x.end(), [](const json& e) { return e.is_number(); })) {
    v.add(join(path, key), "must be an array of 3 numbers");
    return std::nullopt;
  }
  return Eigen::Vector3d(x[0].get<double>(), x[1].get<double>(), x[2].get<double>());
}

std::optional<Superoperator> ptm(const json& obj, const std::string& key, const std::string& path, Violations& v) {
  if (!obj.contains(key)) {
    v.add(join(path, key), "is required");
    return std::nullopt;
  }
  const json& x = obj.at(key);
  bool ok = x.is_array() && x.size() == 4;
  for (std::size_t r = 0; ok && r < 4; ++r) {
    ok = x[r].is_array() && x[r].size() == 4 &&
         std::all_of(x[r].begin(), x[r].end(), [](const json& e) { return e.is_number(); });
  }
  if (!ok) {
    v.add(join(path, key), "must be a 4x4 array of numbers");
    return std::nullopt;
  }
  Eigen::MatrixXd m(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = x[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
  Superoperator s(m);
  if (!s.is_tp()) {
    v.add(join(path, key), "must be trace preserving (first row e0)");
    return std::nullopt;
  }
  return s;
}

// Sweepable scalar parameter of each error model.
const std::map<std::string, std::string>& sweep_parameters() {
  static const std::map<std::string, std::string> params{
      {"coherent_z", "theta"}, {"depolarizing", "lambda"}, {"amplitude_damping", "gamma"}, {"general", "lambda"}};
  return params;
}

std::optional<ErrorModel> parse_error_model(const json& obj, const std::string& path, Violations& v) {
  if (!require_object(obj, path, v)) return std::nullopt;
  if (!obj.contains("name") || !obj.at("name").is_string()) {
    v.add(join(path, "name"), "is required and must be a string");
    return std::nullopt;
  }
  const std::string name = obj.at("name").get<std::string>();
  const std::size_t before = v.items.size();
  auto in_unit = [&](const std::string& key, bool include_zero) -> std::optional<double> {
    auto x = number(obj, key, path, v, true);
    if (x && !((include_zero ? *x >= 0 : *x > 0) && *x <= 1)) {
      v.add(join(path, key), include_zero ? "must lie in [0, 1]" : "must lie in (0, 1]");
      return std::nullopt;
    }
    return x;
  };
  std::optional<ErrorModel> out;
  if (name == "perfect") {
    reject_unknown(obj, path, {"name"}, v);
    out = Perfect{};
  } else if (name == "coherent_z") {
    reject_unknown(obj, path, {"name", "theta"}, v);
    if (auto theta = number(obj, "theta", path, v, true)) out = CoherentZ{*theta};
  } else if (name == "general") {
    reject_unknown(obj, path, {"name", "rotation_x", "rotation_y", "lambda"}, v);
    auto x = vector3(obj, "rotation_x", path, v);
    auto y = vector3(obj, "rotation_y", path, v);
    auto lambda = in_unit("lambda", false);
    if (x && y && lambda) out = GeneralPrimitive::from_rotation_vectors(*x, *y, *lambda);
  } else if (name == "depolarizing") {
    reject_unknown(obj, path, {"name", "lambda"}, v);
    if (auto lambda = in_unit("lambda", false)) out = GateIndependent{depolarizing_channel(*lambda)};
  } else if (name == "amplitude_damping") {
    reject_unknown(obj, path, {"name", "gamma"}, v);
    if (auto gamma = in_unit("gamma", true)) out = GateIndependent{amplitude_damping_channel(*gamma)};
  } else if (name == "custom") {
    reject_unknown(obj, path, {"name", "error_x", "error_y"}, v);
    auto ex = ptm(obj, "error_x", path, v);
    auto ey = ptm(obj, "error_y", path, v);
    if (ex && ey) out = Custom{*ex, *ey};
  } else {
    v.add(join(path, "name"), "unknown error model '" + name + "'");
  }
  if (v.items.size() != before) return std::nullopt;
  return out;
}

std::optional<Command> parse_command(const std::string& s) {
  if (s == "simulate") return Command::kSimulate;
  if (s == "theory") return Command::kTheory;
  if (s == "sweep") return Command::kSweep;
  if (s == "gauge-demo") return Command::kGaugeDemo;
  if (s == "counterexample") return Command::kCounterexample;
  return std::nullopt;
}

void parse_lengths(const json& x, const std::string& path, Violations& v, RBConfig& rb) {
  if (x.is_array()) {
    std::vector<int> out;
    for (const auto& e : x) {
      if (!e.is_number_integer()) {
        v.add(path, "must contain integers only");
        return;
      }
      out.push_back(e.get<int>());
    }
    rb.lengths = std::move(out);
  } else if (x.is_object()) {
    reject_unknown(x, path, {"start", "stop", "step"}, v);
    auto start = integer(x, "start", path, v, 1);
    auto stop = integer(x, "stop", path, v, 1);
    auto step = integer(x, "step", path, v, 1);
    if (!start || !stop || !step) {
      if (!x.contains("start") || !x.contains("stop") || !x.contains("step")) v.add(path, "needs start, stop and step");
      return;
    }
    rb.lengths.clear();
    for (long long m = *start; m <= *stop; m += *step) rb.lengths.push_back(static_cast<int>(m));
  } else {
    v.add(path, "must be an array of integers or {start, stop, step}");
    return;
  }
  if (rb.lengths.empty()) {
    v.add(path, "must not be empty");
    return;
  }
  for (std::size_t i = 0; i < rb.lengths.size(); ++i) {
    if (rb.lengths[i] < 1) {
      v.add(path, "lengths must be >= 1");
      return;
    }
    if (i > 0 && rb.lengths[i] <= rb.lengths[i - 1]) {
      v.add(path, "lengths must be strictly increasing");
      return;
    }
  }
}

ErrorModel model_or_throw(const json& obj) {
  Violations v;
  auto m = parse_error_model(obj, "error_model", v);
  if (!m) throw std::invalid_argument(v.items.empty() ? "invalid error model" : v.items.front());
  return *m;
}

void write_file(const std::filesystem::path& path, const std::string& content, RunResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
  result.files.push_back(path.string());
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::kSimulate:
      return "simulate";
    case Command::kTheory:
      return "theory";
    case Command::kSweep:
      return "sweep";
    case Command::kGaugeDemo:
      return "gauge-demo";
    case Command::kCounterexample:
      return "counterexample";
  }
  return "unknown";
}

ErrorModel ExperimentConfig::error_model() const { return model_or_throw(json::parse(error_model_json)); }

ErrorModel ExperimentConfig::error_model_with(const std::string& parameter, double value) const {
  json obj = json::parse(error_model_json);
  obj[parameter] = value;
  return model_or_throw(obj);
}

std::string ExperimentConfig::resolved_json() const {
  json rb_obj{{"lengths", rb.lengths},
              {"k_per_length", rb.k_per_length},
              {"repeats", rb.repeats},
              {"fit_model", to_string(fit_model)}};
  json out{{"command", to_string(command)},
           {"seed", seed},
           {"error_model", json::parse(error_model_json)},
           {"rb", std::move(rb_obj)},
           {"sweep", {{"parameter", sweep.parameter}, {"values", sweep.values}}},
           {"gauge", {{"restarts", gauge.restarts}}},
           {"counterexample",
            {{"lambda", counterexample.lambda},
             {"alpha_min", counterexample.alpha_min},
             {"alpha_max", counterexample.alpha_max},
             {"points", counterexample.points}}},
           {"output", {{"prefix", output_prefix}}}};
  return out.dump();
}

ConfigReport parse_experiment_config(const std::string& text) {
  ConfigReport report;
  Violations v;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    report.violations.push_back(std::string("(root): not valid JSON: ") + e.what());
    return report;
  }
  if (!require_object(root, "(root)", v)) {
    report.violations = v.items;
    return report;
  }
  reject_unknown(root, "", {"command", "seed", "error_model", "rb", "sweep", "gauge", "counterexample", "output"}, v);

  ExperimentConfig c;
  if (!root.contains("command") || !root.at("command").is_string()) {
    v.add("command", "is required and must be a string");
  } else if (auto cmd = parse_command(root.at("command").get<std::string>())) {
    c.command = *cmd;
  } else {
    v.add("command", "unknown command '" + root.at("command").get<std::string>() + "'");
  }

  if (root.contains("seed")) {
    if (!root.at("seed").is_number_unsigned()) {
      v.add("seed", "must be a non-negative integer");
    } else {
      c.seed = root.at("seed").get<std::uint64_t>();
    }
  }

  if (root.contains("error_model")) {
    const std::size_t before = v.items.size();
    parse_error_model(root.at("error_model"), "error_model", v);
    if (v.items.size() == before) c.error_model_json = root.at("error_model").dump();
  }

  if (root.contains("rb") && require_object(root.at("rb"), "rb", v)) {
    const json& rb = root.at("rb");
    reject_unknown(rb, "rb", {"lengths", "k_per_length", "repeats", "fit_model"}, v);
    if (rb.contains("lengths")) parse_lengths(rb.at("lengths"), "rb.lengths", v, c.rb);
    if (auto k = integer(rb, "k_per_length", "rb", v, 1)) c.rb.k_per_length = static_cast<int>(*k);
    if (auto r = integer(rb, "repeats", "rb", v, 1)) c.rb.repeats = static_cast<int>(*r);
    if (rb.contains("fit_model")) {
      const json& f = rb.at("fit_model");
      if (f == "zeroth") {
        c.fit_model = FitModel::kZeroth;
      } else if (f == "first") {
        c.fit_model = FitModel::kFirst;
      } else {
        v.add("rb.fit_model", "must be \"zeroth\" or \"first\"");
      }
    }
  }

  if (root.contains("sweep") && require_object(root.at("sweep"), "sweep", v)) {
    const json& s = root.at("sweep");
    reject_unknown(s, "sweep", {"parameter", "values"}, v);
    if (s.contains("parameter")) {
      if (s.at("parameter").is_string()) {
        c.sweep.parameter = s.at("parameter").get<std::string>();
      } else {
        v.add("sweep.parameter", "must be a string");
      }
    }
    if (s.contains("values")) {
      const json& vals = s.at("values");
      if (!vals.is_array() || !std::all_of(vals.begin(), vals.end(), [](const json& e) { return e.is_number(); })) {
        v.add("sweep.values", "must be an array of numbers");
      } else {
        for (const auto& e : vals) c.sweep.values.push_back(e.get<double>());
      }
    }
  }

  if (root.contains("gauge") && require_object(root.at("gauge"), "gauge", v)) {
    reject_unknown(root.at("gauge"), "gauge", {"restarts"}, v);
    if (auto r = integer(root.at("gauge"), "restarts", "gauge", v, 1)) c.gauge.restarts = static_cast<int>(*r);
  }

  if (root.contains("counterexample") && require_object(root.at("counterexample"), "counterexample", v)) {
    const json& ce = root.at("counterexample");
    reject_unknown(ce, "counterexample", {"lambda", "alpha_min", "alpha_max", "points"}, v);
    if (auto x = number(ce, "lambda", "counterexample", v, false)) {
      if (*x >= 0 && *x < 1) {
        c.counterexample.lambda = *x;
      } else {
        v.add("counterexample.lambda", "must lie in [0, 1)");
      }
    }
    if (auto x = number(ce, "alpha_min", "counterexample", v, false)) c.counterexample.alpha_min = *x;
    if (auto x = number(ce, "alpha_max", "counterexample", v, false)) c.counterexample.alpha_max = *x;
    if (auto n = integer(ce, "points", "counterexample", v, 1)) c.counterexample.points = static_cast<int>(*n);
    if (!(c.counterexample.alpha_min > 0) || c.counterexample.alpha_max < c.counterexample.alpha_min) {
      v.add("counterexample", "needs 0 < alpha_min <= alpha_max");
    }
  }

  if (root.contains("output") && require_object(root.at("output"), "output", v)) {
    const json& o = root.at("output");
    reject_unknown(o, "output", {"dir", "prefix"}, v);
    for (const char* key : {"dir", "prefix"}) {
      if (!o.contains(key)) continue;
      if (!o.at(key).is_string()) {
        v.add(join("output", key), "must be a string");
      } else {
        (std::string(key) == "dir" ? c.output_dir : c.output_prefix) = o.at(key).get<std::string>();
      }
    }
  }
  if (c.output_prefix.empty()) c.output_prefix = to_string(c.command);

  if (c.command == Command::kSweep && v.items.empty()) {
    const std::string model = json::parse(c.error_model_json).at("name").get<std::string>();
    const auto it = sweep_parameters().find(model);
    if (it == sweep_parameters().end()) {
      v.add("sweep.parameter", "error model '" + model + "' has no sweepable parameter");
    } else if (c.sweep.parameter != it->second) {
      v.add("sweep.parameter", "must be '" + it->second + "' for error model '" + model + "'");
    } else if (c.sweep.values.empty()) {
      v.add("sweep.values", "must not be empty");
    } else {
      for (double x : c.sweep.values) {
        try {
          c.error_model_with(c.sweep.parameter, x);
        } catch (const std::invalid_argument& e) {
          v.add("sweep.values", std::string("value ") + io::format_double(x) + " rejected (" + e.what() + ")");
        }
      }
    }
  }

  report.violations = v.items;
  if (report.ok()) report.config = c;
  return report;
}

RunResult run_experiment(const ExperimentConfig& config) {
  RunResult result;
  const std::string name = to_string(config.command);
  try {
    std::filesystem::create_directories(config.output_dir);
    const std::filesystem::path dir(config.output_dir);
    auto path = [&](const std::string& suffix) { return dir / (config.output_prefix + suffix); };
    const io::Provenance prov{config.resolved_json(), config.seed};
    RBConfig rb = config.rb;
    rb.seed = config.seed;

    switch (config.command) {
      case Command::kSimulate: {
        const GateSet gs = GateSet::build(config.error_model());
        write_file(path("_gateset.json"), io::gateset_json(gs, prov), result);
        const RBDataset data = run_rb(gs, rb);
        write_file(path("_rb.csv"), io::rb_dataset_table(data, rb.k_per_length).render(prov), result);
        const FitModel other = config.fit_model == FitModel::kZeroth ? FitModel::kFirst : FitModel::kZeroth;
        const auto est = estimate_r(gs, rb, {config.fit_model, other});
        write_file(path("_fit.json"), io::estimate_json(est, prov), result);
        break;
      }
      case Command::kTheory: {
        const GateSet gs = GateSet::build(config.error_model());
        write_file(path("_gateset.json"), io::gateset_json(gs, prov), result);
        const Spam spam = rb.resolved_spam();
        const ExactDecay exact = exact_decay(gs, spam, rb.lengths);
        const auto predicted = predicted_decay(gs, spam, rb.lengths);
        const GammaResult gamma = gamma_and_r_gamma(build_l_map(gs));
        const DeltaBound delta = delta_diamond(gs);
        write_file(path("_theory.csv"),
                   io::theory_table(rb.lengths, exact.p, predicted, delta.delta_diamond).render(prov), result);
        write_file(path("_theory.json"), io::theory_json(gamma, delta, prov), result);
        break;
      }
      case Command::kSweep: {
        std::vector<io::SweepRow> rows;
        for (double x : config.sweep.values) {
          const GateSet gs = GateSet::build(config.error_model_with(config.sweep.parameter, x));
          io::SweepRow row;
          row.parameter = x;
          const auto est = estimate_r(gs, rb, config.fit_model);
          row.r_hat = est.r_mean;
          row.r_std = est.r_std;
          row.r_gamma = gamma_and_r_gamma(build_l_map(gs)).r_gamma;
          row.epsilon = agsi(gs);
          rows.push_back(row);
        }
        write_file(path("_sweep.csv"), io::sweep_table(config.sweep.parameter, rows).render(prov), result);
        break;
      }
      case Command::kGaugeDemo: {
        const GateSet gs = GateSet::build(config.error_model());
        const WallmanGauge w = wallman_gauge(gs);
        const EpsilonMinResult emin = epsilon_min_search(gs, config.gauge.restarts, config.seed);
        const GaugeReport report = gauge_report(gs, GaugeTransform(w.l_op.inverse().ptm()), w.r_gamma);
        write_file(path("_gauge.json"), io::gauge_demo_json(agsi(gs), w, emin, report, prov), result);
        break;
      }
      case Command::kCounterexample: {
        const auto& ce = config.counterexample;
        const auto res =
            counterexample_epsilon_min(ce.lambda, linear_grid(ce.alpha_min, ce.alpha_max, ce.points));
        write_file(path("_counterexample.csv"), io::counterexample_table(res).render(prov), result);
        break;
      }
    }
  } catch (const std::exception& e) {
    throw std::runtime_error(name + ": " + e.what());
  }
  return result;
}

}  // namespace rblab
