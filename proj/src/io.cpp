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

#include "rblab/io.hpp"

#include "io_json.hpp"

#include <charconv>
#include <numeric>
#include <sstream>
#include <system_error>

namespace rblab::io {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (res.ec != std::errc()) throw std::runtime_error("failed to format double");
  return std::string(buf, res.ptr);
}

std::string CsvTable::render(const Provenance& provenance) const {
  std::ostringstream os;
  os << "# config: " << provenance.config_json << '\n';
  os << "# seed: " << provenance.seed << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

CsvTable rb_dataset_table(const RBDataset& data, int k_per_length) {
  CsvTable t{{"m", "p_mean", "p_std_across_sequences", "k"}, {}};
  const auto stds = data.stds();
  for (std::size_t l = 0; l < data.lengths.size(); ++l) {
    t.rows.push_back({std::to_string(data.lengths[l]), format_double(data.means[l]), format_double(stds[l]),
                      std::to_string(k_per_length)});
  }
  return t;
}

CsvTable theory_table(const std::vector<int>& lengths, const std::vector<double>& p_exact,
                      const std::vector<double>& p_predicted, double delta) {
  CsvTable t{{"m", "p_exact", "p_predicted", "bound_lo", "bound_hi"}, {}};
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    t.rows.push_back({std::to_string(lengths[i]), format_double(p_exact[i]), format_double(p_predicted[i]),
                      format_double(p_predicted[i] - delta), format_double(p_predicted[i] + delta)});
  }
  return t;
}

CsvTable counterexample_table(const CounterexampleResult& result) {
  CsvTable t{{"alpha", "epsilon", "min_choi_eigenvalue", "all_cp", "r_reference"}, {}};
  for (const auto& row : result.rows) {
    t.rows.push_back({format_double(row.alpha), format_double(row.epsilon), format_double(row.min_choi_eigenvalue),
                      row.all_cp ? "true" : "false", format_double(row.r_reference)});
  }
  return t;
}

CsvTable sweep_table(const std::string& parameter, const std::vector<SweepRow>& rows) {
  CsvTable t{{parameter, "r_hat", "r_std", "r_gamma", "epsilon"}, {}};
  for (const auto& row : rows) {
    t.rows.push_back({format_double(row.parameter), format_double(row.r_hat), format_double(row.r_std),
                      format_double(row.r_gamma), format_double(row.epsilon)});
  }
  return t;
}

namespace {

json with_provenance(json body, const Provenance& provenance) {
  body["seed"] = provenance.seed;
  body["config"] = json::parse(provenance.config_json);
  return body;
}

json estimate_object(const RBEstimate& e) {
  double a = 0, b = 0, c = 0, p = 0;
  int n = 0, no_decay = 0, at_bound = 0;
  for (const auto& f : e.fits) {
    no_decay += f.no_decay;
    at_bound += f.p_at_bound;
    a += f.a;
    b += f.b;
    c += f.c;
    p += f.p;
    ++n;
  }
  if (n > 0) {
    a /= n;
    b /= n;
    c /= n;
    p /= n;
  }
  return json{{"model", to_string(e.model)}, {"A", a},      {"B", b},
              {"C", c},                      {"p", p},      {"r_hat", e.r_mean},
              {"r_std", e.r_std},            {"failures", e.failures},
              {"no_decay_fits", no_decay},   {"p_at_bound_fits", at_bound},
              {"repeats", e.fits.size() + static_cast<std::size_t>(e.failures)}};
}

json complex_array(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
  return out;
}

}  // namespace

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c) + 0.0);
    rows.push_back(std::move(row));
  }
  return rows;
}

json error_model_json(const ErrorModel& model) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Perfect>) {
          return json{{"name", "perfect"}};
        } else if constexpr (std::is_same_v<T, CoherentZ>) {
          return json{{"name", "coherent_z"}, {"theta", m.theta}};
        } else if constexpr (std::is_same_v<T, GeneralPrimitive>) {
          return json{{"name", "general"},
                      {"rotation_x", {m.theta_x * m.axis_x.x(), m.theta_x * m.axis_x.y(), m.theta_x * m.axis_x.z()}},
                      {"rotation_y", {m.theta_y * m.axis_y.x(), m.theta_y * m.axis_y.y(), m.theta_y * m.axis_y.z()}},
                      {"lambda", m.lambda}};
        } else if constexpr (std::is_same_v<T, GateIndependent>) {
          return json{{"name", "gate_independent"}, {"ptm", matrix_json(m.lambda.ptm())}};
        } else {
          return json{{"name", "custom"}, {"error_x", matrix_json(m.error_x.ptm())}, {"error_y", matrix_json(m.error_y.ptm())}};
        }
      },
      model);
}

std::string estimate_json(const std::vector<RBEstimate>& estimates, const Provenance& provenance) {
  if (estimates.empty()) throw std::invalid_argument("estimate_json needs at least one estimate");
  json body = estimate_object(estimates.front());
  json others = json::array();
  for (std::size_t i = 1; i < estimates.size(); ++i) others.push_back(estimate_object(estimates[i]));
  body["other_models"] = std::move(others);
  return with_provenance(std::move(body), provenance).dump(2) + "\n";
}

std::string theory_json(const GammaResult& gamma, const DeltaBound& delta, const Provenance& provenance) {
  json body{{"gamma", gamma.gamma},
            {"r_gamma", gamma.r_gamma},
            {"delta_diamond", delta.delta_diamond},
            {"eigenvalues", complex_array(gamma.eigenvalues)}};
  return with_provenance(std::move(body), provenance).dump(2) + "\n";
}

namespace {

json wallman_object(const WallmanGauge& w) {
  return json{{"l_op", matrix_json(w.l_op.ptm())},
              {"gamma", w.gamma},
              {"r_gamma", w.r_gamma},
              {"epsilon_in_gauge", w.epsilon_in_gauge},
              {"min_choi_eigenvalue", w.min_choi_eigenvalue},
              {"all_cp", w.min_choi_eigenvalue >= -tol::kStructural},
              {"null_space_dim", w.null_space_dim},
              {"residual", w.residual}};
}

}  // namespace

std::string wallman_json(const WallmanGauge& w, const Provenance& provenance) {
  return with_provenance(wallman_object(w), provenance).dump(2) + "\n";
}

std::string gauge_demo_json(double epsilon_input, const WallmanGauge& w, const EpsilonMinResult& emin,
                            const GaugeReport& report, const Provenance& provenance) {
  json body{{"epsilon_input", epsilon_input},
            {"wallman", wallman_object(w)},
            {"epsilon_min_search",
             {{"epsilon_min", emin.epsilon_min},
              {"epsilon_input", emin.epsilon_input},
              {"improved", emin.improved},
              {"min_choi_eigenvalue", emin.min_choi_eigenvalue},
              {"restarts", emin.restarts},
              {"m_best", matrix_json(emin.m_best.matrix())}}},
            {"gauge_report",
             {{"epsilon_before", report.epsilon_before},
              {"epsilon_after", report.epsilon_after},
              {"all_cp_after", report.all_cp_after},
              {"min_choi_eigenvalue_after", report.min_choi_eigenvalue_after},
              {"r_reference", report.r_reference},
              {"negative_epsilon", report.epsilon_after < 0}}}};
  return with_provenance(std::move(body), provenance).dump(2) + "\n";
}

std::string gateset_json(const GateSet& gateset, const Provenance& provenance) {
  json prims = json::object();
  prims["Gx"] = matrix_json(gateset.primitives()[0].ptm());
  prims["Gy"] = matrix_json(gateset.primitives()[1].ptm());
  json cliffords = json::array();
  for (int i = 0; i < gateset.size(); ++i) {
    json word = json::array();
    for (Primitive p : gateset.compilation().words[static_cast<std::size_t>(i)]) word.push_back(to_string(p));
    cliffords.push_back({{"index", i},
                         {"word", std::move(word)},
                         {"ideal", matrix_json(gateset.ideal().elements[static_cast<std::size_t>(i)].ptm())},
                         {"imperfect", matrix_json(gateset.imperfect(i).ptm())}});
  }
  json body{{"error_model", error_model_json(gateset.error_model())},
            {"primitives", std::move(prims)},
            {"cliffords", std::move(cliffords)}};
  return with_provenance(std::move(body), provenance).dump(2) + "\n";
}

}  // namespace rblab::io
