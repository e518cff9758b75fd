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

#include "rblab/clifford.hpp"
#include "rblab/experiment.hpp"
#include "rblab/gauge.hpp"
#include "rblab/rb_protocol.hpp"
#include "rblab/rb_theory.hpp"
#include "rblab/superop.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

namespace py = pybind11;
using namespace rblab;

namespace {

FitModel parse_model(const std::string& name) {
  if (name == "zeroth") return FitModel::kZeroth;
  if (name == "first") return FitModel::kFirst;
  throw std::invalid_argument("model must be 'zeroth' or 'first', got '" + name + "'");
}

Superoperator tp_map(const Eigen::MatrixXd& ptm) {
  if (ptm.rows() != 4 || ptm.cols() != 4) throw DimensionError("expected a 4x4 PTM");
  return Superoperator(ptm);
}

py::dict wallman_dict(const WallmanGauge& w) {
  py::dict d;
  d["l_op"] = w.l_op.ptm();
  d["gamma"] = w.gamma;
  d["r_gamma"] = w.r_gamma;
  d["epsilon_in_gauge"] = w.epsilon_in_gauge;
  d["min_choi_eigenvalue"] = w.min_choi_eigenvalue;
  d["null_space_dim"] = w.null_space_dim;
  d["residual"] = w.residual;
  return d;
}

}  // namespace

PYBIND11_MODULE(_rblab, m) {
  m.doc() = "Randomized benchmarking simulator with gate-dependent noise and gauge analysis";

  py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);
  py::register_exception<SpectralAssumptionError>(m, "SpectralAssumptionError", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);

  py::class_<GateSet>(m, "GateSet")
      .def_static("perfect", [] { return GateSet::build(Perfect{}); })
      .def_static("coherent_z", [](double theta) { return GateSet::build(CoherentZ{theta}); }, py::arg("theta"))
      .def_static(
          "general",
          [](const Eigen::Vector3d& rx, const Eigen::Vector3d& ry, double lambda) {
            return GateSet::build(GeneralPrimitive::from_rotation_vectors(rx, ry, lambda));
          },
          py::arg("rotation_x"), py::arg("rotation_y"), py::arg("lam"))
      .def_static(
          "depolarizing", [](double lambda) { return GateSet::build(GateIndependent{depolarizing_channel(lambda)}); },
          py::arg("lam"))
      .def_static(
          "custom",
          [](const Eigen::MatrixXd& ex, const Eigen::MatrixXd& ey) {
            return GateSet::build(Custom{tp_map(ex), tp_map(ey)});
          },
          py::arg("error_x"), py::arg("error_y"))
      .def_property_readonly("size", &GateSet::size)
      .def_property_readonly("error_model", [](const GateSet& g) { return error_model_name(g.error_model()); })
      .def("imperfect", [](const GateSet& g, int i) {
        if (i < 0 || i >= g.size()) throw py::index_error("Clifford index out of range");
        return Eigen::MatrixXd(g.imperfect(i).ptm());
      })
      .def("ideal", [](const GateSet& g, int i) {
        if (i < 0 || i >= g.size()) throw py::index_error("Clifford index out of range");
        return Eigen::MatrixXd(g.ideal().elements[static_cast<std::size_t>(i)].ptm());
      })
      .def("word", [](const GateSet& g, int i) {
        if (i < 0 || i >= g.size()) throw py::index_error("Clifford index out of range");
        std::vector<std::string> out;
        for (Primitive p : g.compilation().words[static_cast<std::size_t>(i)]) out.emplace_back(to_string(p));
        return out;
      })
      .def(
          "gauged", [](const GateSet& g, const Eigen::MatrixXd& mat) { return apply_gauge(g, GaugeTransform(mat)); },
          py::arg("m"));

  py::class_<RBConfig>(m, "RBConfig")
      .def(py::init<>())
      .def_readwrite("lengths", &RBConfig::lengths)
      .def_readwrite("k_per_length", &RBConfig::k_per_length)
      .def_readwrite("seed", &RBConfig::seed)
      .def_readwrite("repeats", &RBConfig::repeats);

  py::class_<FitResult>(m, "FitResult")
      .def_property_readonly("model", [](const FitResult& f) { return std::string(to_string(f.model)); })
      .def_readonly("a", &FitResult::a)
      .def_readonly("b", &FitResult::b)
      .def_readonly("c", &FitResult::c)
      .def_readonly("p", &FitResult::p)
      .def_readonly("r_hat", &FitResult::r_hat)
      .def_readonly("residual_norm", &FitResult::residual_norm)
      .def_readonly("no_decay", &FitResult::no_decay)
      .def_readonly("p_at_bound", &FitResult::p_at_bound);

  py::class_<RBEstimate>(m, "RBEstimate")
      .def_property_readonly("model", [](const RBEstimate& e) { return std::string(to_string(e.model)); })
      .def_readonly("r_mean", &RBEstimate::r_mean)
      .def_readonly("r_std", &RBEstimate::r_std)
      .def_readonly("fits", &RBEstimate::fits)
      .def_readonly("failures", &RBEstimate::failures);

  m.def(
      "run_rb",
      [](const GateSet& g, const RBConfig& c) {
        const RBDataset data = run_rb(g, c);
        py::dict d;
        d["lengths"] = data.lengths;
        d["means"] = data.means;
        d["stds"] = data.stds();
        return d;
      },
      py::arg("gateset"), py::arg("config"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "fit_decay",
      [](const std::vector<double>& lengths, const std::vector<double>& values, const std::string& model) {
        return fit_decay(lengths, values, parse_model(model));
      },
      py::arg("lengths"), py::arg("values"), py::arg("model") = "first");
  m.def(
      "estimate_r",
      [](const GateSet& g, const RBConfig& c, const std::string& model) {
        const FitModel fm = parse_model(model);
        py::gil_scoped_release release;
        return estimate_r(g, c, fm);
      },
      py::arg("gateset"), py::arg("config"), py::arg("model") = "first");

  m.def("agsi", py::overload_cast<const GateSet&>(&agsi), py::arg("gateset"));
  m.def(
      "gamma",
      [](const GateSet& g) {
        const GammaResult res = gamma_and_r_gamma(build_l_map(g));
        return py::make_tuple(res.gamma, res.r_gamma);
      },
      py::arg("gateset"));
  m.def("l_map", &build_l_map, py::arg("gateset"), py::arg("primed") = false);
  m.def(
      "exact_decay", [](const GateSet& g, const std::vector<int>& lengths) {
        return exact_decay(g, Spam::ideal(), lengths).p;
      },
      py::arg("gateset"), py::arg("lengths"));
  m.def(
      "predicted_decay",
      [](const GateSet& g, const std::vector<int>& lengths) { return predicted_decay(g, Spam::ideal(), lengths); },
      py::arg("gateset"), py::arg("lengths"));
  m.def(
      "delta_diamond", [](const GateSet& g) { return delta_diamond(g).delta_diamond; }, py::arg("gateset"));
  m.def(
      "brute_force_pm", [](const GateSet& g, int m) { return brute_force_pm(g, Spam::ideal(), m); },
      py::arg("gateset"), py::arg("m"));

  m.def(
      "wallman_gauge", [](const GateSet& g) { return wallman_dict(wallman_gauge(g)); }, py::arg("gateset"));
  m.def(
      "epsilon_min_search",
      [](const GateSet& g, int restarts, std::uint64_t seed) {
        const EpsilonMinResult res = epsilon_min_search(g, restarts, seed);
        py::dict d;
        d["epsilon_min"] = res.epsilon_min;
        d["epsilon_input"] = res.epsilon_input;
        d["m_best"] = res.m_best.matrix();
        d["min_choi_eigenvalue"] = res.min_choi_eigenvalue;
        d["improved"] = res.improved;
        return d;
      },
      py::arg("gateset"), py::arg("restarts") = 20, py::arg("seed") = 20170101);
  m.def(
      "counterexample",
      [](double lambda, const std::vector<double>& grid) {
        const CounterexampleResult res = counterexample_epsilon_min(lambda, grid);
        py::list rows;
        for (const auto& r : res.rows) {
          py::dict d;
          d["alpha"] = r.alpha;
          d["epsilon"] = r.epsilon;
          d["min_choi_eigenvalue"] = r.min_choi_eigenvalue;
          d["all_cp"] = r.all_cp;
          d["r_reference"] = r.r_reference;
          rows.append(d);
        }
        return py::make_tuple(rows, res.successes);
      },
      py::arg("lam"), py::arg("alpha_grid"));
  m.def("counterexample_gate_agi", &counterexample_gate_agi, py::arg("lam"), py::arg("alpha"));

  m.def(
      "validate_config",
      [](const std::string& text) { return parse_experiment_config(text).violations; }, py::arg("text"));
  m.def(
      "run_config",
      [](const std::string& text, const std::string& out_dir) {
        ConfigReport report = parse_experiment_config(text);
        if (!report.ok()) {
          std::string msg = "invalid config";
          for (const auto& v : report.violations) msg += "; " + v;
          throw std::invalid_argument(msg);
        }
        report.config->output_dir = out_dir;
        py::gil_scoped_release release;
        return run_experiment(*report.config).files;
      },
      py::arg("text"), py::arg("out_dir"));
}
