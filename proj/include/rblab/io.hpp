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

#pragma once

#include "rblab/clifford.hpp"
#include "rblab/gauge.hpp"
#include "rblab/rb_protocol.hpp"
#include "rblab/rb_theory.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rblab::io {

/// Locale-independent shortest form with at most 17 significant digits.
std::string format_double(double v);

/// Resolved configuration (a JSON document) and seed attached to every output.
struct Provenance {
  std::string config_json = "{}";
  std::uint64_t seed = 0;
};

/// A CSV table preceded by '#'-prefixed provenance lines.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render(const Provenance& provenance) const;
};

CsvTable rb_dataset_table(const RBDataset& data, int k_per_length);
CsvTable theory_table(const std::vector<int>& lengths, const std::vector<double>& p_exact,
                      const std::vector<double>& p_predicted, double delta);
CsvTable counterexample_table(const CounterexampleResult& result);

struct SweepRow {
  double parameter = 0;
  double r_hat = 0;
  double r_std = 0;
  double r_gamma = 0;
  double epsilon = 0;
};
CsvTable sweep_table(const std::string& parameter, const std::vector<SweepRow>& rows);

/// {model, A, B, C, p, r_hat, r_std, failures, no_decay_fits, p_at_bound_fits,
/// repeats, other_models, seed, config}; A, B, C and p are means over the
/// successful fits.
std::string estimate_json(const std::vector<RBEstimate>& estimates, const Provenance& provenance);
/// {gamma, r_gamma, delta_diamond, eigenvalues: [[re, im], ...], seed, config}.
std::string theory_json(const GammaResult& gamma, const DeltaBound& delta, const Provenance& provenance);
std::string wallman_json(const WallmanGauge& w, const Provenance& provenance);
/// Wallman gauge, epsilon_min search and the gauge report for L^-1.
std::string gauge_demo_json(double epsilon_input, const WallmanGauge& w, const EpsilonMinResult& emin,
                            const GaugeReport& report, const Provenance& provenance);
/// PTM rows of the primitives and every imperfect Clifford, the compilation
/// words and the error-model parameters.
std::string gateset_json(const GateSet& gateset, const Provenance& provenance);

}  // namespace rblab::io
